#include "spinwit/pauli.hpp"

#include <stdexcept>

namespace spinwit {

namespace {

constexpr cxd kI{0.0, 1.0};

// sigma|r> = coeff * |r'>, returned as (r', coeff); mask selects the site bit.
inline std::pair<int, cxd> pauli_action(int axis, int mask, int r) {
  switch (axis) {
    case kX: return {r ^ mask, cxd(1.0, 0.0)};
    case kY: return {r ^ mask, (r & mask) ? -kI : kI};
    case kZ: return {r, (r & mask) ? cxd(-1.0, 0.0) : cxd(1.0, 0.0)};
    default: throw std::invalid_argument("axis must be 0, 1 or 2");
  }
}

}  // namespace

const Eigen::Matrix2cd& pauli_matrix(int axis) {
  static const Eigen::Matrix2cd sx = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  static const Eigen::Matrix2cd sy = (Eigen::Matrix2cd() << 0, -kI, kI, 0).finished();
  static const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  switch (axis) {
    case kX: return sx;
    case kY: return sy;
    case kZ: return sz;
    default: throw std::invalid_argument("axis must be 0, 1 or 2");
  }
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

MatrixXcd embed_site(int num_qubits, int site, const Eigen::Matrix2cd& op) {
  if (site < 1 || site > num_qubits) throw std::invalid_argument("site out of range");
  const int left = 1 << (site - 1);
  const int right = 1 << (num_qubits - site);
  MatrixXcd out = kron(MatrixXcd::Identity(left, left), op);
  return kron(out, MatrixXcd::Identity(right, right));
}

void apply_pauli_left(int axis, int site, int num_qubits, const MatrixXcd& in,
                      MatrixXcd& out) {
  const int mask = site_mask(num_qubits, site);
  const int d = static_cast<int>(in.rows());
  out.resize(d, in.cols());
  // (sigma M).row(r) = sigma_{r,c} M.row(c) with c the single nonzero column;
  // sigma_{r,c} equals the action coefficient of sigma|c> = coeff|r>.
  for (int r = 0; r < d; ++r) {
    switch (axis) {
      case kX: out.row(r) = in.row(r ^ mask); break;
      case kY: out.row(r) = ((r & mask) ? kI : -kI) * in.row(r ^ mask); break;
      default: out.row(r) = ((r & mask) ? -1.0 : 1.0) * in.row(r); break;
    }
  }
}

cxd trace_pauli_times(int axis, int site, int num_qubits, const MatrixXcd& M) {
  const int mask = site_mask(num_qubits, site);
  const int d = static_cast<int>(M.rows());
  cxd sum = 0.0;
  // Tr(sigma M) = sum_c sigma_{tgt(c),c} M_{c,tgt(c)}.
  for (int c = 0; c < d; ++c) {
    auto [cp, coeff] = pauli_action(axis, mask, c);
    sum += coeff * M(c, cp);
  }
  return sum;
}

cxd trace_pauli_pair_times(int axis_a, int site_a, int axis_b, int site_b,
                           int num_qubits, const MatrixXcd& M) {
  const int mask_a = site_mask(num_qubits, site_a);
  const int mask_b = site_mask(num_qubits, site_b);
  const int d = static_cast<int>(M.rows());
  cxd sum = 0.0;
  // Tr(sigma_a sigma_b M) = sum_l (sigma_a)_{r,k} (sigma_b)_{k,l} M_{l,r}
  // following the unique nonzero path l -> k -> r.
  for (int l = 0; l < d; ++l) {
    auto [k, cb] = pauli_action(axis_b, mask_b, l);
    auto [r, ca] = pauli_action(axis_a, mask_a, k);
    sum += ca * cb * M(l, r);
  }
  return sum;
}

}  // namespace spinwit
