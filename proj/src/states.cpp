#include "spinwit/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace spinwit {

namespace {

void check_qubit_count(int n, int qubit_cap) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  if (n > qubit_cap)
    throw std::invalid_argument("qubit count " + std::to_string(n) +
                                " exceeds cap " + std::to_string(qubit_cap));
}

}  // namespace

StateVector::StateVector(int n, VectorXcd amp) : num_qubits(n), amplitudes(std::move(amp)) {
  check_qubit_count(n, kDefaultQubitCap);
  if (amplitudes.size() != dim_of(n))
    throw std::invalid_argument("amplitude vector has wrong length");
  if (std::abs(amplitudes.squaredNorm() - 1.0) > kHermTol)
    throw std::invalid_argument("state vector is not normalized");
}

StateVector normalized_state(int num_qubits, const VectorXcd& amplitudes) {
  double norm = amplitudes.norm();
  if (norm <= 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  return StateVector(num_qubits, amplitudes / norm);
}

DensityMatrix::DensityMatrix(int n, MatrixXcd m) : num_qubits(n), matrix(std::move(m)) {
  check_qubit_count(n, kDefaultQubitCap);
  const int d = dim_of(n);
  if (matrix.rows() != d || matrix.cols() != d)
    throw std::invalid_argument("density matrix has wrong dimension");
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(matrix.trace().real() - 1.0) > kHermTol ||
      std::abs(matrix.trace().imag()) > kHermTol)
    throw std::invalid_argument("density matrix trace is not 1");
}

DensityMatrix::DensityMatrix(const StateVector& psi)
    : DensityMatrix(psi.num_qubits,
                    psi.amplitudes * psi.amplitudes.adjoint()) {}

double DensityMatrix::purity() const { return (matrix * matrix).trace().real(); }

void DensityMatrix::validate() const {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed during validation");
  if (es.eigenvalues().minCoeff() < kNegEigFloor)
    throw std::invalid_argument("density matrix has eigenvalue below -1e-10");
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b, int qubit_cap) {
  const int n = a.num_qubits + b.num_qubits;
  check_qubit_count(n, qubit_cap);
  const int da = a.dim(), db = b.dim();
  MatrixXcd out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.matrix(i, j) * b.matrix;
  return DensityMatrix(n, std::move(out));
}

StateVector tensor_product(const StateVector& a, const StateVector& b, int qubit_cap) {
  const int n = a.num_qubits + b.num_qubits;
  check_qubit_count(n, qubit_cap);
  VectorXcd out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    out.segment(i * b.dim(), b.dim()) = a.amplitudes(i) * b.amplitudes;
  return StateVector(n, std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.num_qubits;
  if (keep.empty()) throw std::invalid_argument("keep set must be nonempty");
  for (size_t s = 0; s < keep.size(); ++s) {
    if (keep[s] < 1 || keep[s] > n)
      throw std::invalid_argument("keep index out of range");
    if (s > 0 && keep[s] <= keep[s - 1])
      throw std::invalid_argument("keep indices must be strictly increasing");
  }
  const int nk = static_cast<int>(keep.size());
  const int nt = n - nk;
  const int dk = 1 << nk, dt = 1 << nt;

  // Bit positions (from most significant) of kept and traced sites.
  std::vector<int> kshift, tshift;
  {
    std::vector<bool> kept(n + 1, false);
    for (int s : keep) kept[s] = true;
    for (int s = 1; s <= n; ++s)
      (kept[s] ? kshift : tshift).push_back(n - s);
  }
  auto expand = [](const std::vector<int>& shifts, int bits) {
    int idx = 0;
    for (size_t b = 0; b < shifts.size(); ++b)
      if (bits & (1 << (static_cast<int>(shifts.size()) - 1 - static_cast<int>(b))))
        idx |= 1 << shifts[b];
    return idx;
  };

  MatrixXcd out = MatrixXcd::Zero(dk, dk);
  for (int r = 0; r < dk; ++r) {
    const int rbase = expand(kshift, r);
    for (int c = 0; c < dk; ++c) {
      const int cbase = expand(kshift, c);
      cxd sum = 0.0;
      for (int t = 0; t < dt; ++t) {
        const int tb = expand(tshift, t);
        sum += rho.matrix(rbase | tb, cbase | tb);
      }
      out(r, c) = sum;
    }
  }
  return DensityMatrix(nk, std::move(out));
}

DensityMatrix single_qubit_marginal(const DensityMatrix& rho, int site) {
  return partial_trace(rho, {site});
}

DensityMatrix product_of_marginals(const DensityMatrix& rho) {
  DensityMatrix out = single_qubit_marginal(rho, 1);
  for (int s = 2; s <= rho.num_qubits; ++s)
    out = tensor_product(out, single_qubit_marginal(rho, s));
  return out;
}

BlochVector bloch_vector(const DensityMatrix& rho1) {
  if (rho1.num_qubits != 1)
    throw std::invalid_argument("bloch_vector needs a single-qubit state");
  const MatrixXcd& r = rho1.matrix;
  Vector3d m;
  m(0) = 2.0 * r(0, 1).real();
  m(1) = -2.0 * r(0, 1).imag();
  m(2) = (r(0, 0) - r(1, 1)).real();
  return BlochVector{m};
}

std::vector<BlochVector> marginal_bloch_vectors(const DensityMatrix& rho) {
  std::vector<BlochVector> out;
  out.reserve(rho.num_qubits);
  for (int s = 1; s <= rho.num_qubits; ++s)
    out.push_back(bloch_vector(single_qubit_marginal(rho, s)));
  return out;
}

SpectralDecomposition spectral_decomposition(const DensityMatrix& rho, double cutoff) {
  if (cutoff < 0.0) throw std::invalid_argument("cutoff must be nonnegative");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho.matrix);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed on density matrix");

  const int d = rho.dim();
  SpectralDecomposition sd;
  sd.eigenvalues.resize(d);
  sd.eigenvectors.resize(d, d);
  // Eigen returns ascending order; flip to descending.
  for (int k = 0; k < d; ++k) {
    sd.eigenvalues(k) = es.eigenvalues()(d - 1 - k);
    sd.eigenvectors.col(k) = es.eigenvectors().col(d - 1 - k);
  }

  double min_eig = sd.eigenvalues(d - 1);
  if (min_eig < kNegEigFloor)
    throw std::invalid_argument("density matrix eigenvalue below -1e-10");
  if (min_eig < 0.0) {
    for (int k = 0; k < d; ++k)
      if (sd.eigenvalues(k) < 0.0) sd.eigenvalues(k) = 0.0;
    sd.eigenvalues /= sd.eigenvalues.sum();
  }

  const double thresh = cutoff * sd.eigenvalues(0);
  sd.negligible.resize(d);
  for (int k = 0; k < d; ++k) sd.negligible[k] = sd.eigenvalues(k) < thresh;
  return sd;
}

namespace {

MatrixXcd matrix_sqrt_psd(const MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  // Tr sqrt(sqrt(a) b sqrt(a)) equals the nuclear norm of sqrt(a) sqrt(b),
  // which is symmetric in (a, b) since singular values are adjoint-invariant.
  Eigen::JacobiSVD<MatrixXcd> svd(matrix_sqrt_psd(a.matrix) * matrix_sqrt_psd(b.matrix));
  const double tr = svd.singularValues().sum();
  return std::min(tr * tr, 1.0);
}

}  // namespace spinwit
