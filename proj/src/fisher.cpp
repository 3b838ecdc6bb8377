#include "spinwit/fisher.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "spinwit/pauli.hpp"

namespace spinwit {

namespace {

inline double pair_weight(double pk, double pl, double cutoff) {
  const double s = pk + pl;
  if (s < cutoff) return 0.0;
  const double diff = pk - pl;
  return diff * diff / s;
}

// Index range [begin, end) of the largest cluster of near-equal eigenvalues in
// the descending-sorted spectrum (consecutive gap <= kEigClusterGap). Pairs
// inside one cluster carry negligible Fisher weight: either both eigenvalues
// fall under the pair cutoff, or the weight is (gap)^2 / (p_k + p_l).
std::pair<int, int> largest_cluster(const VectorXd& p) {
  const int d = static_cast<int>(p.size());
  int best_b = 0, best_e = 1, b = 0;
  for (int k = 1; k <= d; ++k) {
    if (k == d || p(k - 1) - p(k) > kEigClusterGap) {
      if (k - b > best_e - best_b) {
        best_b = b;
        best_e = k;
      }
      b = k;
    }
  }
  return {best_b, best_e};
}

using ApplyOp = std::function<void(int, const MatrixXcd&, MatrixXcd&)>;

// S_ab = sum_{k,l} w_kl <k|O_a|l><l|O_b|k| with w_kl = (p_k-p_l)^2/(p_k+p_l).
// Only rows outside the largest eigenvalue cluster are materialized; the
// dropped mirror pairs (k in cluster, l outside) are restored through the
// Hermitian symmetry <k|O|l> = conj(<l|O|k>). Low-rank states therefore cost
// O(rank) rows instead of O(dim). apply(a, in, out) must set out = O_a * in.
MatrixXd fisher_quadratic_family(const SpectralDecomposition& sd, int num_ops,
                                 const ApplyOp& apply, double cutoff) {
  const VectorXd& p = sd.eigenvalues;
  const MatrixXcd& v = sd.eigenvectors;
  const int d = static_cast<int>(p.size());
  const auto [mb, me] = largest_cluster(p);
  const int mlen = me - mb;

  std::vector<int> rows;
  rows.reserve(d - mlen);
  for (int k = 0; k < d; ++k)
    if (k < mb || k >= me) rows.push_back(k);
  const int r = static_cast<int>(rows.size());
  if (r == 0) return MatrixXd::Zero(num_ops, num_ops);

  MatrixXcd vr(d, r);
  MatrixXd w(r, d);
  for (int j = 0; j < r; ++j) {
    vr.col(j) = v.col(rows[j]);
    for (int l = 0; l < d; ++l) w(j, l) = pair_weight(p(rows[j]), p(l), cutoff);
  }

  std::vector<MatrixXcd> t(num_ops);
  MatrixXcd scratch(d, d);
  for (int a = 0; a < num_ops; ++a) {
    apply(a, v, scratch);
    t[a] = vr.adjoint() * scratch;
  }

  MatrixXd s(num_ops, num_ops);
  // Entry-level parallelism; each (a,b) sum runs serially in a fixed order, so
  // the result is identical for any thread count.
#pragma omp parallel for collapse(2) schedule(static)
  for (int a = 0; a < num_ops; ++a)
    for (int b = 0; b < num_ops; ++b) {
      if (b < a) continue;
      cxd full = 0.0, mirror = 0.0;
      for (int j = 0; j < r; ++j) {
        full += (t[a].row(j).array() * t[b].row(j).array().conjugate() *
                 w.row(j).array())
                    .sum();
        if (mlen > 0)
          mirror += (t[a].row(j).segment(mb, mlen).array() *
                     t[b].row(j).segment(mb, mlen).array().conjugate() *
                     w.row(j).segment(mb, mlen).array())
                        .sum();
      }
      s(a, b) = std::real(full + std::conj(mirror));
    }
  for (int a = 0; a < num_ops; ++a)
    for (int b = 0; b < a; ++b) s(a, b) = s(b, a);
  return s;
}

void check_phase_generator(const DensityMatrix& rho, const MatrixXcd& h) {
  if (h.rows() != rho.dim() || h.cols() != rho.dim())
    throw std::invalid_argument("generator dimension does not match the state");
}

int qubits_from_dim(int dim) {
  int n = 0;
  while ((1 << n) < dim) ++n;
  return n;
}

}  // namespace

double qfi(const SpectralDecomposition& sd, const MatrixXcd& h, double cutoff) {
  if (cutoff < 0) throw std::invalid_argument("qfi: cutoff must be nonnegative");
  if (h.rows() != sd.dim() || h.cols() != sd.dim())
    throw std::invalid_argument("generator dimension does not match the state");
  const MatrixXcd t = sd.eigenvectors.adjoint() * h * sd.eigenvectors;
  const int d = sd.dim();
  double f = 0.0;
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l)
      f += 4.0 * pair_weight(sd.eigenvalues(k), sd.eigenvalues(l), cutoff) *
           std::norm(t(k, l));
  return f;
}

double qfi(const DensityMatrix& rho, const MatrixXcd& h, double cutoff) {
  check_phase_generator(rho, h);
  return qfi(spectral_decomposition(rho), h, cutoff);
}

double qfi(const DensityMatrix& rho, const SpinObservable& h, double cutoff) {
  return qfi(rho, h.matrix, cutoff);
}

double classical_fisher(const DensityMatrix& rho, const MatrixXcd& h,
                        const std::vector<MatrixXcd>& projectors, double eps) {
  check_phase_generator(rho, h);
  MatrixXcd resolution = MatrixXcd::Zero(rho.dim(), rho.dim());
  for (const auto& pm : projectors) resolution += pm;
  if ((resolution - MatrixXcd::Identity(rho.dim(), rho.dim())).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("classical_fisher: projectors do not resolve the identity");

  const MatrixXcd drho = cxd(0, -1) * (h * rho.matrix - rho.matrix * h);
  double f = 0.0;
  for (const auto& pm : projectors) {
    const double prob = std::real((rho.matrix * pm).trace());
    if (prob < eps) continue;
    const double dprob = std::real((drho * pm).trace());
    f += dprob * dprob / prob;
  }
  return f;
}

double classical_fisher_fd(const DensityMatrix& rho, const MatrixXcd& h,
                           const std::vector<MatrixXcd>& projectors, double theta,
                           double eps) {
  check_phase_generator(rho, h);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const auto rotate = [&](double angle) {
    const VectorXcd phases =
        (es.eigenvalues().array().cast<cxd>() * cxd(0, -angle)).exp().matrix();
    const MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return MatrixXcd(u * rho.matrix * u.adjoint());
  };
  const MatrixXcd plus = rotate(theta), minus = rotate(-theta);
  double f = 0.0;
  for (const auto& pm : projectors) {
    const double prob = std::real((rho.matrix * pm).trace());
    if (prob < eps) continue;
    const double dprob =
        (std::real((plus * pm).trace()) - std::real((minus * pm).trace())) / (2.0 * theta);
    f += dprob * dprob / prob;
  }
  return f;
}

FisherMatrixLocal local_fisher_matrix(const SpectralDecomposition& sd, int num_qubits,
                                      double cutoff) {
  const ApplyOp apply = [&](int a, const MatrixXcd& in, MatrixXcd& out) {
    apply_pauli_left(a % 3, a / 3 + 1, num_qubits, in, out);
  };
  FisherMatrixLocal q;
  q.matrix = 0.5 * fisher_quadratic_family(sd, 3 * num_qubits, apply, cutoff);
  return q;
}

FisherMatrixLocal local_fisher_matrix(const DensityMatrix& rho, double cutoff) {
  return local_fisher_matrix(spectral_decomposition(rho), rho.num_qubits, cutoff);
}

FisherMatrixLocal local_fisher_matrix_serial(const DensityMatrix& rho, double cutoff) {
  const auto sd = spectral_decomposition(rho);
  const int n = rho.num_qubits;
  const int d = rho.dim();
  const int m = 3 * n;
  std::vector<MatrixXcd> t(m);
  for (int a = 0; a < m; ++a) {
    const MatrixXcd op = embed_site(n, a / 3 + 1, pauli_matrix(a % 3));
    t[a] = sd.eigenvectors.adjoint() * op * sd.eigenvectors;
  }
  FisherMatrixLocal q;
  q.matrix.setZero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          acc += pair_weight(sd.eigenvalues(k), sd.eigenvalues(l), cutoff) *
                 std::real(t[a](k, l) * std::conj(t[b](k, l)));
      q.matrix(a, b) = 0.5 * acc;
    }
  return q;
}

FisherMatrixGlobal global_fisher_matrix(const SpectralDecomposition& sd, int num_qubits,
                                        double cutoff) {
  MatrixXcd tmp(sd.dim(), sd.dim());
  const ApplyOp apply = [&](int axis, const MatrixXcd& in, MatrixXcd& out) {
    out.setZero(in.rows(), in.cols());
    for (int site = 1; site <= num_qubits; ++site) {
      apply_pauli_left(axis, site, num_qubits, in, tmp);
      out += tmp;
    }
    out *= 0.5;
  };
  FisherMatrixGlobal q;
  q.matrix = 2.0 * fisher_quadratic_family(sd, 3, apply, cutoff);
  return q;
}

FisherMatrixGlobal global_fisher_matrix(const DensityMatrix& rho, double cutoff) {
  return global_fisher_matrix(spectral_decomposition(rho), rho.num_qubits, cutoff);
}

CovarianceMatrixLocal local_covariance_matrix(const DensityMatrix& rho) {
  const int n = rho.num_qubits;
  const int m = 3 * n;
  VectorXd mean(m);
  for (int a = 0; a < m; ++a)
    mean(a) = std::real(trace_pauli_times(a % 3, a / 3 + 1, n, rho.matrix));
  CovarianceMatrixLocal g;
  g.matrix.resize(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      // Re Tr(sigma_a sigma_b rho) is the symmetrized second moment.
      const double second = std::real(
          trace_pauli_pair_times(a % 3, a / 3 + 1, b % 3, b / 3 + 1, n, rho.matrix));
      g.matrix(a, b) = g.matrix(b, a) = 0.25 * (second - mean(a) * mean(b));
    }
  return g;
}

CovarianceMatrixGlobal global_covariance_matrix(const DensityMatrix& rho) {
  const CovarianceMatrixLocal local = local_covariance_matrix(rho);
  const int n = local.num_qubits();
  CovarianceMatrixGlobal g;
  g.matrix.setZero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.matrix += local.matrix.block<3, 3>(3 * i, 3 * j);
  return g;
}

CovarianceMatrixLocal product_marginals_local_covariance(const std::vector<BlochVector>& m) {
  const int n = static_cast<int>(m.size());
  CovarianceMatrixLocal g;
  g.matrix.setZero(3 * n, 3 * n);
  for (int i = 0; i < n; ++i)
    g.matrix.block<3, 3>(3 * i, 3 * i) =
        0.25 * (Matrix3d::Identity() - m[i].m * m[i].m.transpose());
  return g;
}

CovarianceMatrixGlobal product_marginals_global_covariance(const std::vector<BlochVector>& m) {
  CovarianceMatrixGlobal g;
  g.matrix.setZero();
  for (const auto& mi : m)
    g.matrix += 0.25 * (Matrix3d::Identity() - mi.m * mi.m.transpose());
  return g;
}

std::optional<double> commutator_lower_bound(const DensityMatrix& rho, const MatrixXcd& h1,
                                             const MatrixXcd& h2, double eps) {
  check_phase_generator(rho, h1);
  check_phase_generator(rho, h2);
  const cxd mean_comm = (rho.matrix * (h1 * h2 - h2 * h1)).trace();
  const double mean2 = std::real((rho.matrix * h2).trace());
  const double var2 = std::real((rho.matrix * h2 * h2).trace()) - mean2 * mean2;
  if (var2 <= eps) return std::nullopt;
  return std::norm(mean_comm) / var2;
}

double shot_noise_bound(const LocalVectorField& c) {
  const double n2 = c.norm_sq();
  if (n2 <= 0.0) throw std::invalid_argument("shot_noise_bound: zero field");
  return 1.0 / n2;
}

}  // namespace spinwit
