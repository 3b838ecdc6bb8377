#pragma once

#include <optional>
#include <vector>

#include "spinwit/common.hpp"
#include "spinwit/spin_ops.hpp"
#include "spinwit/states.hpp"

namespace spinwit {

// 3N x 3N, site-major: row index 3(site-1) + axis. Quadratic forms reproduce
// the quantum Fisher information of the corresponding weighted spin operator,
// c^T Q^L c = F_Q[rho, A(c)].
struct FisherMatrixLocal {
  MatrixXd matrix;
  int num_qubits() const { return static_cast<int>(matrix.rows()) / 3; }
};

// Same layout; entries are (1/4) Cov(sigma_i^a, sigma_j^b), so that
// c^T Gamma^L c = Var(A(c)).
struct CovarianceMatrixLocal {
  MatrixXd matrix;
  int num_qubits() const { return static_cast<int>(matrix.rows()) / 3; }
};

struct FisherMatrixGlobal {
  Matrix3d matrix;  // quadratic form gives F_Q[rho, J_n]
};

struct CovarianceMatrixGlobal {
  Matrix3d matrix;  // entries Cov(J_a, J_b)
};

// F_Q = 2 sum_{k,l} (p_k - p_l)^2 / (p_k + p_l) |<k|H|l>|^2 over eigenpairs
// with p_k + p_l >= cutoff.
double qfi(const SpectralDecomposition& sd, const MatrixXcd& h, double cutoff = kPairSkip);
double qfi(const DensityMatrix& rho, const MatrixXcd& h, double cutoff = kPairSkip);
double qfi(const DensityMatrix& rho, const SpinObservable& h, double cutoff = kPairSkip);

// Fisher information of the projective measurement {projectors} about theta = 0
// of the phase family e^{-iH theta} rho e^{iH theta}, using the analytic
// derivative dp_m = Tr(-i[H, rho] P_m). Outcomes with probability below eps
// are skipped. Throws if the projectors do not resolve the identity.
double classical_fisher(const DensityMatrix& rho, const MatrixXcd& h,
                        const std::vector<MatrixXcd>& projectors, double eps = kPairSkip);

// Central-difference cross-check of classical_fisher at phase step theta.
double classical_fisher_fd(const DensityMatrix& rho, const MatrixXcd& h,
                           const std::vector<MatrixXcd>& projectors, double theta,
                           double eps = kPairSkip);

FisherMatrixLocal local_fisher_matrix(const DensityMatrix& rho, double cutoff = kPairSkip);
FisherMatrixLocal local_fisher_matrix(const SpectralDecomposition& sd, int num_qubits,
                                      double cutoff = kPairSkip);
// Literal double-loop evaluation over all eigenpairs with dense embedded Pauli
// matrices; reference implementation for tests and benchmarks.
FisherMatrixLocal local_fisher_matrix_serial(const DensityMatrix& rho,
                                             double cutoff = kPairSkip);

FisherMatrixGlobal global_fisher_matrix(const DensityMatrix& rho, double cutoff = kPairSkip);
FisherMatrixGlobal global_fisher_matrix(const SpectralDecomposition& sd, int num_qubits,
                                        double cutoff = kPairSkip);

CovarianceMatrixLocal local_covariance_matrix(const DensityMatrix& rho);
CovarianceMatrixGlobal global_covariance_matrix(const DensityMatrix& rho);

// Covariance matrices of the product of single-site marginals, assembled
// directly from the Bloch vectors: per-site blocks (I - m m^T)/4, with no
// cross-site correlations.
CovarianceMatrixLocal product_marginals_local_covariance(const std::vector<BlochVector>& m);
CovarianceMatrixGlobal product_marginals_global_covariance(const std::vector<BlochVector>& m);

// |<[H1, H2]>|^2 / Var(H2), a lower bound on F_Q[rho, H1]. No value when the
// variance denominator is below eps.
std::optional<double> commutator_lower_bound(const DensityMatrix& rho, const MatrixXcd& h1,
                                             const MatrixXcd& h2, double eps = 1e-12);

// Best phase variance attainable without entanglement: 1 / |c|^2. Throws on a
// zero field.
double shot_noise_bound(const LocalVectorField& c);

}  // namespace spinwit
