#pragma once

// N-qubit state representation: dense vectors and density matrices with
// qubit 1 as the most significant bit of the basis index.

#include <optional>
#include <vector>

#include "spinwit/common.hpp"

namespace spinwit {

struct StateVector {
  int num_qubits = 0;
  VectorXcd amplitudes;

  StateVector() = default;
  // Throws std::invalid_argument unless the squared norm is 1 within 1e-12.
  StateVector(int n, VectorXcd amp);

  int dim() const { return static_cast<int>(amplitudes.size()); }
};

// Builds a unit StateVector from an unnormalized amplitude vector.
StateVector normalized_state(int num_qubits, const VectorXcd& amplitudes);

struct DensityMatrix {
  int num_qubits = 0;
  MatrixXcd matrix;

  DensityMatrix() = default;
  // Checks dimension, Hermiticity and unit trace (1e-12).  Positivity is not
  // eigensolved here; spectral_decomposition enforces the -1e-10 floor, and
  // validate() runs the full check where tests need it.
  DensityMatrix(int n, MatrixXcd m);
  explicit DensityMatrix(const StateVector& psi);

  int dim() const { return static_cast<int>(matrix.rows()); }
  double purity() const;
  // Full invariant check including the minimum-eigenvalue floor.
  void validate() const;
};

struct BlochVector {
  Vector3d m;
};

struct SpectralDecomposition {
  // Descending eigenvalues; negatives in [-1e-10, 0) clamped to zero with the
  // spectrum renormalized to unit sum.  negligible[k] marks p_k below
  // cutoff * p_max; such eigenvalues are treated as exact zeros by the Fisher
  // pair sums.
  VectorXd eigenvalues;
  MatrixXcd eigenvectors;  // column k pairs with eigenvalues[k]
  std::vector<bool> negligible;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
};

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                             int qubit_cap = kDefaultQubitCap);

// keep: 1-based site indices, strictly increasing.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

DensityMatrix single_qubit_marginal(const DensityMatrix& rho, int site);

DensityMatrix product_of_marginals(const DensityMatrix& rho);

BlochVector bloch_vector(const DensityMatrix& rho1);

// Bloch vectors of all single-qubit marginals, site order.
std::vector<BlochVector> marginal_bloch_vectors(const DensityMatrix& rho);

SpectralDecomposition spectral_decomposition(const DensityMatrix& rho,
                                             double cutoff = kEigCutoffRel);

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, symmetric, in [0,1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

StateVector tensor_product(const StateVector& a, const StateVector& b,
                           int qubit_cap = kDefaultQubitCap);

}  // namespace spinwit
