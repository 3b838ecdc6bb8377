#pragma once

// Weighted collective spin observables A(c) = (1/2) sum_i n_i . sigma_i and
// their moments.  A LocalVectorField carries one 3-vector per site; "locally
// normalized" means every |n_i| = 1.

#include <optional>
#include <vector>

#include "spinwit/states.hpp"

namespace spinwit {

struct LocalVectorField {
  std::vector<Vector3d> vectors;

  LocalVectorField() = default;
  explicit LocalVectorField(std::vector<Vector3d> v) : vectors(std::move(v)) {}
  // All sites set to the same vector.
  LocalVectorField(int num_sites, const Vector3d& n) : vectors(num_sites, n) {}

  int num_sites() const { return static_cast<int>(vectors.size()); }
  double norm_sq() const;
  bool locally_normalized(double tol = 1e-10) const;

  // Flat (site-major) 3N-vector view used by the Fisher quadratic forms.
  VectorXd flattened() const;
  static LocalVectorField from_flat(const VectorXd& c);
};

struct SpinObservable {
  int num_qubits = 0;
  MatrixXcd matrix;
  std::optional<LocalVectorField> provenance;
};

SpinObservable weighted_spin_operator(const LocalVectorField& c);

// J_n = n . J; equals weighted_spin_operator with every site vector n.
SpinObservable collective_spin(int num_qubits, const Vector3d& n);

// c3 with per-site n_i x n'_i; satisfies [A(c1), A(c2)] = i A(c3).
LocalVectorField commutator_field(const LocalVectorField& c1, const LocalVectorField& c2);

struct Moments {
  double mean_a = 0.0;
  double var_a = 0.0;
  double cov_ab = 0.0;
};

Moments moments(const DensityMatrix& rho, const SpinObservable& a, const SpinObservable& b);
Moments moments(const DensityMatrix& rho, const SpinObservable& a);

double mean_value(const DensityMatrix& rho, const MatrixXcd& op);
double variance(const DensityMatrix& rho, const MatrixXcd& op);

// 4 Var(A(c)) over the product of marginals: |c|^2 - sum_i (n_i . m_i)^2.
double local_variance_sum(const LocalVectorField& c, const std::vector<BlochVector>& marginals);

// Deterministic orthonormal basis (u, v) of the plane orthogonal to axis with
// u x v pointing along axis.  For axis ~ 0 the convention is (e_x, e_y), or a
// pair orthogonal to `reference` when one is supplied; keeps optimizers
// reproducible at maximally mixed sites.
std::pair<Vector3d, Vector3d> plane_basis(const Vector3d& axis,
                                          const std::optional<Vector3d>& reference = std::nullopt);

}  // namespace spinwit
