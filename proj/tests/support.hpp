#pragma once

// Shared test fixtures: hand-built reference states (independent of the model
// zoo, so they double as oracles for it) and seeded random-state ensembles.

#include <random>
#include <vector>

#include "spinwit/states.hpp"
#include "spinwit/spin_ops.hpp"

namespace testsup {

using namespace spinwit;

inline StateVector qubit(cxd a, cxd b) {
  VectorXcd v(2);
  v << a, b;
  return normalized_state(1, v);
}

inline StateVector up_z() { return qubit(1, 0); }
inline StateVector dn_z() { return qubit(0, 1); }
inline StateVector up_x() { return qubit(1, 1); }
inline StateVector dn_x() { return qubit(1, -1); }
inline StateVector up_y() { return qubit(1, cxd(0, 1)); }
inline StateVector dn_y() { return qubit(1, cxd(0, -1)); }

inline StateVector ghz_vec(int n) {
  VectorXcd v = VectorXcd::Zero(dim_of(n));
  v(0) = v(dim_of(n) - 1) = 1.0;
  return normalized_state(n, v);
}

inline DensityMatrix ghz(int n) { return DensityMatrix(ghz_vec(n)); }

inline DensityMatrix maximally_mixed(int n) {
  const int d = dim_of(n);
  return DensityMatrix(n, MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

// GHZ_K tensored with a maximally mixed remainder.
inline DensityMatrix rho_nk(int n, int k) {
  if (n == k) return ghz(k);
  return tensor_product(ghz(k), maximally_mixed(n - k));
}

inline VectorXcd random_complex_vector(int len, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXcd v(len);
  for (int i = 0; i < len; ++i) v(i) = cxd(g(rng), g(rng));
  return v;
}

inline StateVector random_pure(int n, std::mt19937_64& rng) {
  return normalized_state(n, random_complex_vector(dim_of(n), rng));
}

inline MatrixXcd random_ginibre(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cxd(g(rng), g(rng));
  return m;
}

inline DensityMatrix random_full_rank(int n, std::mt19937_64& rng) {
  const int d = dim_of(n);
  MatrixXcd g = random_ginibre(d, rng);
  MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(n, std::move(rho));
}

inline DensityMatrix random_rank(int n, int rank, std::mt19937_64& rng) {
  const int d = dim_of(n);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  MatrixXcd rho = MatrixXcd::Zero(d, d);
  double wsum = 0.0;
  for (int r = 0; r < rank; ++r) {
    const double w = u(rng);
    const StateVector psi = random_pure(n, rng);
    rho += w * (psi.amplitudes * psi.amplitudes.adjoint());
    wsum += w;
  }
  rho /= wsum;
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(n, std::move(rho));
}

inline StateVector random_product_pure(int n, std::mt19937_64& rng) {
  StateVector out = random_pure(1, rng);
  for (int s = 1; s < n; ++s) out = tensor_product(out, random_pure(1, rng));
  return out;
}

// Convex mixture of random pure product states: fully separable by construction.
inline DensityMatrix random_separable(int n, int terms, std::mt19937_64& rng) {
  const int d = dim_of(n);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  MatrixXcd rho = MatrixXcd::Zero(d, d);
  double wsum = 0.0;
  for (int t = 0; t < terms; ++t) {
    const double w = u(rng);
    const StateVector psi = random_product_pure(n, rng);
    rho += w * (psi.amplitudes * psi.amplitudes.adjoint());
    wsum += w;
  }
  rho /= wsum;
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(n, std::move(rho));
}

inline MatrixXcd random_hermitian(int d, std::mt19937_64& rng) {
  MatrixXcd g = random_ginibre(d, rng);
  return 0.5 * (g + g.adjoint().eval());
}

inline Vector3d random_unit_vec3(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector3d v;
  do {
    v = Vector3d(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline LocalVectorField random_field(int n, std::mt19937_64& rng, bool unit = false) {
  std::uniform_real_distribution<double> scale(0.2, 2.0);
  LocalVectorField c;
  for (int i = 0; i < n; ++i) {
    Vector3d v = random_unit_vec3(rng);
    if (!unit) v *= scale(rng);
    c.vectors.push_back(v);
  }
  return c;
}

}  // namespace testsup
