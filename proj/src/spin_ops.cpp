#include "spinwit/spin_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "spinwit/pauli.hpp"

namespace spinwit {

double LocalVectorField::norm_sq() const {
  double s = 0.0;
  for (const auto& n : vectors) s += n.squaredNorm();
  return s;
}

bool LocalVectorField::locally_normalized(double tol) const {
  for (const auto& n : vectors)
    if (std::abs(n.norm() - 1.0) > tol) return false;
  return true;
}

VectorXd LocalVectorField::flattened() const {
  VectorXd c(3 * num_sites());
  for (int i = 0; i < num_sites(); ++i) c.segment<3>(3 * i) = vectors[i];
  return c;
}

LocalVectorField LocalVectorField::from_flat(const VectorXd& c) {
  if (c.size() % 3 != 0) throw std::invalid_argument("flat field length not divisible by 3");
  LocalVectorField out;
  out.vectors.resize(c.size() / 3);
  for (size_t i = 0; i < out.vectors.size(); ++i) out.vectors[i] = c.segment<3>(3 * i);
  return out;
}

SpinObservable weighted_spin_operator(const LocalVectorField& c) {
  const int n = c.num_sites();
  if (n < 1) throw std::invalid_argument("field must cover at least one site");
  const int d = dim_of(n);
  MatrixXcd m = MatrixXcd::Zero(d, d);
  for (int i = 0; i < n; ++i)
    for (int axis = 0; axis < 3; ++axis) {
      if (c.vectors[i](axis) == 0.0) continue;
      m += (0.5 * c.vectors[i](axis)) * embed_site(n, i + 1, pauli_matrix(axis));
    }
  return SpinObservable{n, std::move(m), c};
}

SpinObservable collective_spin(int num_qubits, const Vector3d& n) {
  return weighted_spin_operator(LocalVectorField(num_qubits, n));
}

LocalVectorField commutator_field(const LocalVectorField& c1, const LocalVectorField& c2) {
  if (c1.num_sites() != c2.num_sites())
    throw std::invalid_argument("commutator_field: site count mismatch");
  LocalVectorField c3;
  c3.vectors.reserve(c1.num_sites());
  for (int i = 0; i < c1.num_sites(); ++i)
    c3.vectors.push_back(c1.vectors[i].cross(c2.vectors[i]));
  return c3;
}

double mean_value(const DensityMatrix& rho, const MatrixXcd& op) {
  return (rho.matrix * op).trace().real();
}

double variance(const DensityMatrix& rho, const MatrixXcd& op) {
  const double m = mean_value(rho, op);
  return (rho.matrix * op * op).trace().real() - m * m;
}

Moments moments(const DensityMatrix& rho, const SpinObservable& a, const SpinObservable& b) {
  if (a.matrix.rows() != rho.dim() || b.matrix.rows() != rho.dim())
    throw std::invalid_argument("moments: dimension mismatch");
  Moments out;
  out.mean_a = mean_value(rho, a.matrix);
  out.var_a = std::max((rho.matrix * a.matrix * a.matrix).trace().real() - out.mean_a * out.mean_a, -1e-12);
  const double mean_b = mean_value(rho, b.matrix);
  out.cov_ab = 0.5 * (rho.matrix * (a.matrix * b.matrix + b.matrix * a.matrix)).trace().real() -
               out.mean_a * mean_b;
  return out;
}

Moments moments(const DensityMatrix& rho, const SpinObservable& a) {
  return moments(rho, a, a);
}

double local_variance_sum(const LocalVectorField& c, const std::vector<BlochVector>& marginals) {
  if (static_cast<int>(marginals.size()) != c.num_sites())
    throw std::invalid_argument("local_variance_sum: site count mismatch");
  double s = c.norm_sq();
  for (int i = 0; i < c.num_sites(); ++i) {
    const double proj = c.vectors[i].dot(marginals[i].m);
    s -= proj * proj;
  }
  return s;
}

std::pair<Vector3d, Vector3d> plane_basis(const Vector3d& axis,
                                          const std::optional<Vector3d>& reference) {
  const double n = axis.norm();
  if (n < 1e-14) {
    if (reference && reference->norm() > 1e-14) return plane_basis(*reference);
    return {Vector3d::UnitX(), Vector3d::UnitY()};
  }
  const Vector3d a = axis / n;
  // Pick the coordinate axis least aligned with a; deterministic for ties
  // (first minimal component wins).
  int least = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(a(k)) < std::abs(a(least))) least = k;
  Vector3d u = Vector3d::Unit(least) - a(least) * a;
  u.normalize();
  return {u, a.cross(u)};
}

}  // namespace spinwit
