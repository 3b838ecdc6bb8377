#include "spinwit/sphere_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace spinwit {

SphereQuadratic maximize_quadratic_on_sphere(const MatrixXd& a, const VectorXd& b) {
  const int d = static_cast<int>(a.rows());
  if (a.cols() != d || b.size() != d)
    throw std::invalid_argument("sphere quadratic: shape mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const VectorXd lam = es.eigenvalues();  // ascending
  const MatrixXd u = es.eigenvectors();
  const double top = lam(d - 1);
  const VectorXd beta = u.transpose() * b;

  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  const double deg_tol = 1e-12 * scale;
  const double beta_tol = 1e-15 * std::max(1.0, b.norm());

  // Work in sigma = mu - lambda_max with the exact gaps g_k = lambda_max -
  // lambda_k, so tiny multipliers keep full relative precision and the
  // near-hard case degrades gracefully.
  VectorXd gap(d);
  for (int k = 0; k < d; ++k) gap(k) = top - lam(k);

  double top_weight = 0.0;
  for (int k = 0; k < d; ++k)
    if (gap(k) <= deg_tol) top_weight += beta(k) * beta(k);

  // Finite part of the secular sum at sigma = 0.
  double nbar2 = 0.0;
  for (int k = 0; k < d; ++k)
    if (gap(k) > deg_tol) nbar2 += (beta(k) / gap(k)) * (beta(k) / gap(k));

  VectorXd x;
  if (top_weight <= beta_tol * beta_tol && nbar2 <= 1.0) {
    // Hard case: mu = lambda_max, pad to unit norm inside the top eigenspace.
    x = VectorXd::Zero(d);
    for (int k = 0; k < d; ++k)
      if (gap(k) > deg_tol) x += beta(k) / gap(k) * u.col(k);
    x += std::sqrt(std::max(0.0, 1.0 - nbar2)) * u.col(d - 1);
  } else {
    const auto phi = [&](double sigma) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        const double denom = sigma + gap(k);
        s += (beta(k) / denom) * (beta(k) / denom);
      }
      return s;
    };
    // phi decreases monotonically; bracket the unit crossing geometrically so
    // roots many orders of magnitude below the eigenvalue scale stay exact.
    double lo = 1e-300, hi = b.norm() + scale;
    for (int it = 0; it < 500; ++it) {
      const double mid = std::sqrt(lo) * std::sqrt(hi);
      if (mid <= lo || mid >= hi) break;
      (phi(mid) > 1.0 ? lo : hi) = mid;
    }
    const double sigma = hi;  // phi(hi) <= 1 bounds every coefficient
    x = VectorXd::Zero(d);
    for (int k = 0; k < d; ++k) x += beta(k) / (sigma + gap(k)) * u.col(k);
    x.normalize();
  }

  SphereQuadratic result;
  result.x = x;
  result.value = x.dot(a * x) + 2.0 * b.dot(x);
  return result;
}

SphereQuadratic minimize_quadratic_on_sphere(const MatrixXd& a, const VectorXd& b) {
  SphereQuadratic r = maximize_quadratic_on_sphere(-a, -b);
  r.value = -r.value;
  return r;
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol, int max_iter) {
  if (!(hi > lo)) throw std::invalid_argument("golden_section_min: empty interval");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace spinwit
