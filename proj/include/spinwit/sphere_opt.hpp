#pragma once

#include <functional>

#include "spinwit/common.hpp"

namespace spinwit {

struct SphereQuadratic {
  VectorXd x;    // extremizer on the unit sphere
  double value;  // x^T A x + 2 b^T x at x
};

// Global extremum of x^T A x + 2 b^T x over |x| = 1 in R^d, d = a.rows().
// Solved through the eigendecomposition of A and the monotone secular equation
// sum_k beta_k^2 / (mu - lambda_k)^2 = 1 for the multiplier, including the
// hard case where b carries no weight on the extremal eigenspace. The KKT
// certificate (mu I - A) x = b with mu beyond the extremal eigenvalue makes
// the result a certified global extremum.
SphereQuadratic maximize_quadratic_on_sphere(const MatrixXd& a, const VectorXd& b);
SphereQuadratic minimize_quadratic_on_sphere(const MatrixXd& a, const VectorXd& b);

// Golden-section search for a minimizer of f on [lo, hi]; returns the midpoint
// of the final bracket. Unimodality on the bracket is the caller's concern.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-10, int max_iter = 200);

}  // namespace spinwit
