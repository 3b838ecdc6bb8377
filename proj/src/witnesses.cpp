#include "spinwit/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spinwit/sphere_opt.hpp"

namespace spinwit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deterministic sign for reported eigenvectors: the component of largest
// magnitude is made positive.
VectorXd canonical_sign(VectorXd v) {
  int imax = 0;
  for (int k = 1; k < v.size(); ++k)
    if (std::abs(v(k)) > std::abs(v(imax))) imax = k;
  if (v(imax) < 0) v = -v;
  return v;
}

Vector3d canonical_sign(Vector3d v) {
  VectorXd w = canonical_sign(VectorXd(v));
  return Vector3d(w(0), w(1), w(2));
}

struct TopEig {
  double value;
  VectorXd vector;
};

TopEig top_eigenpair(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const int last = static_cast<int>(m.rows()) - 1;
  return {es.eigenvalues()(last), canonical_sign(VectorXd(es.eigenvectors().col(last)))};
}

// Top eigenvector of m, with ties inside a degenerate top eigenspace broken
// toward the direction maximizing tie^T c. Any eigenvector is an equally valid
// maximizer of the Rayleigh quotient, so preferring the one with the largest
// tie-form keeps dependent ratios well defined whenever the eigenspace allows.
TopEig top_eigenpair_tiebreak(const MatrixXd& m, const MatrixXd& tie) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const int d = static_cast<int>(m.rows());
  const VectorXd& ev = es.eigenvalues();
  const double lmax = ev(d - 1);
  const double scale = std::max({1.0, std::abs(ev(0)), std::abs(lmax)});
  int first = d - 1;
  while (first > 0 && ev(first - 1) >= lmax - 1e-10 * scale) --first;
  const int mult = d - first;
  if (mult == 1) return {lmax, canonical_sign(VectorXd(es.eigenvectors().col(d - 1)))};
  const MatrixXd basis = es.eigenvectors().rightCols(mult);
  Eigen::SelfAdjointEigenSolver<MatrixXd> sub(basis.transpose() * tie * basis);
  if (sub.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const VectorXd v = basis * sub.eigenvectors().col(mult - 1);
  return {lmax, canonical_sign(VectorXd(v.normalized()))};
}

// Everything the coefficients share; built once per report.
struct Context {
  int n = 0;
  MatrixXd ql;   // local Fisher matrix
  Matrix3d qg;   // global Fisher matrix
  MatrixXd gl;   // local covariance of rho
  Matrix3d gg;   // global covariance of rho
  MatrixXd glpi;  // local covariance of the product of marginals
  Matrix3d ggpi;
  std::vector<BlochVector> marginals;
};

Context build_context(const DensityMatrix& rho) {
  Context ctx;
  ctx.n = rho.num_qubits;
  const SpectralDecomposition sd = spectral_decomposition(rho);
  ctx.ql = local_fisher_matrix(sd, ctx.n).matrix;
  ctx.qg = global_fisher_matrix(sd, ctx.n).matrix;
  ctx.gl = local_covariance_matrix(rho).matrix;
  ctx.gg.setZero();
  for (int i = 0; i < ctx.n; ++i)
    for (int j = 0; j < ctx.n; ++j) ctx.gg += ctx.gl.block<3, 3>(3 * i, 3 * j);
  ctx.marginals = marginal_bloch_vectors(rho);
  ctx.glpi = product_marginals_local_covariance(ctx.marginals).matrix;
  ctx.ggpi = product_marginals_global_covariance(ctx.marginals).matrix;
  return ctx;
}

Vector3d mean_collective_spin(const std::vector<BlochVector>& marginals) {
  Vector3d j = Vector3d::Zero();
  for (const auto& m : marginals) j += 0.5 * m.m;
  return j;
}

// ---------------------------------------------------------------------------
// Block-coordinate ascent/descent machinery.

struct SiteConstraint {
  bool circle = false;  // true: unit circle in span(u, v); false: full sphere
  Vector3d u = Vector3d::UnitX(), v = Vector3d::UnitY();
};

struct BcaOutcome {
  VectorXd c;
  double quad = 0.0;
  bool converged = false;
};

// Extremize c^T M c under per-site unit norm (plus optional plane
// constraints), one exact site solve at a time. Monotone by construction.
BcaOutcome block_coordinate_extremize(const MatrixXd& m,
                                      const std::vector<SiteConstraint>& cons,
                                      VectorXd c, bool maximize, int max_sweeps,
                                      double tol) {
  const int n = static_cast<int>(cons.size());
  double prev = c.dot(m * c);
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      const Matrix3d a = m.block<3, 3>(3 * i, 3 * i);
      const Vector3d ci = c.segment<3>(3 * i);
      const Vector3d b = (m * c).segment<3>(3 * i) - a * ci;
      Vector3d xi;
      if (cons[i].circle) {
        MatrixXd a2(2, 2);
        const Vector3d au = a * cons[i].u, av = a * cons[i].v;
        a2 << cons[i].u.dot(au), cons[i].u.dot(av), cons[i].v.dot(au),
            cons[i].v.dot(av);
        a2 = 0.5 * (a2 + a2.transpose().eval());
        VectorXd b2(2);
        b2 << cons[i].u.dot(b), cons[i].v.dot(b);
        const SphereQuadratic r = maximize
                                      ? maximize_quadratic_on_sphere(a2, b2)
                                      : minimize_quadratic_on_sphere(a2, b2);
        xi = r.x(0) * cons[i].u + r.x(1) * cons[i].v;
      } else {
        const SphereQuadratic r = maximize
                                      ? maximize_quadratic_on_sphere(a, Vector3d(b))
                                      : minimize_quadratic_on_sphere(a, Vector3d(b));
        xi = r.x;
      }
      c.segment<3>(3 * i) = xi;
    }
    const double quad = c.dot(m * c);
    if (std::abs(quad - prev) <= tol * std::max(1.0, std::abs(quad))) {
      prev = quad;
      converged = true;
      break;
    }
    prev = quad;
  }
  return {c, prev, converged};
}

Vector3d safe_unit(const Vector3d& v, const Vector3d& fallback) {
  const double n = v.norm();
  return n > 1e-14 ? Vector3d(v / n) : fallback;
}

VectorXd random_site_units(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  VectorXd c(3 * n);
  for (int i = 0; i < n; ++i) {
    Vector3d x;
    do {
      x = Vector3d(gauss(rng), gauss(rng), gauss(rng));
    } while (x.norm() < 1e-8);
    c.segment<3>(3 * i) = x.normalized();
  }
  return c;
}

// c maximizing c^T Q c under local normalization, multi-start.
BcaOutcome maximize_local_quadratic(const MatrixXd& ql, const Matrix3d& qg, int n,
                                    const OptimizerConfig& cfg,
                                    const std::vector<VectorXd>& extra_starts = {}) {
  if (cfg.restarts < 1) throw std::invalid_argument("OptimizerConfig: restarts must be >= 1");
  const std::vector<SiteConstraint> cons(n, SiteConstraint{});
  std::vector<VectorXd> starts;
  // Homogeneous field along the best collective direction; guarantees the
  // result is no worse than the global coefficient.
  const Vector3d ng = canonical_sign(Vector3d(top_eigenpair(qg).vector));
  starts.push_back(VectorXd(LocalVectorField(n, ng).flattened()));
  if (cfg.restarts > 1) {
    // Site-normalized top eigenvector of the full matrix.
    const VectorXd t = top_eigenpair(ql).vector;
    VectorXd c(3 * n);
    for (int i = 0; i < n; ++i)
      c.segment<3>(3 * i) = safe_unit(t.segment<3>(3 * i), Vector3d::UnitZ());
    starts.push_back(c);
  }
  for (int r = static_cast<int>(starts.size()); r < cfg.restarts; ++r) {
    auto rng = rng_stream(cfg.rng_seed, static_cast<std::uint64_t>(r));
    starts.push_back(random_site_units(n, rng));
  }
  for (const auto& s : extra_starts) starts.push_back(s);

  BcaOutcome best;
  best.quad = -std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    const BcaOutcome out =
        block_coordinate_extremize(ql, cons, s, true, cfg.max_sweeps, cfg.tol);
    if (out.quad > best.quad) best = out;
  }
  return best;
}

// c minimizing c^T G c under the given per-site constraints, multi-start.
BcaOutcome minimize_local_quadratic(const MatrixXd& gl,
                                    const std::vector<SiteConstraint>& cons,
                                    const OptimizerConfig& cfg) {
  if (cfg.restarts < 1) throw std::invalid_argument("OptimizerConfig: restarts must be >= 1");
  const int n = static_cast<int>(cons.size());
  std::vector<VectorXd> starts;
  // Independent per-site minima (cross terms ignored).
  {
    VectorXd c(3 * n);
    for (int i = 0; i < n; ++i) {
      const Matrix3d a = gl.block<3, 3>(3 * i, 3 * i);
      if (cons[i].circle) {
        MatrixXd a2(2, 2);
        const Vector3d au = a * cons[i].u, av = a * cons[i].v;
        a2 << cons[i].u.dot(au), cons[i].u.dot(av), cons[i].v.dot(au),
            cons[i].v.dot(av);
        a2 = 0.5 * (a2 + a2.transpose().eval());
        const SphereQuadratic r = minimize_quadratic_on_sphere(a2, VectorXd::Zero(2));
        c.segment<3>(3 * i) = r.x(0) * cons[i].u + r.x(1) * cons[i].v;
      } else {
        const SphereQuadratic r = minimize_quadratic_on_sphere(a, Vector3d::Zero());
        c.segment<3>(3 * i) = r.x;
      }
    }
    starts.push_back(c);
  }
  if (cfg.restarts > 1) {
    VectorXd c(3 * n);
    for (int i = 0; i < n; ++i) c.segment<3>(3 * i) = cons[i].u;
    starts.push_back(c);
  }
  for (int r = static_cast<int>(starts.size()); r < cfg.restarts; ++r) {
    auto rng = rng_stream(cfg.rng_seed, 1000 + static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    VectorXd c(3 * n);
    for (int i = 0; i < n; ++i) {
      if (cons[i].circle) {
        const double th = angle(rng);
        c.segment<3>(3 * i) = std::cos(th) * cons[i].u + std::sin(th) * cons[i].v;
      } else {
        c.segment<3>(3 * i) = random_site_units(1, rng);
      }
    }
    starts.push_back(c);
  }

  BcaOutcome best;
  best.quad = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    const BcaOutcome out =
        block_coordinate_extremize(gl, cons, s, false, cfg.max_sweeps, cfg.tol);
    if (out.quad < best.quad) best = out;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Coefficient cores working on a prebuilt context.

FisherDensityResult fisher_density_core(const Context& ctx, Scope scope,
                                        bool variance_assisted) {
  FisherDensityResult res;
  const int n = ctx.n;
  if (scope == Scope::kLocal) {
    if (!variance_assisted) {
      const TopEig t = top_eigenpair(ctx.ql);
      res.defined = true;
      res.value = t.value;
      res.field = LocalVectorField::from_flat(t.vector);
      return res;
    }
    const TopEig t =
        top_eigenpair_tiebreak(ctx.ql - 4.0 * ctx.glpi, MatrixXd(4.0 * ctx.glpi));
    res.difference_eigenvalue = t.value;
    res.field = LocalVectorField::from_flat(t.vector);
    const double num = t.vector.dot(ctx.ql * t.vector);
    const double den = 4.0 * t.vector.dot(ctx.glpi * t.vector);
    if (den > 1e-12) {
      res.defined = true;
      res.value = num / den;
    } else {
      res.note = "density ratio undefined: denominator 4 Var over product marginals vanishes";
    }
    return res;
  }
  if (!variance_assisted) {
    const TopEig t = top_eigenpair(MatrixXd(ctx.qg));
    res.defined = true;
    res.value = t.value / n;
    res.direction = canonical_sign(Vector3d(t.vector));
    res.field = LocalVectorField(n, res.direction);
    return res;
  }
  const TopEig t = top_eigenpair_tiebreak(MatrixXd(ctx.qg - 4.0 * ctx.ggpi),
                                          MatrixXd(4.0 * ctx.ggpi));
  res.difference_eigenvalue = t.value;
  res.direction = canonical_sign(Vector3d(t.vector));
  res.field = LocalVectorField(n, res.direction);
  const Vector3d nv = res.direction;
  const double num = nv.dot(ctx.qg * nv);
  const double den = 4.0 * nv.dot(ctx.ggpi * nv);
  if (den > 1e-12) {
    res.defined = true;
    res.value = num / den;
  } else {
    res.note = "density ratio undefined: denominator 4 Var over product marginals vanishes";
  }
  return res;
}

ConstrainedFisherResult constrained_core(const Context& ctx, const OptimizerConfig& cfg,
                                         const std::vector<VectorXd>& extra_starts = {}) {
  const BcaOutcome best =
      maximize_local_quadratic(ctx.ql, ctx.qg, ctx.n, cfg, extra_starts);
  ConstrainedFisherResult res;
  res.value = best.quad / ctx.n;
  res.field = LocalVectorField::from_flat(best.c);
  res.converged = best.converged;
  return res;
}

// Sum over sites of |m_i| and |m_i|^2, plus the first index below threshold.
struct MeanSpinStats {
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  int first_zero = -1;  // -1: none
  int num_nonzero = 0;
};

MeanSpinStats mean_spin_stats(const std::vector<BlochVector>& marginals) {
  MeanSpinStats s;
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    const double a = marginals[i].m.norm();
    if (a <= kMeanSpinEps) {
      if (s.first_zero < 0) s.first_zero = static_cast<int>(i);
    } else {
      ++s.num_nonzero;
    }
    s.sum_abs += a;
    s.sum_sq += a * a;
  }
  return s;
}

std::vector<SiteConstraint> circle_constraints(const std::vector<BlochVector>& marginals,
                                               bool sphere_on_zero) {
  std::vector<SiteConstraint> cons(marginals.size());
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    if (marginals[i].m.norm() > kMeanSpinEps) {
      const auto [u, v] = plane_basis(marginals[i].m);
      cons[i] = SiteConstraint{true, u, v};
    } else {
      cons[i].circle = !sphere_on_zero;  // sphere freedom when requested
      if (cons[i].circle) cons[i] = SiteConstraint{true};
    }
  }
  return cons;
}

SqueezingResult xi_local_core(const Context& ctx, const OptimizerConfig& cfg) {
  SqueezingResult res;
  const MeanSpinStats stats = mean_spin_stats(ctx.marginals);
  if (stats.first_zero >= 0) {
    std::ostringstream os;
    os << "undefined: mean spin vanishes on site " << (stats.first_zero + 1);
    res.note = os.str();
    return res;
  }
  const auto cons = circle_constraints(ctx.marginals, false);
  const BcaOutcome best = minimize_local_quadratic(ctx.gl, cons, cfg);
  res.defined = true;
  res.xi2 = 4.0 * ctx.n * best.quad / (stats.sum_abs * stats.sum_abs);
  res.field = LocalVectorField::from_flat(best.c);
  return res;
}

SqueezingResult xi_global_core(const Context& ctx, bool variance_assisted) {
  SqueezingResult res;
  const Vector3d j = mean_collective_spin(ctx.marginals);
  if (j.norm() <= kMeanSpinEps) {
    res.note = "undefined: collective mean spin vanishes";
    return res;
  }
  const Vector3d n0 = j.normalized();
  const auto [u, v] = plane_basis(n0);
  const double j2 = j.squaredNorm();
  if (!variance_assisted) {
    Eigen::Matrix2d g2;
    g2 << u.dot(ctx.gg * u), u.dot(ctx.gg * v), v.dot(ctx.gg * u), v.dot(ctx.gg * v);
    g2 = 0.5 * (g2 + g2.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g2);
    const Eigen::Vector2d w = es.eigenvectors().col(0);
    res.defined = true;
    res.xi2 = ctx.n * es.eigenvalues()(0) / j2;
    res.direction = canonical_sign(Vector3d(w(0) * u + w(1) * v));
    res.field = LocalVectorField(ctx.n, res.direction);
    return res;
  }
  // Product of the readout variance on rho and the conjugate-direction
  // variance bound on the product of marginals, minimized over the circle.
  const auto product_at = [&](double phi) {
    const Vector3d nperp = std::cos(phi) * u + std::sin(phi) * v;
    const Vector3d nconj = -std::sin(phi) * u + std::cos(phi) * v;
    return 4.0 * nconj.dot(ctx.ggpi * nconj) * nperp.dot(ctx.gg * nperp);
  };
  const int samples = 720;
  double best_phi = 0.0, best_val = product_at(0.0);
  for (int s = 1; s < samples; ++s) {
    const double phi = kPi * s / samples;
    const double val = product_at(phi);
    if (val < best_val) {
      best_val = val;
      best_phi = phi;
    }
  }
  const double step = kPi / samples;
  const double phi_min =
      golden_section_min(product_at, best_phi - step, best_phi + step, 1e-12);
  res.defined = true;
  res.xi2 = product_at(phi_min) / j2;
  res.direction = canonical_sign(
      Vector3d(std::cos(phi_min) * u + std::sin(phi_min) * v));
  res.field = LocalVectorField(ctx.n, res.direction);
  return res;
}

// Shared body for xi_Ll; when reuse_min >= 0 the variance minimum is taken
// from a previous xi_l run over the identical constraint set.
SqueezingResult xi_partial_core(const Context& ctx, const OptimizerConfig& cfg,
                                const BcaOutcome* reuse) {
  SqueezingResult res;
  const MeanSpinStats stats = mean_spin_stats(ctx.marginals);
  if (stats.num_nonzero == 0) {
    res.note = "undefined: every mean spin vanishes";
    return res;
  }
  BcaOutcome best;
  if (reuse != nullptr) {
    best = *reuse;
  } else {
    const auto cons = circle_constraints(ctx.marginals, true);
    best = minimize_local_quadratic(ctx.gl, cons, cfg);
  }
  res.defined = true;
  res.xi2 = 4.0 * best.quad / stats.sum_sq;
  res.field = LocalVectorField::from_flat(best.c);
  return res;
}

// Fully inhomogeneous coefficient: per-site angles on the circles orthogonal
// to the mean spins plus log magnitudes, gradient descent with backtracking.
SqueezingResult xi_inhom_core(const Context& ctx, const OptimizerConfig& cfg,
                              const LocalVectorField* angle_start) {
  SqueezingResult res;
  const MeanSpinStats stats = mean_spin_stats(ctx.marginals);
  if (stats.num_nonzero == 0) {
    res.note = "undefined: every mean spin vanishes";
    return res;
  }
  const int n = ctx.n;
  std::vector<int> active;
  std::vector<Vector3d> us, vs;
  std::vector<double> msq;
  for (int i = 0; i < n; ++i) {
    if (ctx.marginals[i].m.norm() <= kMeanSpinEps) continue;  // excluded sites
    active.push_back(i);
    const auto [u, v] = plane_basis(ctx.marginals[i].m);
    us.push_back(u);
    vs.push_back(v);
    msq.push_back(ctx.marginals[i].m.squaredNorm());
  }
  const int na = static_cast<int>(active.size());

  const auto field_of = [&](const VectorXd& theta, const VectorXd& s) {
    VectorXd c = VectorXd::Zero(3 * n);
    for (int a = 0; a < na; ++a)
      c.segment<3>(3 * active[a]) =
          std::exp(s(a)) * (std::cos(theta(a)) * us[a] + std::sin(theta(a)) * vs[a]);
    return c;
  };
  const auto objective = [&](const VectorXd& theta, const VectorXd& s) {
    const VectorXd c = field_of(theta, s);
    double w = 0.0;
    for (int a = 0; a < na; ++a) w += msq[a] * std::exp(-2.0 * s(a));
    return w * c.dot(ctx.gl * c);
  };

  double best_obj = std::numeric_limits<double>::infinity();
  VectorXd best_theta, best_s;
  for (int r = 0; r < cfg.restarts; ++r) {
    VectorXd theta(na), s = VectorXd::Zero(na);
    if (r == 0 && angle_start != nullptr) {
      for (int a = 0; a < na; ++a) {
        const Vector3d ca = angle_start->vectors[active[a]];
        theta(a) = std::atan2(ca.dot(vs[a]), ca.dot(us[a]));
      }
    } else {
      auto rng = rng_stream(cfg.rng_seed, 2000 + static_cast<std::uint64_t>(r));
      std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
      std::uniform_real_distribution<double> logmag(-0.5, 0.5);
      for (int a = 0; a < na; ++a) theta(a) = angle(rng);
      if (r > 0)
        for (int a = 0; a < na; ++a) s(a) = logmag(rng);
    }

    double obj = objective(theta, s);
    double step = 0.1;
    for (int it = 0; it < cfg.max_sweeps; ++it) {
      // Analytic gradient of W(s) * V(theta, s).
      const VectorXd c = field_of(theta, s);
      const VectorXd gc = ctx.gl * c;
      const double vquad = c.dot(gc);
      double w = 0.0;
      for (int a = 0; a < na; ++a) w += msq[a] * std::exp(-2.0 * s(a));
      VectorXd dtheta(na), ds(na);
      for (int a = 0; a < na; ++a) {
        const int i = active[a];
        const Vector3d tangent =
            std::exp(s(a)) * (-std::sin(theta(a)) * us[a] + std::cos(theta(a)) * vs[a]);
        dtheta(a) = w * 2.0 * tangent.dot(gc.segment<3>(3 * i));
        ds(a) = -2.0 * msq[a] * std::exp(-2.0 * s(a)) * vquad +
                w * 2.0 * c.segment<3>(3 * i).dot(gc.segment<3>(3 * i));
      }
      const double gnorm = std::sqrt(dtheta.squaredNorm() + ds.squaredNorm());
      if (gnorm <= cfg.tol * std::max(1.0, std::abs(obj))) break;

      bool accepted = false;
      for (int half = 0; half < 40; ++half) {
        VectorXd th2 = theta - step * dtheta;
        VectorXd s2 = s - step * ds;
        s2.array() -= s2.mean();  // fix the scale-invariance gauge
        const double o2 = objective(th2, s2);
        if (o2 < obj - 1e-16 * std::max(1.0, std::abs(obj))) {
          theta = th2;
          s = s2;
          obj = o2;
          step = std::min(step * 1.3, 10.0);
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    if (obj < best_obj) {
      best_obj = obj;
      best_theta = theta;
      best_s = s;
    }
  }

  res.defined = true;
  res.xi2 = 4.0 * best_obj / (stats.sum_sq * stats.sum_sq);
  res.field = LocalVectorField::from_flat(field_of(best_theta, best_s));
  return res;
}

bool coefficient_verdict(const CoeffResult& c) {
  if (c.defined && c.value > 1.0 + kVerdictTol) return true;
  if (c.difference_eigenvalue && *c.difference_eigenvalue > kDiffEigTol) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operations.

std::optional<double> fisher_density_at(const DensityMatrix& rho, const LocalVectorField& c,
                                        double eps) {
  if (static_cast<int>(c.vectors.size()) != rho.num_qubits)
    throw std::invalid_argument("fisher_density_at: field size mismatch");
  const double den = local_variance_sum(c, marginal_bloch_vectors(rho));
  if (den <= eps) return std::nullopt;
  return qfi(rho, weighted_spin_operator(c).matrix) / den;
}

FisherDensityResult fisher_density(const DensityMatrix& rho, Scope scope,
                                   bool variance_assisted) {
  return fisher_density_core(build_context(rho), scope, variance_assisted);
}

ConstrainedFisherResult fisher_density_constrained(const DensityMatrix& rho,
                                                   const OptimizerConfig& config) {
  return constrained_core(build_context(rho), config);
}

std::optional<double> squeezing_at(const DensityMatrix& rho, const LocalVectorField& c,
                                   const MatrixXcd& b, double eps) {
  if (static_cast<int>(c.vectors.size()) != rho.num_qubits)
    throw std::invalid_argument("squeezing_at: field size mismatch");
  if (b.rows() != rho.dim() || b.cols() != rho.dim())
    throw std::invalid_argument("squeezing_at: operator dimension mismatch");
  const MatrixXcd a = weighted_spin_operator(c).matrix;
  const cxd comm = (rho.matrix * (a * b - b * a)).trace();
  if (std::abs(comm) <= eps) return std::nullopt;
  const double mean_b = std::real((rho.matrix * b).trace());
  const double var_b = std::real((rho.matrix * b * b).trace()) - mean_b * mean_b;
  return c.norm_sq() * var_b / std::norm(comm);
}

SqueezingResult xi_local(const DensityMatrix& rho, const OptimizerConfig& config) {
  return xi_local_core(build_context(rho), config);
}

SqueezingResult xi_global(const DensityMatrix& rho, bool variance_assisted) {
  return xi_global_core(build_context(rho), variance_assisted);
}

SqueezingResult xi_inhomogeneous(const DensityMatrix& rho, bool normalized,
                                 const OptimizerConfig& config) {
  const Context ctx = build_context(rho);
  if (normalized) return xi_partial_core(ctx, config, nullptr);
  return xi_inhom_core(ctx, config, nullptr);
}

int entanglement_depth(double f_l_value, int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("entanglement_depth: need at least one qubit");
  if (f_l_value < 0.0) throw std::invalid_argument("entanglement_depth: negative value");
  if (f_l_value > num_qubits + 1e-9)
    throw std::invalid_argument("entanglement_depth: value exceeds the qubit number");
  for (int k = 1; k <= num_qubits; ++k) {
    const int s = num_qubits / k;
    const int r = num_qubits - s * k;
    const double bound = (static_cast<double>(s) * k * k + r) / num_qubits;
    if (f_l_value <= bound + 1e-12) return k;
  }
  return num_qubits;
}

WitnessReport hierarchy_report(const DensityMatrix& rho, const OptimizerConfig& config) {
  const Context ctx = build_context(rho);
  WitnessReport report;

  const FisherDensityResult fvl = fisher_density_core(ctx, Scope::kLocal, true);
  const FisherDensityResult fl = fisher_density_core(ctx, Scope::kLocal, false);
  const FisherDensityResult fg = fisher_density_core(ctx, Scope::kGlobal, false);
  const FisherDensityResult fvg = fisher_density_core(ctx, Scope::kGlobal, true);

  const SqueezingResult xl = xi_local_core(ctx, config);

  // The conjugate of the squeezing minimizer is a feasible Fisher field whose
  // density dominates xi_l^-2; feeding it to the ascent makes the pair of
  // reported numbers obey that bound by construction.
  std::vector<VectorXd> extra_starts;
  if (xl.defined) {
    VectorXd conj(3 * ctx.n);
    for (int i = 0; i < ctx.n; ++i) {
      const Vector3d mhat = ctx.marginals[i].m.normalized();
      conj.segment<3>(3 * i) = mhat.cross(xl.field.vectors[i]);
    }
    extra_starts.push_back(conj);
  }
  const ConstrainedFisherResult flo = constrained_core(ctx, config, extra_starts);

  const SqueezingResult xg = xi_global_core(ctx, false);
  const SqueezingResult xvg = xi_global_core(ctx, true);

  // xi_Ll shares xi_l's minimizer when the constraint sets coincide (no
  // vanishing mean spin), making the Cauchy-Schwarz chain exact on the
  // reported numbers.
  SqueezingResult xll;
  if (xl.defined) {
    BcaOutcome reuse;
    reuse.c = xl.field.flattened();
    reuse.quad = xl.xi2 * mean_spin_stats(ctx.marginals).sum_abs *
                 mean_spin_stats(ctx.marginals).sum_abs / (4.0 * ctx.n);
    reuse.converged = true;
    xll = xi_partial_core(ctx, config, &reuse);
  } else {
    xll = xi_partial_core(ctx, config, nullptr);
  }
  const SqueezingResult xinh =
      xi_inhom_core(ctx, config, xll.defined ? &xll.field : nullptr);

  const auto push_density = [&](const std::string& name, const FisherDensityResult& r) {
    CoeffResult c;
    c.name = name;
    c.defined = r.defined;
    c.value = r.value;
    c.field = r.field;
    c.difference_eigenvalue = r.difference_eigenvalue;
    c.note = r.note;
    c.entangled = coefficient_verdict(c);
    report.coefficients.push_back(std::move(c));
  };
  const auto push_constrained = [&](const std::string& name,
                                    const ConstrainedFisherResult& r) {
    CoeffResult c;
    c.name = name;
    c.defined = true;
    c.value = r.value;
    c.field = r.field;
    if (!r.converged) c.note = "warning: sweep budget exhausted, best-so-far value";
    c.entangled = coefficient_verdict(c);
    report.coefficients.push_back(std::move(c));
  };
  const auto push_squeezing = [&](const std::string& name, const SqueezingResult& r) {
    CoeffResult c;
    c.name = name;
    c.defined = r.defined;
    if (r.defined) c.value = 1.0 / std::max(r.xi2, 1e-300);
    c.field = r.field;
    c.note = r.note;
    c.entangled = coefficient_verdict(c);
    report.coefficients.push_back(std::move(c));
  };

  push_density("f_V_L", fvl);
  push_density("f_L", fl);
  push_constrained("f_l", flo);
  push_density("f_G", fg);
  push_density("f_V_G", fvg);
  push_squeezing("xi_l_inv2", xl);
  push_squeezing("xi_G_inv2", xg);
  push_squeezing("xi_V_G_inv2", xvg);
  push_squeezing("xi_L_inv2", xinh);
  push_squeezing("xi_Ll_inv2", xll);

  const auto& co = report.coefficients;
  const auto value_of = [&](int idx) { return co[idx].value; };
  const auto defined = [&](int idx) { return co[idx].defined; };
  enum { kFVL, kFL, kFl, kFG, kFVG, kXl, kXG, kXVG, kXL, kXLl };

  const auto check_ge = [&](const std::string& desc, int lhs, int rhs) {
    InequalityCheck c;
    c.description = desc;
    c.applicable = defined(lhs) && defined(rhs);
    if (c.applicable) {
      c.lhs = value_of(lhs);
      c.rhs = value_of(rhs);
      c.passed = c.lhs >= c.rhs - kHierarchyTol;
      if (!c.passed) report.consistent = false;
    }
    report.hierarchy.push_back(std::move(c));
  };
  check_ge("f_V_L >= f_V_G", kFVL, kFVG);
  check_ge("f_L >= f_l", kFL, kFl);
  check_ge("f_l >= f_G", kFl, kFG);
  check_ge("f_l >= xi_l_inv2", kFl, kXl);
  check_ge("f_G >= xi_G_inv2", kFG, kXG);
  check_ge("xi_l_inv2 >= xi_G_inv2", kXl, kXG);
  check_ge("xi_V_G_inv2 >= xi_G_inv2", kXVG, kXG);
  check_ge("xi_L_inv2 >= xi_Ll_inv2", kXL, kXLl);
  check_ge("xi_Ll_inv2 >= xi_l_inv2", kXLl, kXl);

  const auto check_implies = [&](const std::string& desc, int premise_idx,
                                 const std::optional<double>& diff_eig) {
    InequalityCheck c;
    c.description = desc;
    c.applicable = defined(premise_idx) && value_of(premise_idx) > 1.0 + 1e-6 &&
                   diff_eig.has_value();
    if (c.applicable) {
      c.lhs = value_of(premise_idx);
      c.rhs = *diff_eig;
      c.passed = *diff_eig > 0.0;
      if (!c.passed) report.consistent = false;
    }
    report.hierarchy.push_back(std::move(c));
  };
  check_implies("f_G > 1 implies positive f_V_G difference eigenvalue", kFG,
                co[kFVG].difference_eigenvalue);
  check_implies("f_L > 1 implies positive f_V_L difference eigenvalue", kFL,
                co[kFVL].difference_eigenvalue);
  check_implies("xi_V_G_inv2 > 1 implies positive f_V_G difference eigenvalue", kXVG,
                co[kFVG].difference_eigenvalue);

  return report;
}

}  // namespace spinwit
