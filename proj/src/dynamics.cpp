#include "spinwit/dynamics.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spinwit/pauli.hpp"

namespace spinwit {

namespace {

void check_hermitian(const MatrixXcd& h, const char* who) {
  if (h.rows() != h.cols() || h.rows() < 1)
    throw std::invalid_argument(std::string(who) + ": operator must be square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw std::invalid_argument(std::string(who) + ": operator must be Hermitian");
}

void check_model(const LindbladModel& m) {
  if (m.num_qubits < 1 || m.num_qubits > kDefaultQubitCap)
    throw std::invalid_argument("LindbladModel: qubit number out of range");
  const int d = dim_of(m.num_qubits);
  if (m.hamiltonian.rows() != d || m.hamiltonian.cols() != d)
    throw std::invalid_argument("LindbladModel: Hamiltonian dimension mismatch");
  check_hermitian(m.hamiltonian, "LindbladModel");
  for (const auto& ch : m.channels) {
    if (!(ch.rate >= 0.0))
      throw std::invalid_argument("LindbladModel: channel rates must be nonnegative");
    if (ch.op.rows() != d || ch.op.cols() != d)
      throw std::invalid_argument("LindbladModel: channel operator dimension mismatch");
  }
  if (m.diagonal_energies && m.diagonal_energies->size() != d)
    throw std::invalid_argument("LindbladModel: diagonal hint dimension mismatch");
  if (m.site_rates && m.site_rates->minCoeff() < 0.0)
    throw std::invalid_argument("LindbladModel: site rates must be nonnegative");
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("time grid must not be empty");
  if (grid.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw std::invalid_argument("time grid must be strictly increasing");
}

// Bit-indexed generator application for H = diag(E) + field * sum_i sigma_x^i
// with identical (sigma^-, sigma^+, sigma_z) channels on every site.  All
// non-diagonal structure reduces to index XORs, so one application costs
// O((N + 1) dim^2) element operations instead of dense matrix products.
struct StructuredKernel {
  int n = 0;
  int d = 0;
  double field = 0.0;
  double g_minus = 0.0, g_plus = 0.0, g_z = 0.0;
  std::vector<int> masks;
  MatrixXcd factor;  // elementwise coefficient of rho_ab in the generator

  explicit StructuredKernel(const LindbladModel& m)
      : n(m.num_qubits), d(dim_of(m.num_qubits)), field(m.transverse_field) {
    if (!m.diagonal_energies || !m.site_rates)
      throw std::invalid_argument("structured kernel requires the model shape hints");
    const Vector3d r = *m.site_rates;
    g_minus = r(0);
    g_plus = r(1);
    g_z = r(2);
    masks.reserve(n);
    for (int s = 1; s <= n; ++s) masks.push_back(site_mask(n, s));

    // kappa_a = diagonal of sum_c rate_c L^+L: sigma^+sigma^- counts spins
    // still up (bit clear), sigma^-sigma^+ spins down, sigma_z^2 = 1.
    const VectorXd& e = *m.diagonal_energies;
    VectorXd kappa(d);
    for (int a = 0; a < d; ++a) {
      const int down = std::popcount(static_cast<unsigned>(a));
      kappa(a) = g_minus * (n - down) + g_plus * down + g_z * n;
    }
    // Coefficient of rho_ab: -i(E_a - E_b) from the diagonal Hamiltonian,
    // -(kappa_a + kappa_b)/2 from the anticommutator, and the sigma_z jump
    // sum g_z * sum_i s_i(a) s_i(b) = g_z (n - 2 popcount(a XOR b)).
    factor.resize(d, d);
    for (int b = 0; b < d; ++b)
      for (int a = 0; a < d; ++a) {
        const double agree = n - 2.0 * std::popcount(static_cast<unsigned>(a ^ b));
        factor(a, b) = cxd(g_z * agree - 0.5 * (kappa(a) + kappa(b)), -(e(a) - e(b)));
      }
  }

  // Row index XOR by a power-of-two mask maps m-sized aligned blocks onto
  // each other, so every pass below runs on contiguous segments and stays
  // vectorizable; a dense matmul never appears.
  void apply(const MatrixXcd& rho, MatrixXcd& out) const {
    const cxd ib(0.0, field);
#pragma omp parallel for schedule(static)
    for (int b = 0; b < d; ++b) {
      auto ov = out.col(b);
      const auto rv = rho.col(b);
      ov = factor.col(b).cwiseProduct(rv);
      if (field != 0.0) {
        for (const int m : masks) {
          // -i field (P_m rho) + i field (rho P_m) on column b.
          const auto sv = rho.col(b ^ m);
          for (int base = 0; base < d; base += 2 * m) {
            ov.segment(base, m) += ib * (sv.segment(base, m) - rv.segment(base + m, m));
            ov.segment(base + m, m) += ib * (sv.segment(base + m, m) - rv.segment(base, m));
          }
        }
      }
      for (const int m : masks) {
        if ((b & m) == 0) {
          if (g_plus == 0.0) continue;
          // sigma^+ rho sigma^-: both indices bit-clear, source bit-set.
          const auto src = rho.col(b | m);
          for (int base = 0; base < d; base += 2 * m)
            ov.segment(base, m) += g_plus * src.segment(base + m, m);
        } else {
          if (g_minus == 0.0) continue;
          // sigma^- rho sigma^+: both indices bit-set, source bit-clear.
          const auto src = rho.col(b & ~m);
          for (int base = 0; base < d; base += 2 * m)
            ov.segment(base + m, m) += g_minus * src.segment(base, m);
        }
      }
    }
  }
};

// Literal dense generator, kept serial as the reference the kernels are
// tested and benchmarked against.
struct ReferenceKernel {
  MatrixXcd h;
  struct Term {
    MatrixXcd l;
    MatrixXcd l_adj;
    MatrixXcd ll;  // L^+ L
    double rate;
  };
  std::vector<Term> terms;

  explicit ReferenceKernel(const LindbladModel& m) : h(m.hamiltonian) {
    for (const auto& ch : m.channels) {
      if (ch.rate == 0.0) continue;
      terms.push_back({ch.op, ch.op.adjoint(), ch.op.adjoint() * ch.op, ch.rate});
    }
  }

  void apply(const MatrixXcd& rho, MatrixXcd& out) const {
    const cxd i_unit(0.0, 1.0);
    out = -i_unit * (h * rho - rho * h);
    for (const auto& t : terms)
      out += t.rate * (t.l * rho * t.l_adj - 0.5 * (t.ll * rho + rho * t.ll));
  }
};

// RK4 on the vectorized density matrix with per-step re-symmetrization.
template <class Kernel>
struct Stepper {
  const Kernel& kernel;
  MatrixXcd k1, k2, k3, k4, tmp, adj;

  Stepper(const Kernel& k, int d)
      : kernel(k), k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d), adj(d, d) {}

  void step(MatrixXcd& rho, double h) {
    kernel.apply(rho, k1);
    tmp = rho + (0.5 * h) * k1;
    kernel.apply(tmp, k2);
    tmp = rho + (0.5 * h) * k2;
    kernel.apply(tmp, k3);
    tmp = rho + h * k3;
    kernel.apply(tmp, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    adj = rho.adjoint();
    rho = 0.5 * (rho + adj);
  }
};

template <class Kernel>
Trajectory integrate(const DensityMatrix& rho0, const Kernel& kernel,
                     const std::vector<double>& grid, const IntegratorConfig& config) {
  const int n = rho0.num_qubits;
  const int d = rho0.dim();
  Trajectory traj;
  traj.times = grid;
  traj.states.reserve(grid.size());
  traj.states.push_back(rho0);

  Stepper<Kernel> stepper(kernel, d);
  MatrixXcd cur = rho0.matrix;
  MatrixXcd work(d, d);

  for (std::size_t seg = 1; seg < grid.size(); ++seg) {
    const double t0 = grid[seg - 1];
    const double t1 = grid[seg];
    const double dt = t1 - t0;
    long steps = std::max<long>(1, static_cast<long>(std::ceil(dt / config.step - 1e-9)));

    bool accepted = false;
    double lam_min = 0.0;
    double trace = 1.0;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es;
    for (int attempt = 0; attempt <= config.max_halvings; ++attempt) {
      const double h = dt / static_cast<double>(steps);
      work = cur;
      for (long s = 0; s < steps; ++s) stepper.step(work, h);
      trace = work.trace().real();
      es.compute(work);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("lindblad_evolve: eigensolver failed");
      lam_min = es.eigenvalues()(0);
      if (lam_min >= config.positivity_floor) {
        accepted = true;
        break;
      }
      steps *= 2;
      ++traj.halved_segments;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "lindblad_evolve: positivity violated at t = " << t1
          << " (min eigenvalue " << lam_min << " after " << config.max_halvings
          << " step refinements)";
      throw std::runtime_error(msg.str());
    }

    const double drift = std::abs(trace - 1.0);
    traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
    traj.total_trace_drift += drift;
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, lam_min);

    // Storage cleanup: clamp eigenvalues below the density-matrix floor,
    // renormalize the trace, re-symmetrize; marching continues from the
    // cleaned state.
    if (lam_min < kNegEigFloor) {
      const VectorXd lam = es.eigenvalues().cwiseMax(0.0);
      work = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    }
    work /= work.trace().real();
    stepper.adj = work.adjoint();
    work = 0.5 * (work + stepper.adj);
    traj.states.emplace_back(n, work);
    cur = work;
  }
  return traj;
}

bool has_structured_shape(const LindbladModel& m) {
  return m.diagonal_energies.has_value() && m.site_rates.has_value();
}

}  // namespace

Vector3d decay_rates(double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("decay_rates: negative total rate");
  // g1 = g2 = g3/8 with (g1 + g2 + g3)/2 = gamma solves to g1 = gamma/5.
  const double g1 = gamma / 5.0;
  return Vector3d(g1, g1, 8.0 * g1);
}

LindbladModel dissipative_ising_model(const IsingModel& model, double gamma) {
  const int n = model.num_qubits;
  if (n < 1 || n > kDefaultQubitCap)
    throw std::invalid_argument("dissipative_ising_model: qubit number out of range");
  const int d = dim_of(n);
  if (model.matrix.rows() != d || model.matrix.cols() != d)
    throw std::invalid_argument("dissipative_ising_model: Hamiltonian dimension mismatch");
  const Vector3d rates = decay_rates(gamma);

  LindbladModel out;
  out.num_qubits = n;
  out.hamiltonian = model.matrix;
  const Eigen::Matrix2cd lower = (Eigen::Matrix2cd() << 0, 0, 1, 0).finished();
  const Eigen::Matrix2cd raise = (Eigen::Matrix2cd() << 0, 1, 0, 0).finished();
  for (int s = 1; s <= n; ++s) {
    out.channels.push_back({embed_site(n, s, lower), rates(0)});
    out.channels.push_back({embed_site(n, s, raise), rates(1)});
    out.channels.push_back({embed_site(n, s, pauli_matrix(kZ)), rates(2)});
  }
  out.diagonal_energies = model.matrix.diagonal().real();
  out.transverse_field = model.field;
  out.site_rates = rates;
  return out;
}

DensityMatrix unitary_evolve(const DensityMatrix& rho0, const MatrixXcd& h, double t) {
  check_hermitian(h, "unitary_evolve");
  if (h.rows() != rho0.dim())
    throw std::invalid_argument("unitary_evolve: Hamiltonian dimension mismatch");
  if (t == 0.0) return rho0;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("unitary_evolve: eigensolver failed");
  const VectorXcd phases =
      (es.eigenvalues().array().cast<cxd>() * cxd(0.0, -t)).exp();
  const MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  MatrixXcd m = u * rho0.matrix * u.adjoint();
  const MatrixXcd adj = m.adjoint();
  m = 0.5 * (m + adj);
  m /= m.trace().real();
  return DensityMatrix(rho0.num_qubits, m);
}

Trajectory unitary_trajectory(const DensityMatrix& rho0, const MatrixXcd& h,
                              const std::vector<double>& grid) {
  check_hermitian(h, "unitary_trajectory");
  if (h.rows() != rho0.dim())
    throw std::invalid_argument("unitary_trajectory: Hamiltonian dimension mismatch");
  check_grid(grid);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("unitary_trajectory: eigensolver failed");
  Trajectory traj;
  traj.times = grid;
  traj.states.reserve(grid.size());
  traj.states.push_back(rho0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const VectorXcd phases =
        (es.eigenvalues().array().cast<cxd>() * cxd(0.0, -grid[k])).exp();
    const MatrixXcd u =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    MatrixXcd m = u * rho0.matrix * u.adjoint();
    const MatrixXcd adj = m.adjoint();
    m = 0.5 * (m + adj);
    m /= m.trace().real();
    traj.states.emplace_back(rho0.num_qubits, m);
  }
  return traj;
}

Trajectory lindblad_evolve(const DensityMatrix& rho0, const LindbladModel& model,
                           const std::vector<double>& grid,
                           const IntegratorConfig& config) {
  check_model(model);
  check_grid(grid);
  if (model.num_qubits != rho0.num_qubits)
    throw std::invalid_argument("lindblad_evolve: state and model qubit numbers differ");
  if (!(config.step > 0.0))
    throw std::invalid_argument("lindblad_evolve: step must be positive");
  if (config.max_halvings < 0)
    throw std::invalid_argument("lindblad_evolve: max_halvings must be nonnegative");
  if (!config.use_reference && has_structured_shape(model)) {
    const StructuredKernel kernel(model);
    return integrate(rho0, kernel, grid, config);
  }
  const ReferenceKernel kernel(model);
  return integrate(rho0, kernel, grid, config);
}

MatrixXcd lindblad_rhs_reference(const LindbladModel& model, const MatrixXcd& rho) {
  check_model(model);
  if (rho.rows() != dim_of(model.num_qubits) || rho.cols() != rho.rows())
    throw std::invalid_argument("lindblad_rhs_reference: state dimension mismatch");
  const ReferenceKernel kernel(model);
  MatrixXcd out(rho.rows(), rho.cols());
  kernel.apply(rho, out);
  return out;
}

MatrixXcd lindblad_rhs_structured(const LindbladModel& model, const MatrixXcd& rho) {
  check_model(model);
  if (rho.rows() != dim_of(model.num_qubits) || rho.cols() != rho.rows())
    throw std::invalid_argument("lindblad_rhs_structured: state dimension mismatch");
  const StructuredKernel kernel(model);
  MatrixXcd out(rho.rows(), rho.cols());
  kernel.apply(rho, out);
  return out;
}

}  // namespace spinwit
