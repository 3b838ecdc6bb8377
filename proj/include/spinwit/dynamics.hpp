#pragma once

// Closed (unitary) and open (Lindblad) time evolution producing state
// trajectories for witness evaluation.
//
// The open-system integrator is a fixed-step classical RK4 on the density
// matrix with per-step re-symmetrization.  The generator is applied either by
// a dense serial reference kernel or, for the local-noise Ising models built
// below, by bit-indexed structured kernels that never materialize a
// superoperator; the two paths are compared in the tests and the benchmark.

#include <optional>
#include <vector>

#include "spinwit/models.hpp"
#include "spinwit/states.hpp"

namespace spinwit {

struct LindbladChannel {
  MatrixXcd op;       // jump operator L
  double rate = 0.0;  // nonnegative
};

// drho/dt = -i[H,rho] + sum_c rate_c (L rho L^+ - (1/2){L^+L, rho}).
//
// The hint fields describe the special shape H = diag(energies) +
// field * sum_i sigma_x^i with identical (sigma^-, sigma^+, sigma_z) channels
// on every site.  Builders fill both the dense channel list and the hints;
// when the hints are present the integrator uses the structured kernel.
struct LindbladModel {
  int num_qubits = 0;
  MatrixXcd hamiltonian;
  std::vector<LindbladChannel> channels;
  std::optional<VectorXd> diagonal_energies;
  double transverse_field = 0.0;
  std::optional<Vector3d> site_rates;  // (lowering, raising, dephasing)
};

// Per-site rate triple (g1, g2, g3) solving g1 = g2 = g3/8 with the total
// rate (g1+g2+g3)/2 = gamma, i.e. (gamma/5, gamma/5, 8*gamma/5).
Vector3d decay_rates(double gamma);

// The Ising Hamiltonian with 3N local decay channels at overall strength
// gamma: sigma^-, sigma^+, sigma_z on every site, rates decay_rates(gamma).
LindbladModel dissipative_ising_model(const IsingModel& model, double gamma);

struct IntegratorConfig {
  double step = 1e-3;               // base step, units of 1/J0
  int max_halvings = 8;             // per-segment refinements before giving up
  double positivity_floor = -1e-8;  // worst tolerated eigenvalue at grid points
  bool use_reference = false;       // force the dense serial kernel
};

struct Trajectory {
  std::vector<double> times;  // strictly increasing, starts at 0
  std::vector<DensityMatrix> states;
  // Integration diagnostics, all measured at grid points before cleanup.
  double max_trace_drift = 0.0;    // worst per-segment |tr - 1|
  double total_trace_drift = 0.0;  // summed per-segment |tr - 1|
  double min_eigenvalue = 0.0;     // most negative eigenvalue encountered
  int halved_segments = 0;         // segments that needed step refinement
};

// exp(-iHt) rho exp(iHt) via the spectral decomposition of H.
DensityMatrix unitary_evolve(const DensityMatrix& rho0, const MatrixXcd& h, double t);

// unitary_evolve at every grid time, reusing one decomposition of H.
Trajectory unitary_trajectory(const DensityMatrix& rho0, const MatrixXcd& h,
                              const std::vector<double>& grid);

// Integrates the Lindblad equation over the grid.  Every stored state is
// re-symmetrized, eigenvalue-clamped at the -1e-10 floor and renormalized to
// unit trace; a grid state with an eigenvalue below positivity_floor causes
// the segment to be re-run at half the step, and a segment that stays
// indefinite after max_halvings refinements raises std::runtime_error naming
// the failing time.
Trajectory lindblad_evolve(const DensityMatrix& rho0, const LindbladModel& model,
                           const std::vector<double>& grid,
                           const IntegratorConfig& config = {});

// One generator application; exposed for cross-checks and the benchmark.
MatrixXcd lindblad_rhs_reference(const LindbladModel& model, const MatrixXcd& rho);
MatrixXcd lindblad_rhs_structured(const LindbladModel& model, const MatrixXcd& rho);

}  // namespace spinwit
