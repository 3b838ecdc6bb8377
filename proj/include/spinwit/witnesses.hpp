#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "spinwit/common.hpp"
#include "spinwit/fisher.hpp"
#include "spinwit/spin_ops.hpp"
#include "spinwit/states.hpp"

namespace spinwit {

struct OptimizerConfig {
  int restarts = 16;     // >= 1; restart 0 and 1 are deterministic smart starts
  int max_sweeps = 500;  // coordinate sweeps (or gradient iterations) per restart
  double tol = 1e-10;    // stop when one sweep improves the objective less than this
  std::uint64_t rng_seed = 0;  // restart r draws from rng_stream(rng_seed, r)
};

enum class Scope { kLocal, kGlobal };

// One entanglement coefficient as it appears in a report. `value` is the
// reported number: a Fisher density f, or an inverse squared squeezing
// coefficient xi^-2. Undefined results (zero mean spin, 0/0 ratios) keep
// defined = false and explain themselves in note; variance-assisted criteria
// additionally carry the top eigenvalue of the difference matrix, whose sign
// is their actual separability test.
struct CoeffResult {
  std::string name;
  bool defined = false;
  double value = std::numeric_limits<double>::quiet_NaN();
  LocalVectorField field;  // optimizing field; empty when not applicable
  std::optional<double> difference_eigenvalue;
  bool entangled = false;
  std::string note;
};

struct InequalityCheck {
  std::string description;
  bool applicable = false;  // false when an involved coefficient is undefined
  bool passed = false;      // meaningful only when applicable
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
};

struct WitnessReport {
  std::vector<CoeffResult> coefficients;  // fixed order, see hierarchy_report
  std::vector<InequalityCheck> hierarchy;
  bool consistent = true;  // every applicable check passed within 1e-8
};

struct FisherDensityResult {
  bool defined = false;  // the ratio value; the difference eigenvalue always exists
  double value = std::numeric_limits<double>::quiet_NaN();
  LocalVectorField field;           // optimizing field (replicated for global scope)
  Vector3d direction = Vector3d::Zero();  // global scope: the collective direction
  std::optional<double> difference_eigenvalue;  // variance-assisted only
  std::string note;
};

struct ConstrainedFisherResult {
  double value = 0.0;      // best found f_l
  LocalVectorField field;  // locally normalized within 1e-10
  bool converged = true;   // false: sweep budget exhausted, value is best-so-far
};

struct SqueezingResult {
  bool defined = false;
  double xi2 = std::numeric_limits<double>::quiet_NaN();  // squared coefficient
  LocalVectorField field;  // minimizing field (per-site directions / weights)
  Vector3d direction = Vector3d::Zero();  // global coefficients: measured direction
  std::string note;
};

// F_Q[rho, A(c)] / (4 Var(A(c)) over the product of marginals); nullopt when
// the denominator is below eps. Invariant under rescaling of c.
std::optional<double> fisher_density_at(const DensityMatrix& rho, const LocalVectorField& c,
                                        double eps = 1e-12);

// Eigenvector-based Fisher densities. Plain: value = lambda_max(Q^L) (local,
// unit |c|) or lambda_max(Q^G)/N (global, homogeneous field). Variance
// assisted: the field is the top eigenvector of Q - 4 Gamma_Pi, the report
// carries that eigenvalue, and value is the density ratio at that field
// (possibly undefined on a 0/0).
FisherDensityResult fisher_density(const DensityMatrix& rho, Scope scope,
                                   bool variance_assisted);

// f_l: maximum of c^T Q^L c / N over locally normalized fields (|n_i| = 1),
// by exact per-site sphere-constrained ascent with seeded multi-starts.
ConstrainedFisherResult fisher_density_constrained(const DensityMatrix& rho,
                                                   const OptimizerConfig& config = {});

// Generic squeezing coefficient xi^2_{c,B} = |c|^2 Var(B) / |<[A(c), B]>|^2;
// nullopt when the commutator expectation magnitude is below eps.
std::optional<double> squeezing_at(const DensityMatrix& rho, const LocalVectorField& c,
                                   const MatrixXcd& b, double eps = 1e-12);

// xi_l^2 = 4N min Var(A(c)) / (sum_i |m_i|)^2 over locally normalized fields
// orthogonal to the local mean spins. Undefined when any |m_i| vanishes.
SqueezingResult xi_local(const DensityMatrix& rho, const OptimizerConfig& config = {});

// Collective-spin squeezing about the global mean-spin direction n0:
// xi_G^2 = N min Var(J_perp) / <J_{n0}>^2 over the circle orthogonal to n0
// (exact via the 2x2 restriction of Gamma^G). The variance-assisted variant
// replaces the separable bound N by 4 Var(J_perp')_Pi at the conjugate
// direction and minimizes the product over the circle. Undefined when the
// mean spin vanishes.
SqueezingResult xi_global(const DensityMatrix& rho, bool variance_assisted);

// Inhomogeneous local squeezing. normalized = true: xi_Ll^2 =
// 4 min Var / sum_i |m_i|^2 with unit site fields orthogonal to the mean
// spins (sites with m_i = 0 keep full sphere freedom). normalized = false:
// xi_L^2 = 4 min[ (sum_i |m_i|^2/t_i^2) Var(A(c)) ] / (sum_i |m_i|^2)^2 over
// per-site magnitudes t_i > 0 as well; sites with m_i = 0 are excluded.
// Undefined when all mean spins vanish.
SqueezingResult xi_inhomogeneous(const DensityMatrix& rho, bool normalized,
                                 const OptimizerConfig& config = {});

// Smallest k whose k-producibility bound (s k^2 + r)/N, s = floor(N/k),
// r = N - s k, admits the given f_l value. Values above N are rejected.
int entanglement_depth(double f_l_value, int num_qubits);

// All ten coefficients plus every hierarchy inequality and implication,
// evaluated on one shared spectral decomposition. Coefficient order:
// f_V_L, f_L, f_l, f_G, f_V_G, xi_l_inv2, xi_G_inv2, xi_V_G_inv2,
// xi_L_inv2, xi_Ll_inv2.
WitnessReport hierarchy_report(const DensityMatrix& rho, const OptimizerConfig& config = {});

}  // namespace spinwit
