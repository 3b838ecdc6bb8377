#pragma once

#include <variant>

#include "spinwit/common.hpp"
#include "spinwit/spin_ops.hpp"
#include "spinwit/states.hpp"

namespace spinwit {

// Benchmark-state specifications. Sizes are validated against the qubit cap
// when the state is built.
struct GhzSpec {
  int num_qubits;
};
struct TwistedGhzSpec {
  int k;  // N = 3k
};
struct TwistedWSpec {
  int k;  // N = 3k
};
struct RhoNkSpec {
  int num_qubits;  // N
  int k;           // GHZ block size, k <= N
};
struct NoisyTwistedGhzSpec {
  int k;
  double p;  // white-noise-to-signal ratio, >= 0; builds (psi + p I/d) / (1+p)
};
struct TwistedMixtureSpec {
  int k;
  double p;  // twisted-W admixture, in [0, 1]; p = 0 is the pure twisted GHZ
};
struct SpinCoherentSpec {
  int num_qubits;
  Vector3d direction;  // need not be normalized; must be nonzero
};
struct AsymInitSpec {
  int half;  // M; N = 2M
};

using StateSpec = std::variant<GhzSpec, TwistedGhzSpec, TwistedWSpec, RhoNkSpec,
                               NoisyTwistedGhzSpec, TwistedMixtureSpec,
                               SpinCoherentSpec, AsymInitSpec>;

// Pure-state builders (exactly normalized).
StateVector ghz_state(int num_qubits);
StateVector twisted_ghz_state(int k);
// Sum of the three twisted product terms; they are not mutually orthogonal,
// so the result is normalized exactly rather than by 1/sqrt(3).
StateVector twisted_w_state(int k);
StateVector spin_coherent_state(int num_qubits, const Vector3d& direction);
// |down_y>^M (x) |down_x>^M.
StateVector asym_init_state(int half);

// The site pattern (e_x^k, e_y^k, e_z^k) matched to the twisted GHZ state.
LocalVectorField twisted_field(int k);

DensityMatrix build_state(const StateSpec& spec);

struct IsingModel {
  int num_qubits = 0;
  double alpha = 0.0;     // power-law range exponent
  double field = 0.0;     // transverse field strength B
  double coupling = 0.0;  // J0
  MatrixXcd matrix;
};

// H = (1/N) sum_{i>j} J0/|i-j|^alpha sigma_z^i sigma_z^j + B sum_i sigma_x^i.
IsingModel ising_hamiltonian(int num_qubits, double alpha, double field, double coupling);

}  // namespace spinwit
