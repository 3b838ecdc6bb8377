#include "spinwit/models.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinwit/pauli.hpp"

namespace spinwit {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void check_cap(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("state spec: need at least one qubit");
  if (num_qubits > kDefaultQubitCap)
    throw std::invalid_argument("state spec: qubit number exceeds the cap");
}

Eigen::Vector2cd axis_ket(Axis axis, bool up) {
  switch (axis) {
    case Axis::kX:
      return Eigen::Vector2cd(kInvSqrt2, up ? kInvSqrt2 : -kInvSqrt2);
    case Axis::kY:
      return Eigen::Vector2cd(kInvSqrt2, cxd(0.0, up ? kInvSqrt2 : -kInvSqrt2));
    default:
      return up ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
  }
}

// Tensor product over sites; the first factor occupies the highest bits.
VectorXcd product_ket(const std::vector<Eigen::Vector2cd>& sites) {
  VectorXcd v = VectorXcd::Ones(1);
  for (const auto& s : sites) {
    VectorXcd next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * s(0);
      next(2 * i + 1) = v(i) * s(1);
    }
    v = next;
  }
  return v;
}

std::vector<Eigen::Vector2cd> repeated_blocks(int k, Axis a1, bool u1, Axis a2, bool u2,
                                              Axis a3, bool u3) {
  std::vector<Eigen::Vector2cd> sites;
  sites.reserve(3 * k);
  for (int i = 0; i < k; ++i) sites.push_back(axis_ket(a1, u1));
  for (int i = 0; i < k; ++i) sites.push_back(axis_ket(a2, u2));
  for (int i = 0; i < k; ++i) sites.push_back(axis_ket(a3, u3));
  return sites;
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("state spec: mixing parameter must be in [0, 1]");
}

void check_noise_ratio(double p) {
  if (!(p >= 0.0) || !std::isfinite(p))
    throw std::invalid_argument("state spec: noise ratio must be finite and >= 0");
}

}  // namespace

StateVector ghz_state(int num_qubits) {
  check_cap(num_qubits);
  VectorXcd amps = VectorXcd::Zero(dim_of(num_qubits));
  amps(0) = kInvSqrt2;
  amps(amps.size() - 1) = kInvSqrt2;
  return StateVector{num_qubits, amps};
}

StateVector twisted_ghz_state(int k) {
  if (k < 1) throw std::invalid_argument("twisted GHZ: k must be positive");
  check_cap(3 * k);
  // The up- and down-products are exactly orthogonal (each site pair is), so
  // 1/sqrt(2) normalizes exactly.
  const VectorXcd up =
      product_ket(repeated_blocks(k, Axis::kX, true, Axis::kY, true, Axis::kZ, true));
  const VectorXcd dn =
      product_ket(repeated_blocks(k, Axis::kX, false, Axis::kY, false, Axis::kZ, false));
  return StateVector{3 * k, kInvSqrt2 * (up + dn)};
}

StateVector twisted_w_state(int k) {
  if (k < 1) throw std::invalid_argument("twisted W: k must be positive");
  check_cap(3 * k);
  const VectorXcd t1 =
      product_ket(repeated_blocks(k, Axis::kX, true, Axis::kX, false, Axis::kX, false));
  const VectorXcd t2 =
      product_ket(repeated_blocks(k, Axis::kY, false, Axis::kY, true, Axis::kY, false));
  const VectorXcd t3 =
      product_ket(repeated_blocks(k, Axis::kZ, false, Axis::kZ, false, Axis::kZ, true));
  VectorXcd sum = t1 + t2 + t3;
  sum /= sum.norm();
  return StateVector{3 * k, sum};
}

StateVector spin_coherent_state(int num_qubits, const Vector3d& direction) {
  check_cap(num_qubits);
  if (direction.norm() < 1e-14)
    throw std::invalid_argument("spin-coherent state: direction must be nonzero");
  const Vector3d n = direction.normalized();
  const double theta = std::acos(std::clamp(n(2), -1.0, 1.0));
  const double phi = std::atan2(n(1), n(0));
  const Eigen::Vector2cd site(std::cos(0.5 * theta),
                              std::polar(std::sin(0.5 * theta), phi));
  return StateVector{num_qubits,
                     product_ket(std::vector<Eigen::Vector2cd>(num_qubits, site))};
}

StateVector asym_init_state(int half) {
  if (half < 1) throw std::invalid_argument("asymmetric initial state: M must be positive");
  check_cap(2 * half);
  std::vector<Eigen::Vector2cd> sites;
  sites.reserve(2 * half);
  for (int i = 0; i < half; ++i) sites.push_back(axis_ket(Axis::kY, false));
  for (int i = 0; i < half; ++i) sites.push_back(axis_ket(Axis::kX, false));
  return StateVector{2 * half, product_ket(sites)};
}

LocalVectorField twisted_field(int k) {
  if (k < 1) throw std::invalid_argument("twisted field: k must be positive");
  std::vector<Vector3d> vecs;
  vecs.reserve(3 * k);
  for (int i = 0; i < k; ++i) vecs.push_back(Vector3d::UnitX());
  for (int i = 0; i < k; ++i) vecs.push_back(Vector3d::UnitY());
  for (int i = 0; i < k; ++i) vecs.push_back(Vector3d::UnitZ());
  return LocalVectorField(vecs);
}

DensityMatrix build_state(const StateSpec& spec) {
  return std::visit(
      [](const auto& s) -> DensityMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GhzSpec>) {
          return DensityMatrix(ghz_state(s.num_qubits));
        } else if constexpr (std::is_same_v<T, TwistedGhzSpec>) {
          return DensityMatrix(twisted_ghz_state(s.k));
        } else if constexpr (std::is_same_v<T, TwistedWSpec>) {
          return DensityMatrix(twisted_w_state(s.k));
        } else if constexpr (std::is_same_v<T, RhoNkSpec>) {
          if (s.k < 1) throw std::invalid_argument("state spec: k must be positive");
          if (s.num_qubits < s.k)
            throw std::invalid_argument("state spec: k cannot exceed the qubit number");
          check_cap(s.num_qubits);
          const DensityMatrix core(ghz_state(s.k));
          const int rest = s.num_qubits - s.k;
          if (rest == 0) return core;
          const double dim_rest = static_cast<double>(dim_of(rest));
          const DensityMatrix mixed(
              rest, MatrixXcd::Identity(dim_of(rest), dim_of(rest)) / dim_rest);
          return tensor_product(core, mixed);
        } else if constexpr (std::is_same_v<T, NoisyTwistedGhzSpec>) {
          check_noise_ratio(s.p);
          const DensityMatrix pure(twisted_ghz_state(s.k));
          const auto d = pure.dim();
          const MatrixXcd m =
              (pure.matrix + (s.p / static_cast<double>(d)) *
                                 MatrixXcd::Identity(d, d)) /
              (1.0 + s.p);
          return DensityMatrix(3 * s.k, m);
        } else if constexpr (std::is_same_v<T, TwistedMixtureSpec>) {
          check_probability(s.p);
          const DensityMatrix ghz_part(twisted_ghz_state(s.k));
          const DensityMatrix w_part(twisted_w_state(s.k));
          return DensityMatrix(3 * s.k,
                               (1.0 - s.p) * ghz_part.matrix + s.p * w_part.matrix);
        } else if constexpr (std::is_same_v<T, SpinCoherentSpec>) {
          return DensityMatrix(spin_coherent_state(s.num_qubits, s.direction));
        } else {
          static_assert(std::is_same_v<T, AsymInitSpec>);
          return DensityMatrix(asym_init_state(s.half));
        }
      },
      spec);
}

IsingModel ising_hamiltonian(int num_qubits, double alpha, double field, double coupling) {
  if (num_qubits < 2)
    throw std::invalid_argument("ising_hamiltonian: need at least two qubits");
  check_cap(num_qubits);
  if (alpha < 0.0) throw std::invalid_argument("ising_hamiltonian: alpha must be >= 0");
  const auto d = dim_of(num_qubits);

  // The interaction is diagonal: each basis state contributes the product of
  // its z signs, weighted by the power-law couplings.
  VectorXd diag = VectorXd::Zero(d);
  for (int i = 2; i <= num_qubits; ++i) {
    for (int j = 1; j < i; ++j) {
      const double jij = coupling / std::pow(static_cast<double>(i - j), alpha);
      const auto mi = site_mask(num_qubits, i);
      const auto mj = site_mask(num_qubits, j);
      for (int b = 0; b < d; ++b) {
        const double si = (b & mi) ? -1.0 : 1.0;
        const double sj = (b & mj) ? -1.0 : 1.0;
        diag(b) += jij * si * sj / num_qubits;
      }
    }
  }

  MatrixXcd h = diag.cast<cxd>().asDiagonal();
  if (field != 0.0) {
    // sigma_x^i flips bit i: every basis state couples to its flipped partner.
    for (int i = 1; i <= num_qubits; ++i) {
      const auto mi = site_mask(num_qubits, i);
      for (int b = 0; b < d; ++b) h(b ^ mi, b) += field;
    }
  }
  return IsingModel{num_qubits, alpha, field, coupling, std::move(h)};
}

}  // namespace spinwit
