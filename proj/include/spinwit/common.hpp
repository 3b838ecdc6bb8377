#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace spinwit {

using cxd = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXd = Eigen::VectorXd;
using Vector3d = Eigen::Vector3d;
using Matrix3d = Eigen::Matrix3d;

inline constexpr int kDefaultQubitCap = 12;

// Tolerances shared across modules.  Values are part of the library contract:
// changing one changes which states are accepted and which pairs enter the
// Fisher sums.
inline constexpr double kHermTol = 1e-12;      // Hermiticity / trace of DensityMatrix
inline constexpr double kNegEigFloor = -1e-10; // below this, a state is rejected
inline constexpr double kEigCutoffRel = 1e-12; // negligible-eigenvalue flag, relative
inline constexpr double kPairSkip = 1e-12;     // skip Fisher pairs with p_k + p_l below this
inline constexpr double kEigClusterGap = 1e-13;  // consecutive eigenvalues closer than this are one cluster
inline constexpr double kMeanSpinEps = 1e-10;  // |m_i| below this counts as maximally mixed
inline constexpr double kVerdictTol = 1e-8;    // "entangled" needs value > 1 + this
inline constexpr double kDiffEigTol = 1e-10;   // or difference eigenvalue > this
inline constexpr double kHierarchyTol = 1e-8;  // report-internal inequality slack

inline int dim_of(int num_qubits) { return 1 << num_qubits; }

// Deterministic per-stream RNG: the same (seed, stream) pair always yields the
// same sequence, independent of which thread runs it.
inline std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

}  // namespace spinwit
