#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinwit/pauli.hpp"
#include "support.hpp"

using namespace spinwit;
using namespace testsup;

TEST_CASE("pauli kernels match dense embeddings") {
  auto rng = rng_stream(21, 0);
  for (int n : {1, 2, 3}) {
    const int d = dim_of(n);
    MatrixXcd m = random_ginibre(d, rng);
    for (int site = 1; site <= n; ++site)
      for (int axis = 0; axis < 3; ++axis) {
        MatrixXcd dense = embed_site(n, site, pauli_matrix(axis));
        MatrixXcd fast;
        apply_pauli_left(axis, site, n, m, fast);
        CHECK((fast - dense * m).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(std::abs(trace_pauli_times(axis, site, n, m) - (dense * m).trace()) < 1e-13);
      }
    for (int sa = 1; sa <= n; ++sa)
      for (int sb = 1; sb <= n; ++sb)
        for (int aa = 0; aa < 3; ++aa)
          for (int ab = 0; ab < 3; ++ab) {
            MatrixXcd da = embed_site(n, sa, pauli_matrix(aa));
            MatrixXcd db = embed_site(n, sb, pauli_matrix(ab));
            CHECK(std::abs(trace_pauli_pair_times(aa, sa, ab, sb, n, m) -
                           (da * db * m).trace()) < 1e-12);
          }
  }
}

TEST_CASE("weighted_spin_operator assembles the advertised matrices") {
  SpinObservable half_z = weighted_spin_operator(LocalVectorField(1, Vector3d::UnitZ()));
  CHECK((half_z.matrix - 0.5 * MatrixXcd(pauli_matrix(kZ))).cwiseAbs().maxCoeff() < 1e-15);

  SpinObservable jz2 = weighted_spin_operator(LocalVectorField(2, Vector3d::UnitZ()));
  MatrixXcd expect = MatrixXcd::Zero(4, 4);
  expect.diagonal() << 1, 0, 0, -1;
  CHECK((jz2.matrix - expect).cwiseAbs().maxCoeff() < 1e-15);

  LocalVectorField c(std::vector<Vector3d>{Vector3d::UnitX(), 2.0 * Vector3d::UnitY()});
  MatrixXcd oracle =
      0.5 * kron(pauli_matrix(kX), MatrixXcd::Identity(2, 2)) +
      kron(MatrixXcd::Identity(2, 2), MatrixXcd(pauli_matrix(kY)));
  CHECK((weighted_spin_operator(c).matrix - oracle).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("collective_spin") {
  CHECK((collective_spin(1, Vector3d::UnitX()).matrix - 0.5 * MatrixXcd(pauli_matrix(kX)))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK(collective_spin(2, Vector3d::Zero()).matrix.cwiseAbs().maxCoeff() == 0.0);

  auto rng = rng_stream(22, 0);
  Vector3d n = random_unit_vec3(rng);
  CHECK((collective_spin(3, n).matrix - weighted_spin_operator(LocalVectorField(3, n)).matrix)
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("spin observables are Hermitian and linear in the field") {
  auto rng = rng_stream(23, 0);
  for (int n : {1, 2, 4}) {
    LocalVectorField c1 = random_field(n, rng), c2 = random_field(n, rng);
    MatrixXcd a1 = weighted_spin_operator(c1).matrix;
    CHECK((a1 - a1.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-12);

    LocalVectorField sum = c1;
    for (int i = 0; i < n; ++i) sum.vectors[i] += c2.vectors[i];
    CHECK((weighted_spin_operator(sum).matrix - a1 - weighted_spin_operator(c2).matrix)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("commutator_field identity") {
  LocalVectorField ex(3, Vector3d::UnitX()), ey(3, Vector3d::UnitY());
  LocalVectorField ez = commutator_field(ex, ey);
  for (const auto& v : ez.vectors) CHECK((v - Vector3d::UnitZ()).norm() < 1e-15);

  auto rng = rng_stream(24, 0);
  LocalVectorField c1 = random_field(2, rng);
  CHECK(commutator_field(c1, c1).flattened().norm() < 1e-15);

  LocalVectorField a(std::vector<Vector3d>{Vector3d::UnitX(), Vector3d::UnitY()});
  LocalVectorField b(std::vector<Vector3d>{Vector3d::UnitY(), Vector3d::UnitZ()});
  LocalVectorField ab = commutator_field(a, b);
  CHECK((ab.vectors[0] - Vector3d::UnitZ()).norm() < 1e-15);
  CHECK((ab.vectors[1] - Vector3d::UnitX()).norm() < 1e-15);

  for (int n : {2, 3, 4}) {
    LocalVectorField f1 = random_field(n, rng), f2 = random_field(n, rng);
    MatrixXcd lhs = weighted_spin_operator(f1).matrix * weighted_spin_operator(f2).matrix -
                    weighted_spin_operator(f2).matrix * weighted_spin_operator(f1).matrix;
    MatrixXcd rhs = cxd(0, 1) * weighted_spin_operator(commutator_field(f1, f2)).matrix;
    CHECK((lhs - rhs).norm() < 1e-10);
  }
}

TEST_CASE("moments") {
  SpinObservable sz2 = weighted_spin_operator(LocalVectorField(1, Vector3d::UnitZ()));
  Moments mz = moments(DensityMatrix(up_z()), sz2);
  CHECK(mz.mean_a == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(mz.var_a) < 1e-12);

  SpinObservable sx2 = weighted_spin_operator(LocalVectorField(1, Vector3d::UnitX()));
  Moments mx = moments(DensityMatrix(up_z()), sx2);
  CHECK(std::abs(mx.mean_a) < 1e-12);
  CHECK(mx.var_a == doctest::Approx(0.25).epsilon(1e-12));

  Moments g = moments(ghz(3), weighted_spin_operator(LocalVectorField(3, Vector3d::UnitZ())));
  CHECK(std::abs(g.mean_a) < 1e-12);
  CHECK(g.var_a == doctest::Approx(2.25).epsilon(1e-12));

  auto rng = rng_stream(25, 0);
  DensityMatrix rho = random_full_rank(2, rng);
  SpinObservable a = weighted_spin_operator(random_field(2, rng));
  SpinObservable b = weighted_spin_operator(random_field(2, rng));
  CHECK(std::abs(moments(rho, a, b).cov_ab - moments(rho, b, a).cov_ab) < 1e-12);
}

TEST_CASE("local_variance_sum formula and saturation") {
  std::vector<BlochVector> zero3(3, BlochVector{Vector3d::Zero()});
  LocalVectorField unit3 = LocalVectorField(3, Vector3d::UnitX());
  CHECK(local_variance_sum(unit3, zero3) == doctest::Approx(3.0).epsilon(1e-12));

  // n_i parallel to m_i on a pure product state: zero local variance.
  DensityMatrix prod = tensor_product(DensityMatrix(up_z()), DensityMatrix(up_x()));
  auto margs = marginal_bloch_vectors(prod);
  LocalVectorField aligned(std::vector<Vector3d>{Vector3d::UnitZ(), Vector3d::UnitX()});
  CHECK(std::abs(local_variance_sum(aligned, margs)) < 1e-12);

  std::vector<BlochVector> one{BlochVector{Vector3d::UnitZ()}};
  CHECK(local_variance_sum(LocalVectorField(1, Vector3d::UnitX()), one) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Equals 4 Var(A(c)) over the product of marginals, and never exceeds |c|^2.
  auto rng = rng_stream(26, 0);
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 5; ++rep) {
      DensityMatrix rho = (rep % 2 == 0) ? random_full_rank(n, rng)
                                         : DensityMatrix(random_pure(n, rng));
      LocalVectorField c = random_field(n, rng);
      auto m = marginal_bloch_vectors(rho);
      const double fast = local_variance_sum(c, m);
      DensityMatrix pi = product_of_marginals(rho);
      const double direct = 4.0 * moments(pi, weighted_spin_operator(c)).var_a;
      CHECK(std::abs(fast - direct) < 1e-10);
      CHECK(fast <= c.norm_sq() + 1e-12);

      // Choosing every n_i orthogonal to m_i saturates the bound.
      LocalVectorField perp;
      for (int i = 0; i < n; ++i) {
        auto [u, v] = plane_basis(m[i].m);
        (void)v;
        perp.vectors.push_back(u * c.vectors[i].norm());
      }
      CHECK(std::abs(local_variance_sum(perp, m) - perp.norm_sq()) < 1e-10);
    }
  }
}

TEST_CASE("plane_basis conventions") {
  auto rng = rng_stream(27, 0);
  for (int rep = 0; rep < 20; ++rep) {
    Vector3d a = random_unit_vec3(rng) * 0.7;
    auto [u, v] = plane_basis(a);
    CHECK(std::abs(u.norm() - 1.0) < 1e-12);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    CHECK(std::abs(u.dot(v)) < 1e-12);
    CHECK(std::abs(u.dot(a)) < 1e-12);
    CHECK(std::abs(v.dot(a)) < 1e-12);
    CHECK((u.cross(v) - a.normalized()).norm() < 1e-12);
  }

  auto [u0, v0] = plane_basis(Vector3d::Zero());
  CHECK((u0 - Vector3d::UnitX()).norm() < 1e-15);
  CHECK((v0 - Vector3d::UnitY()).norm() < 1e-15);

  auto [ur, vr] = plane_basis(Vector3d::Zero(), Vector3d::UnitZ());
  CHECK(std::abs(ur.dot(Vector3d::UnitZ())) < 1e-12);
  CHECK(std::abs(vr.dot(Vector3d::UnitZ())) < 1e-12);
}
