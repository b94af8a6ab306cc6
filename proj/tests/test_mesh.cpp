#include <doctest.h>

#include <cmath>

#include "qnc/mesh.hpp"

using namespace qnc;

TEST_CASE("identity decomposes to a trivial plan") {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
  const MeshPlan plan = decompose(id);
  const Eigen::MatrixXcd rebuilt = reconstruct(plan, 4);
  CHECK((rebuilt - id).cwiseAbs().maxCoeff() < 1e-12);
  for (const auto& e : plan) CHECK(std::abs(e.theta) < 1e-12);
}

TEST_CASE("bundled 6-mode unitary round-trips through the mesh") {
  const Eigen::MatrixXcd u = bundled_unitary6();
  CHECK(unitarity_error(u) < 1e-10);
  const MeshPlan plan = decompose(u);
  CHECK((reconstruct(plan, 6) - u).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("orthonormalization stays close to the rounded table") {
  Eigen::MatrixXd m(6, 6);
  m << -0.14, -0.59, 0.25, -0.64, 0.23, -0.32,
        0.28,  0.10, -0.80, -0.33, 0.40, -0.00,
        0.46,  0.31, 0.15, -0.58, -0.57, 0.09,
       -0.59,  0.40, 0.12, -0.38, 0.24, 0.53,
       -0.17,  0.60, 0.10, -0.04, 0.14, -0.76,
       -0.56, -0.15, -0.50, -0.07, -0.62, -0.17;
  double adjustment = 0.0;
  const Eigen::MatrixXcd q = orthonormalize(m.cast<std::complex<double>>(), &adjustment);
  CHECK(unitarity_error(q) < 1e-12);
  CHECK(adjustment < 0.05); // two-decimal rounding adjustment
}

TEST_CASE("random seeded orthogonal matrices round-trip") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 5);
    const Eigen::MatrixXcd u = random_orthogonal(dim, seed);
    CHECK(unitarity_error(u) < 1e-12);
    const MeshPlan plan = decompose(u);
    CHECK((reconstruct(plan, dim) - u).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("complex unitaries decompose too") {
  // build one from a plan, reconstruct, decompose again
  MeshPlan source{
      MeshElement::phase_shifter(0, 0.7),
      MeshElement::beamsplitter(0, 1, 0.3, 1.1),
      MeshElement::beamsplitter(1, 2, 1.2, -0.4),
      MeshElement::phase_shifter(2, -2.0),
  };
  const Eigen::MatrixXcd u = reconstruct(source, 3);
  CHECK(unitarity_error(u) < 1e-12);
  const MeshPlan plan = decompose(u);
  CHECK((reconstruct(plan, 3) - u).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("non-unitary input is rejected with the deviation") {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(3, 3);
  bad(0, 0) = 1.5;
  CHECK_THROWS_WITH_AS(decompose(bad), doctest::Contains("deviates from unitarity"),
                       std::invalid_argument);
}

TEST_CASE("mesh element matrices are unitary") {
  const MeshElement bs = MeshElement::beamsplitter(0, 2, 0.77, 0.3);
  CHECK(unitarity_error(bs.matrix(4)) < 1e-14);
  const MeshElement ps = MeshElement::phase_shifter(1, 2.2);
  CHECK(unitarity_error(ps.matrix(4)) < 1e-14);
}
