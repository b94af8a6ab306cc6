#include <doctest.h>

#include <cmath>

#include "qnc/detectors.hpp"
#include "qnc/moments.hpp"
#include "qnc/rng.hpp"

using namespace qnc;

TEST_CASE("coherent moments match Poisson identities") {
  // <n> = mu, <n^2> = mu^2 + mu; oracle is direct summation to cutoff 200
  const double mu = 2.0;
  const PhotonDistribution d = photon_distribution(StateSpec::coherent(std::sqrt(mu)), 200);
  const MomentVector mv = moments(d, 3);
  CHECK(mv.raw[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mv.raw[1] == doctest::Approx(6.0).epsilon(1e-12));
  // normal-ordered moments of a coherent state are mu^k
  CHECK(mv.normal_ordered[0] == doctest::Approx(mu).epsilon(1e-12));
  CHECK(mv.normal_ordered[1] == doctest::Approx(mu * mu).epsilon(1e-12));
  CHECK(mv.normal_ordered[2] == doctest::Approx(mu * mu * mu).epsilon(1e-11));
}

TEST_CASE("point mass at one photon") {
  PhotonDistribution d;
  d.probs = Eigen::Vector2d(0.0, 1.0);
  d.tail_mass = 0.0;
  const MomentVector mv = moments(d, 4);
  for (int k = 0; k < 4; ++k) CHECK(mv.raw[k] == 1.0);
}

TEST_CASE("thermal normal-ordered moments are k! nbar^k") {
  const PhotonDistribution d = photon_distribution(StateSpec::thermal(1.0), 400);
  const MomentVector mv = moments(d, 3);
  CHECK(mv.normal_ordered[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mv.normal_ordered[2] == doctest::Approx(6.0).epsilon(1e-11));
}

TEST_CASE("factorial-moment identities hold for every family") {
  const StateSpec specs[] = {
      StateSpec::coherent(1.7),  StateSpec::mixed_coherent(0.5, 1.9),
      StateSpec::thermal(2.2),   StateSpec::squeezed_vacuum(1.0),
      StateSpec::spats(0.9),     StateSpec::lossy_fock(3, 0.4),
  };
  for (const auto& s : specs) {
    const MomentVector mv = moments(photon_distribution(s, 400), 3);
    const double n1 = mv.raw[0], n2 = mv.raw[1], n3 = mv.raw[2];
    CHECK(mv.normal_ordered[1] ==
          doctest::Approx(n2 - n1).epsilon(1e-10).scale(std::max(1.0, std::abs(n2))));
    CHECK(mv.normal_ordered[2] ==
          doctest::Approx(n3 - 3.0 * n2 + 2.0 * n1)
              .epsilon(1e-10)
              .scale(std::max(1.0, std::abs(n3))));
  }
}

TEST_CASE("moments reject biased truncation") {
  PhotonDistribution d;
  d.probs = Eigen::Vector2d(0.5, 0.4);
  d.tail_mass = 0.1;
  CHECK_THROWS_AS(moments(d, 2), TruncationError);
}

TEST_CASE("empirical moments of constant samples") {
  Eigen::MatrixXi s(3, 1);
  s << 2, 2, 2;
  const MomentVector mv = empirical_moments(s, 0, 2);
  CHECK(mv.raw[0] == 2.0);
  CHECK(mv.raw[1] == 4.0);
  CHECK(mv.raw_stderr[0] == 0.0);
  CHECK(mv.raw_stderr[1] == 0.0);
}

TEST_CASE("empirical stderr of a two-point sample") {
  Eigen::MatrixXi s(2, 1);
  s << 0, 2;
  const MomentVector mv = empirical_moments(s, 0, 1);
  CHECK(mv.raw[0] == 1.0);
  // unbiased variance of {0,2} is 2 -> stderr sqrt(2/2) = 1
  CHECK(mv.raw_stderr[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("empirical moments reject tiny sample sets") {
  Eigen::MatrixXi s(1, 1);
  s << 3;
  CHECK_THROWS(empirical_moments(s, 0, 1));
}

TEST_CASE("Poisson sample mean lands within 5 standard errors") {
  // seeded statistical property; repeated seeds keep the flake rate nil
  const PhotonDistribution d = photon_distribution(StateSpec::coherent(2.0), 60);
  int hits = 0;
  const int runs = 20;
  for (int seed = 1; seed <= runs; ++seed) {
    const SampleSet set = sample({d.probs}, 1000, seed);
    const MomentVector mv = empirical_moments(set.samples, 0, 2);
    if (std::abs(mv.raw[0] - 4.0) <= 5.0 * mv.raw_stderr[0]) ++hits;
  }
  CHECK(hits >= runs - 1);
}

TEST_CASE("empirical moments converge to exact ones at M = 1e5") {
  const StateSpec spec = StateSpec::spats(0.8);
  const PhotonDistribution d = photon_distribution(spec, adaptive_cutoff(spec));
  const MomentVector exact = moments(d, 3);
  const SampleSet set = sample({d.probs}, 100000, 424242);
  const MomentVector emp = empirical_moments(set.samples, 0, 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(emp.raw[k] - exact.raw[k]) < 6.0 * emp.raw_stderr[k]);
    CHECK(std::abs(emp.normal_ordered[k] - exact.normal_ordered[k]) <
          6.0 * std::max(emp.normal_stderr[k], 1e-12));
  }
}
