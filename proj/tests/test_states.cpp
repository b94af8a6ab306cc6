#include <doctest.h>

#include <cmath>

#include "qnc/states.hpp"

using namespace qnc;

TEST_CASE("vacuum coherent state is a point mass") {
  const PhotonDistribution d = photon_distribution(StateSpec::coherent(0.0), 5);
  CHECK(d.probs[0] == 1.0);
  for (int m = 1; m <= 5; ++m) CHECK(d.probs[m] == 0.0);
  CHECK(d.tail_mass == 0.0);
}

TEST_CASE("squeezed vacuum populates even photon numbers only") {
  const PhotonDistribution d = photon_distribution(StateSpec::squeezed_vacuum(0.5), 21);
  for (int m = 1; m <= 21; m += 2) CHECK(d.probs[m] == 0.0);
  CHECK(d.probs[2] > 0.0);
}

TEST_CASE("thermal nbar=1 ground-state weight") {
  const PhotonDistribution d = photon_distribution(StateSpec::thermal(1.0), 0);
  CHECK(d.probs[0] == doctest::Approx(0.5).epsilon(1e-14));
  // cross-check tail against brute-force normalization to cutoff 200
  const PhotonDistribution full = photon_distribution(StateSpec::thermal(1.0), 200);
  CHECK(full.probs.sum() + full.tail_mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.tail_mass == doctest::Approx(1.0 - 0.5).epsilon(1e-12));
}

TEST_CASE("spats has no vacuum component and normalizes") {
  const PhotonDistribution d = photon_distribution(StateSpec::spats(0.8), 300);
  CHECK(d.probs[0] == 0.0);
  CHECK(d.probs.sum() + d.tail_mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalization holds for every family at adaptive cutoffs") {
  const StateSpec specs[] = {
      StateSpec::coherent(2.3),        StateSpec::mixed_coherent(1.0, 2.5),
      StateSpec::thermal(3.0),         StateSpec::squeezed_vacuum(1.2),
      StateSpec::spats(1.1),           StateSpec::lossy_fock(4, 0.25),
  };
  for (const auto& s : specs) {
    const int cutoff = adaptive_cutoff(s);
    const PhotonDistribution d = photon_distribution(s, cutoff);
    CHECK(std::abs(d.probs.sum() + d.tail_mass - 1.0) < 1e-12);
    CHECK(d.tail_mass >= 0.0);
    CHECK(d.probs.minCoeff() >= 0.0);
  }
}

TEST_CASE("lossy fock two-point mixture") {
  const PhotonDistribution d = photon_distribution(StateSpec::lossy_fock(3, 0.2), 5);
  CHECK(d.probs[3] == doctest::Approx(0.8));
  CHECK(d.probs[2] == doctest::Approx(0.2));
  CHECK(d.probs.sum() == doctest::Approx(1.0));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(StateSpec::thermal(-0.1));
  CHECK_THROWS(StateSpec::lossy_fock(0, 0.1));
  CHECK_THROWS(StateSpec::lossy_fock(2, 1.5));
  CHECK_THROWS(photon_distribution(StateSpec::coherent(1.0), -1));
}

TEST_CASE("factorial-moment generating function matches direct summation") {
  const StateSpec specs[] = {
      StateSpec::coherent(1.4),  StateSpec::mixed_coherent(0.7, 2.0),
      StateSpec::thermal(1.7),   StateSpec::squeezed_vacuum(0.9),
      StateSpec::spats(0.6),     StateSpec::lossy_fock(2, 0.3),
  };
  for (const auto& s : specs) {
    const PhotonDistribution d = photon_distribution(s, 400);
    for (double z : {1.0, 0.75, 0.5, 0.0, -0.5, -1.0}) {
      double direct = 0.0;
      for (int m = 0; m <= d.cutoff(); ++m) direct += d.probs[m] * std::pow(z, m);
      CHECK(factorial_moment_gf(s, z) == doctest::Approx(direct).epsilon(1e-11));
    }
  }
}

TEST_CASE("adaptive cutoff keeps the tail below 1e-10") {
  for (const auto& s : {StateSpec::coherent(3.5), StateSpec::thermal(7.0),
                        StateSpec::squeezed_vacuum(1.2), StateSpec::spats(1.2)}) {
    const int c = adaptive_cutoff(s);
    CHECK(c <= 200);
    const PhotonDistribution d = photon_distribution(s, c);
    CHECK(d.tail_mass < 1e-10);
  }
}
