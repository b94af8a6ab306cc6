#include <doctest.h>

#include <cmath>

#include "qnc/detectors.hpp"
#include "qnc/special.hpp"

using namespace qnc;

TEST_CASE("vacuum never clicks without dark counts") {
  const OutcomeDistribution c =
      click_distribution(photon_distribution(StateSpec::coherent(0.0), 4), 8, 1.0, 0.0);
  CHECK(c.probs[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coherent clicks are binomial") {
  // q = 1 - exp(-mu/N) at unit efficiency, zero dark counts
  const double mu = 2.5;
  const int n = 8;
  const StateSpec spec = StateSpec::coherent(std::sqrt(mu));
  const OutcomeDistribution c = click_distribution(spec, n, 1.0, 0.0);
  const double q = 1.0 - std::exp(-mu / n);
  for (int k = 0; k <= n; ++k) {
    const double expect =
        binomial_real(n, k) * std::pow(q, k) * std::pow(1.0 - q, n - k);
    CHECK(c.probs[k] == doctest::Approx(expect).epsilon(1e-10));
  }
  // distribution-summation route agrees with the closed form
  const OutcomeDistribution c2 =
      click_distribution(photon_distribution(spec, adaptive_cutoff(spec)), n, 1.0, 0.0);
  CHECK((c.probs - c2.probs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("one photon gives exactly one click at unit efficiency") {
  PhotonDistribution fock1;
  fock1.probs = Eigen::Vector2d(0.0, 1.0);
  const OutcomeDistribution c = click_distribution(fock1, 8, 1.0, 0.0);
  CHECK(c.probs[1] == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 0; k <= 8; ++k)
    if (k != 1) CHECK(std::abs(c.probs[k]) < 1e-12);
}

TEST_CASE("click distribution approaches Poisson for many bins") {
  const StateSpec spec = StateSpec::coherent(1.0);
  const OutcomeDistribution c = click_distribution(spec, 512, 1.0, 0.0);
  const PhotonDistribution p = photon_distribution(spec, 60);
  double tv = 0.0;
  for (int k = 0; k <= 60; ++k) tv += std::abs(c.probs[k] - p.probs[k]);
  CHECK(0.5 * tv < 1e-2);
}

TEST_CASE("outcome distributions sum to one") {
  for (double eta : {1.0, 0.7}) {
    for (double nu : {0.0, 0.05}) {
      const OutcomeDistribution c = click_distribution(StateSpec::thermal(1.3), 8, eta, nu);
      CHECK(c.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(c.probs.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("ideal PNR copies probabilities and folds the tail") {
  const StateSpec spec = StateSpec::coherent(1.0);
  const PhotonDistribution d = photon_distribution(spec, 80);
  const OutcomeDistribution out = pnr_response(d, DetectorModel::ideal_pnr(29));
  for (int m = 0; m < 29; ++m) CHECK(out.probs[m] == d.probs[m]);
  CHECK(out.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("binned PNR truncation biases bright states toward number squeezing") {
  const StateSpec spec = StateSpec::coherent(3.0); // mu = 9
  const PhotonDistribution d = photon_distribution(spec, adaptive_cutoff(spec));
  const OutcomeDistribution out = pnr_response(d, DetectorModel::binned_pnr(1.0, 0.0));
  double mean = 0.0;
  for (int o = 0; o < out.probs.size(); ++o) mean += o * out.probs[o];
  CHECK(mean < 9.0);
}

TEST_CASE("binomial thinning of a two-photon state") {
  PhotonDistribution fock2;
  fock2.probs = Eigen::Vector3d(0.0, 0.0, 1.0);
  const OutcomeDistribution out = pnr_response(fock2, DetectorModel::binned_pnr(0.5, 0.0));
  CHECK(out.probs[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(out.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.probs[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(out.probs[3] == doctest::Approx(0.0));
  CHECK(out.probs[4] == doctest::Approx(0.0));
}

TEST_CASE("povm matrix columns are stochastic for every kind") {
  const DetectorModel models[] = {
      DetectorModel::ideal_pnr(10),
      DetectorModel::binned_pnr(0.8, 0.02),
      DetectorModel::click_multiplex(8, 0.9, 0.01),
  };
  for (const auto& m : models) {
    const Eigen::MatrixXd p = povm_matrix(m, 25);
    for (int col = 0; col < p.cols(); ++col)
      CHECK(p.col(col).sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.minCoeff() >= -1e-15);
  }
}

TEST_CASE("povm file response equals the parametric model") {
  // independent construction: thinning+dark convolution by explicit loops
  const double eta = 0.6, nu = 0.1;
  const int cutoff = 60;
  const std::vector<int> edges{0, 1, 2, 3, 4};
  Eigen::MatrixXd povm = Eigen::MatrixXd::Zero(5, cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) {
    std::vector<double> count_probs(cutoff + 151, 0.0);
    for (int i = 0; i <= m; ++i) {
      const double thin = std::exp(log_factorial(m) - log_factorial(i) - log_factorial(m - i)) *
                          std::pow(eta, i) * std::pow(1.0 - eta, m - i);
      for (int dk = 0; dk < 150; ++dk) {
        const double dark = std::exp(-nu + dk * std::log(nu) - log_factorial(dk));
        count_probs[i + dk] += thin * dark;
      }
    }
    for (size_t j = 0; j < count_probs.size(); ++j)
      povm(std::min<size_t>(4, j), m) += count_probs[j];
  }
  for (int m = 0; m <= cutoff; ++m) povm.col(m) /= povm.col(m).sum();

  const DetectorModel file_model = DetectorModel::povm_file(povm);
  const DetectorModel param_model = DetectorModel::binned_pnr(eta, nu, edges);
  const StateSpec spec = StateSpec::thermal(1.5);
  const PhotonDistribution d = photon_distribution(spec, cutoff);
  const OutcomeDistribution via_file = pnr_response(d, file_model);
  const OutcomeDistribution via_param = pnr_response(d, param_model);
  CHECK((via_file.probs - via_param.probs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("sampling is deterministic and point masses are preserved") {
  OutcomeDistribution point;
  point.probs = Eigen::Vector3d(0.0, 0.0, 1.0);
  const SampleSet s = sample(point, 50, 7);
  for (int a = 0; a < 50; ++a) CHECK(s.samples(a, 0) == 2);

  const OutcomeDistribution c = click_distribution(StateSpec::thermal(1.0), 8, 1.0, 0.0);
  const SampleSet s1 = sample(c, 1000, 99);
  const SampleSet s2 = sample(c, 1000, 99);
  CHECK((s1.samples == s2.samples));
  const SampleSet s3 = sample(c, 1000, 100);
  CHECK(s1.samples != s3.samples);
}

TEST_CASE("sample mean of ideal PNR coherent data is unbiased") {
  const StateSpec spec = StateSpec::coherent(std::sqrt(2.0));
  const PhotonDistribution d = photon_distribution(spec, 60);
  const SampleSet s = sample({d.probs}, 100000, 1234);
  const double mean = s.samples.cast<double>().mean();
  CHECK(std::abs(mean - 2.0) < 6.0 * std::sqrt(2.0 / 100000.0));
}

TEST_CASE("Monte-Carlo click frequencies match analytic probabilities") {
  const OutcomeDistribution c = click_distribution(StateSpec::coherent(1.3), 8, 1.0, 0.0);
  const SampleSet s = sample(c, 1000000, 555);
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(9);
  for (long a = 0; a < s.samples.rows(); ++a) freq[s.samples(a, 0)] += 1e-6;
  CHECK(0.5 * (freq - c.probs).cwiseAbs().sum() < 5e-3);
}

TEST_CASE("pi moments from click moments") {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  CHECK(normal_ordered_pi_moments(zero, 8).cwiseAbs().maxCoeff() == 0.0);

  // deterministic single click: <c> = <c^2> = <c^3> = 1
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  const Eigen::VectorXd pi = normal_ordered_pi_moments(ones, 8);
  CHECK(pi[0] == doctest::Approx(1.0 / 8.0));
  CHECK(pi[1] == doctest::Approx(0.0));
  CHECK(pi[2] == doctest::Approx(0.0));

  // coherent states factorize: <:pi^k:> = q^k
  const double mu = 1.8;
  const OutcomeDistribution c =
      click_distribution(StateSpec::coherent(std::sqrt(mu)), 8, 1.0, 0.0);
  const Eigen::VectorXd pim = normal_ordered_pi_moments(click_moments(c, 3), 8);
  const double q = 1.0 - std::exp(-mu / 8.0);
  CHECK(pim[0] == doctest::Approx(q).epsilon(1e-10));
  CHECK(pim[1] == doctest::Approx(q * q).epsilon(1e-10));
  CHECK(pim[2] == doctest::Approx(q * q * q).epsilon(1e-9));

  CHECK_THROWS(normal_ordered_pi_moments(ones, 2));
}

TEST_CASE("click detector parameter validation") {
  const PhotonDistribution d = photon_distribution(StateSpec::coherent(1.0), 40);
  CHECK_THROWS(click_distribution(d, 0, 1.0, 0.0));
  CHECK_THROWS(click_distribution(d, 8, 1.5, 0.0));
  CHECK_THROWS(click_distribution(d, 8, 1.0, -0.1));
  CHECK_THROWS(DetectorModel::binned_pnr(1.0, 0.0, {1, 2}));
}

TEST_CASE("occupancy-recursion route matches the coherent closed form beyond 64 bins") {
  // bin counts beyond 64 bypass the alternating-sum expansion; coherent
  // states give an independent binomial oracle at any N
  const double mu = 1.0;
  const int n = 96;
  const StateSpec spec = StateSpec::coherent(std::sqrt(mu));
  const OutcomeDistribution c =
      click_distribution(photon_distribution(spec, adaptive_cutoff(spec)), n, 1.0, 0.0);
  const double q = 1.0 - std::exp(-mu / n);
  for (int k = 0; k <= 20; ++k) {
    const double expect = std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k) +
                                   k * std::log(q) + (n - k) * std::log1p(-q));
    CHECK(c.probs[k] == doctest::Approx(expect).epsilon(1e-9));
  }
  CHECK(c.probs.sum() == doctest::Approx(1.0).epsilon(1e-10));
}
