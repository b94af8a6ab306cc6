#include <doctest.h>

#include <cmath>

#include "qnc/special.hpp"

using namespace qnc;

TEST_CASE("log_gamma matches integer factorials") {
  double fact = 1.0;
  for (int n = 1; n <= 20; ++n) {
    fact *= n;
    CHECK(log_gamma(n + 1.0) == doctest::Approx(std::log(fact)).epsilon(1e-13));
  }
}

TEST_CASE("log_gamma relative error below 1e-12 on (0, 200]") {
  for (double x = 0.05; x <= 200.0; x += 0.173) {
    const double ref = std::lgamma(x);
    const double got = log_gamma(x);
    const double scale = std::max(1.0, std::abs(ref));
    CHECK(std::abs(got - ref) / scale < 1e-12);
  }
}

TEST_CASE("log_gamma half-integer values") {
  const double pi = 3.14159265358979323846;
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(pi)).epsilon(1e-14));
  // Gamma(3/2) = sqrt(pi)/2
  CHECK(log_gamma(1.5) == doctest::Approx(std::log(std::sqrt(pi) / 2.0)).epsilon(1e-13));
}

TEST_CASE("binomial_real on integers and half-integers") {
  CHECK(binomial_real(6, 2) == doctest::Approx(15.0).epsilon(1e-13));
  CHECK(binomial_real(10, 0) == 1.0);
  // C(1, 1/2) = 1/Gamma(3/2)^2 = 4/pi
  const double pi = 3.14159265358979323846;
  CHECK(binomial_real(1.0, 0.5) == doctest::Approx(4.0 / pi).epsilon(1e-12));
  CHECK_THROWS(binomial_real(1.0, 2.0));
}

TEST_CASE("falling_factorial") {
  CHECK(falling_factorial(5.0, 3) == 60.0);
  CHECK(falling_factorial(2.0, 3) == 0.0);
  CHECK(falling_factorial(7.5, 0) == 1.0);
}

TEST_CASE("log_gamma rejects nonpositive arguments") {
  CHECK_THROWS(log_gamma(0.0));
  CHECK_THROWS(log_gamma(-1.5));
}
