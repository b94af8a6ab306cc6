#include "qnc/special.hpp"

#include <cmath>
#include <stdexcept>

namespace qnc {

namespace {

// Lanczos g = 7, n = 9 coefficient set.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

} // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("log_gamma: argument must be positive");
  // Reflection keeps the series argument >= 0.5.
  if (x < 0.5) {
    const double pi = 3.14159265358979323846;
    return std::log(pi / std::sin(pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  return log_gamma(static_cast<double>(n) + 1.0);
}

double binomial_real(double n, double k) {
  if (k < 0.0 || k > n) throw std::invalid_argument("binomial_real: need 0 <= k <= n");
  if (k == 0.0 || k == n) return 1.0;
  return std::exp(log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0));
}

double falling_factorial(double m, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= m - static_cast<double>(i);
  return p;
}

} // namespace qnc
