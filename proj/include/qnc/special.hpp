#pragma once

namespace qnc {

/// log Gamma(x) for x > 0, Lanczos approximation (g=7, 9 terms).
/// Relative error below 1e-12 on (0, 200].
double log_gamma(double x);

/// log(n!) via log_gamma; n >= 0.
double log_factorial(int n);

/// Binomial coefficient C(n, k) for real arguments via the gamma function.
/// Requires n >= k >= 0 (and n - k > -1 so all gammas are finite).
double binomial_real(double n, double k);

/// Falling factorial m (m-1) ... (m-k+1) as a double; k >= 0.
double falling_factorial(double m, int k);

} // namespace qnc
