#include "qnc/states.hpp"

#include <cmath>
#include <stdexcept>

#include "qnc/special.hpp"

namespace qnc {

namespace {

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

double poisson_pmf(double mu, int m) {
  if (mu == 0.0) return m == 0 ? 1.0 : 0.0;
  return std::exp(m * std::log(mu) - mu - log_factorial(m));
}

double thermal_pmf(double nbar, int m) {
  if (nbar == 0.0) return m == 0 ? 1.0 : 0.0;
  return std::exp(m * std::log(nbar) - (m + 1) * std::log1p(nbar));
}

double squeezed_pmf(double r, int m) {
  if (m % 2 != 0) return 0.0;
  const double ar = std::abs(r);
  if (ar == 0.0) return m == 0 ? 1.0 : 0.0;
  const int t = m / 2;
  // p_{2t} = (2t)! / (2^t t!)^2 * tanh(r)^{2t} / cosh(r)
  return std::exp(log_factorial(2 * t) - 2.0 * t * std::log(2.0) - 2.0 * log_factorial(t) +
                  2.0 * t * std::log(std::tanh(ar)) - std::log(std::cosh(ar)));
}

double spats_pmf(double nbar, int m) {
  if (m == 0) return 0.0;
  if (nbar == 0.0) return m == 1 ? 1.0 : 0.0;
  // p_m = m nbar^{m-1} / (1+nbar)^{m+1}
  return std::exp(std::log(static_cast<double>(m)) + (m - 1) * std::log(nbar) -
                  (m + 1) * std::log1p(nbar));
}

} // namespace

StateSpec StateSpec::coherent(double alpha) {
  check_finite(alpha, "alpha");
  StateSpec s;
  s.family = StateFamily::Coherent;
  s.alpha1 = alpha;
  return s;
}

StateSpec StateSpec::mixed_coherent(double alpha1, double alpha2) {
  check_finite(alpha1, "alpha1");
  check_finite(alpha2, "alpha2");
  StateSpec s;
  s.family = StateFamily::MixedCoherent;
  s.alpha1 = alpha1;
  s.alpha2 = alpha2;
  return s;
}

StateSpec StateSpec::thermal(double nbar) {
  check_finite(nbar, "nbar");
  if (nbar < 0.0) throw std::invalid_argument("thermal: nbar must be >= 0");
  StateSpec s;
  s.family = StateFamily::Thermal;
  s.nbar = nbar;
  return s;
}

StateSpec StateSpec::squeezed_vacuum(double r) {
  check_finite(r, "r");
  StateSpec s;
  s.family = StateFamily::SqueezedVacuum;
  s.r = r;
  return s;
}

StateSpec StateSpec::spats(double nbar) {
  check_finite(nbar, "nbar");
  if (nbar < 0.0) throw std::invalid_argument("spats: nbar must be >= 0");
  StateSpec s;
  s.family = StateFamily::Spats;
  s.nbar = nbar;
  return s;
}

StateSpec StateSpec::lossy_fock(int n, double p_loss) {
  if (n < 1) throw std::invalid_argument("lossy_fock: n must be >= 1");
  if (!(p_loss >= 0.0 && p_loss <= 1.0))
    throw std::invalid_argument("lossy_fock: p_loss must lie in [0,1]");
  StateSpec s;
  s.family = StateFamily::LossyFock;
  s.fock_n = n;
  s.p_loss = p_loss;
  return s;
}

bool StateSpec::nonclassical() const {
  switch (family) {
    case StateFamily::Coherent:
    case StateFamily::MixedCoherent:
    case StateFamily::Thermal:
      return false;
    case StateFamily::SqueezedVacuum:
    case StateFamily::Spats:
    case StateFamily::LossyFock:
      return true;
  }
  return false;
}

std::string StateSpec::family_name() const {
  switch (family) {
    case StateFamily::Coherent: return "coherent";
    case StateFamily::MixedCoherent: return "mixed_coherent";
    case StateFamily::Thermal: return "thermal";
    case StateFamily::SqueezedVacuum: return "squeezed_vacuum";
    case StateFamily::Spats: return "spats";
    case StateFamily::LossyFock: return "lossy_fock";
  }
  return "?";
}

StateFamily family_from_name(const std::string& name) {
  if (name == "coherent") return StateFamily::Coherent;
  if (name == "mixed_coherent") return StateFamily::MixedCoherent;
  if (name == "thermal") return StateFamily::Thermal;
  if (name == "squeezed_vacuum") return StateFamily::SqueezedVacuum;
  if (name == "spats") return StateFamily::Spats;
  if (name == "lossy_fock") return StateFamily::LossyFock;
  throw std::invalid_argument("unknown state family: " + name);
}

PhotonDistribution photon_distribution(const StateSpec& spec, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("photon_distribution: cutoff must be >= 0");
  PhotonDistribution d;
  d.probs = Eigen::VectorXd::Zero(cutoff + 1);

  switch (spec.family) {
    case StateFamily::Coherent: {
      const double mu = spec.alpha1 * spec.alpha1;
      for (int m = 0; m <= cutoff; ++m) d.probs[m] = poisson_pmf(mu, m);
      break;
    }
    case StateFamily::MixedCoherent: {
      const double mu1 = spec.alpha1 * spec.alpha1;
      const double mu2 = spec.alpha2 * spec.alpha2;
      for (int m = 0; m <= cutoff; ++m)
        d.probs[m] = 0.5 * (poisson_pmf(mu1, m) + poisson_pmf(mu2, m));
      break;
    }
    case StateFamily::Thermal:
      for (int m = 0; m <= cutoff; ++m) d.probs[m] = thermal_pmf(spec.nbar, m);
      break;
    case StateFamily::SqueezedVacuum:
      for (int m = 0; m <= cutoff; m += 2) d.probs[m] = squeezed_pmf(spec.r, m);
      break;
    case StateFamily::Spats:
      for (int m = 1; m <= cutoff; ++m) d.probs[m] = spats_pmf(spec.nbar, m);
      break;
    case StateFamily::LossyFock: {
      if (spec.fock_n - 1 <= cutoff) d.probs[spec.fock_n - 1] = spec.p_loss;
      if (spec.fock_n <= cutoff) d.probs[spec.fock_n] = 1.0 - spec.p_loss;
      break;
    }
  }

  d.tail_mass = std::max(0.0, 1.0 - d.probs.sum());
  return d;
}

int adaptive_cutoff(const StateSpec& spec, int cap) {
  // Running partial sum of the pmf; stops once the remainder drops below 1e-10.
  double acc = 0.0;
  for (int c = 0; c <= cap; ++c) {
    double p = 0.0;
    switch (spec.family) {
      case StateFamily::Coherent: p = poisson_pmf(spec.alpha1 * spec.alpha1, c); break;
      case StateFamily::MixedCoherent:
        p = 0.5 * (poisson_pmf(spec.alpha1 * spec.alpha1, c) +
                   poisson_pmf(spec.alpha2 * spec.alpha2, c));
        break;
      case StateFamily::Thermal: p = thermal_pmf(spec.nbar, c); break;
      case StateFamily::SqueezedVacuum: p = squeezed_pmf(spec.r, c); break;
      case StateFamily::Spats: p = spats_pmf(spec.nbar, c); break;
      case StateFamily::LossyFock:
        if (c >= spec.fock_n) return std::min(cap, std::max(spec.fock_n, 1));
        p = 0.0;
        break;
    }
    acc += p;
    if (1.0 - acc < 1e-10) return c;
  }
  return cap;
}

double factorial_moment_gf(const StateSpec& spec, double z) {
  if (!(z >= -1.0 && z <= 1.0)) throw std::invalid_argument("factorial_moment_gf: need |z| <= 1");
  switch (spec.family) {
    case StateFamily::Coherent: {
      const double mu = spec.alpha1 * spec.alpha1;
      return std::exp(mu * (z - 1.0));
    }
    case StateFamily::MixedCoherent: {
      const double mu1 = spec.alpha1 * spec.alpha1;
      const double mu2 = spec.alpha2 * spec.alpha2;
      return 0.5 * (std::exp(mu1 * (z - 1.0)) + std::exp(mu2 * (z - 1.0)));
    }
    case StateFamily::Thermal:
      return 1.0 / (1.0 + spec.nbar * (1.0 - z));
    case StateFamily::SqueezedVacuum: {
      const double th = std::tanh(std::abs(spec.r));
      return 1.0 / (std::cosh(std::abs(spec.r)) * std::sqrt(1.0 - z * z * th * th));
    }
    case StateFamily::Spats: {
      const double d = 1.0 + spec.nbar * (1.0 - z);
      return z / (d * d);
    }
    case StateFamily::LossyFock:
      return (1.0 - spec.p_loss) * std::pow(z, spec.fock_n) +
             spec.p_loss * std::pow(z, spec.fock_n - 1);
  }
  return 0.0;
}

} // namespace qnc
