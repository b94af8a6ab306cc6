#include "qnc/detectors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qnc/special.hpp"

namespace qnc {

namespace {

void check_rates(double eta, double nu) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("detector: efficiency must lie in [0,1]");
  if (!(nu >= 0.0)) throw std::invalid_argument("detector: dark rate must be >= 0");
}

void check_bin_edges(const std::vector<int>& edges) {
  if (edges.empty() || edges.front() != 0)
    throw std::invalid_argument("detector: bin edges must start at 0");
  for (size_t i = 1; i < edges.size(); ++i)
    if (edges[i] <= edges[i - 1])
      throw std::invalid_argument("detector: bin edges must be strictly increasing");
}

// P(observed count = j | m true photons) under thinning eta + Poisson(nu) darks.
double thinned_dark_pmf(int j, int m, double eta, double nu) {
  double p = 0.0;
  for (int i = 0; i <= std::min(j, m); ++i) {
    double log_thin;
    if (eta == 1.0) {
      if (i != m) continue;
      log_thin = 0.0;
    } else if (eta == 0.0) {
      if (i != 0) continue;
      log_thin = 0.0;
    } else {
      log_thin = log_factorial(m) - log_factorial(i) - log_factorial(m - i) +
                 i * std::log(eta) + (m - i) * std::log1p(-eta);
    }
    const int darks = j - i;
    const double log_dark =
        (nu == 0.0) ? (darks == 0 ? 0.0 : -std::numeric_limits<double>::infinity())
                    : darks * std::log(nu) - nu - log_factorial(darks);
    if (std::isinf(log_dark)) continue;
    p += std::exp(log_thin + log_dark);
  }
  return p;
}

// c_k from the normal-ordered exponential values E[s] = <: e^{-s Gamma} :>, s = 0..N.
Eigen::VectorXd clicks_from_expvals(const Eigen::VectorXd& e_vals, int n_bins) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n_bins + 1);
  for (int k = 0; k <= n_bins; ++k) {
    double acc = 0.0;
    for (int l = 0; l <= k; ++l) {
      const double term = binomial_real(k, l) * e_vals[n_bins - k + l];
      acc += (l % 2 == 0) ? term : -term;
    }
    c[k] = binomial_real(n_bins, k) * acc;
  }
  // Alternating-sum residue can leave tiny negatives; clamp and renormalize.
  for (int k = 0; k <= n_bins; ++k) c[k] = std::max(0.0, c[k]);
  const double s = c.sum();
  if (std::abs(s - 1.0) > 1e-9)
    throw std::runtime_error("click_distribution: probabilities sum to " + std::to_string(s));
  return c / s;
}

void validate_click_params(int n_bins, double eta, double nu) {
  check_rates(eta, nu);
  if (n_bins < 1) throw std::invalid_argument("click_distribution: need at least 1 bin");
}

// Alternating sums lose all precision beyond this bin count; larger N goes
// through the per-photon occupancy recursion instead.
constexpr int kExpansionMaxBins = 64;

// P(k clicks | m photons): photons land uniformly over N bins and are
// detected with probability eta; every bin also clicks on a dark count
// independently with probability 1 - e^{-nu}. Stable for any N.
Eigen::MatrixXd click_povm_by_recursion(int m_max, int n_bins, double eta, double nu) {
  const double n = static_cast<double>(n_bins);
  Eigen::MatrixXd photon_clicks = Eigen::MatrixXd::Zero(m_max + 1, n_bins + 1);
  photon_clicks(0, 0) = 1.0;
  for (int m = 1; m <= m_max; ++m) {
    for (int k = 0; k <= std::min(m, n_bins); ++k) {
      const double stay = photon_clicks(m - 1, k) * (1.0 - eta + eta * k / n);
      const double grow =
          k >= 1 ? photon_clicks(m - 1, k - 1) * eta * (n - (k - 1)) / n : 0.0;
      photon_clicks(m, k) = stay + grow;
    }
  }
  const double dark = -std::expm1(-nu); // per-bin dark-click probability
  Eigen::MatrixXd povm = Eigen::MatrixXd::Zero(n_bins + 1, m_max + 1);
  for (int m = 0; m <= m_max; ++m)
    for (int j = 0; j <= std::min(m, n_bins); ++j) {
      const double pj = photon_clicks(m, j);
      if (pj == 0.0) continue;
      if (dark == 0.0) {
        povm(j, m) += pj;
        continue;
      }
      for (int extra = 0; extra + j <= n_bins; ++extra)
        povm(j + extra, m) += pj * binomial_real(n_bins - j, extra) *
                              std::pow(dark, extra) * std::pow(1.0 - dark, n_bins - j - extra);
    }
  return povm;
}

} // namespace

DetectorModel DetectorModel::ideal_pnr(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("ideal_pnr: cutoff must be >= 1");
  DetectorModel m;
  m.kind = DetectorKind::IdealPnr;
  m.cutoff = cutoff;
  return m;
}

DetectorModel DetectorModel::binned_pnr(double efficiency, double dark_rate,
                                        std::vector<int> bin_edges) {
  check_rates(efficiency, dark_rate);
  check_bin_edges(bin_edges);
  DetectorModel m;
  m.kind = DetectorKind::BinnedPnr;
  m.efficiency = efficiency;
  m.dark_rate = dark_rate;
  m.bin_edges = std::move(bin_edges);
  return m;
}

DetectorModel DetectorModel::click_multiplex(int bins, double efficiency, double dark_rate) {
  validate_click_params(bins, efficiency, dark_rate);
  DetectorModel m;
  m.kind = DetectorKind::ClickMultiplex;
  m.bins = bins;
  m.efficiency = efficiency;
  m.dark_rate = dark_rate;
  return m;
}

DetectorModel DetectorModel::povm_file(Eigen::MatrixXd matrix) {
  if (matrix.rows() < 1 || matrix.cols() < 1)
    throw std::invalid_argument("povm_file: empty matrix");
  if (matrix.minCoeff() < 0.0)
    throw std::invalid_argument("povm_file: matrix entries must be nonnegative");
  for (int m = 0; m < matrix.cols(); ++m) {
    const double s = matrix.col(m).sum();
    if (std::abs(s - 1.0) > 1e-9)
      throw std::invalid_argument("povm_file: column " + std::to_string(m) + " sums to " +
                                  std::to_string(s));
  }
  DetectorModel d;
  d.kind = DetectorKind::PovmFile;
  d.povm = std::move(matrix);
  d.cutoff = static_cast<int>(d.povm.cols()) - 1;
  return d;
}

int DetectorModel::outcome_count() const {
  switch (kind) {
    case DetectorKind::IdealPnr: return cutoff + 1;
    case DetectorKind::BinnedPnr: return static_cast<int>(bin_edges.size());
    case DetectorKind::ClickMultiplex: return bins + 1;
    case DetectorKind::PovmFile: return static_cast<int>(povm.rows());
  }
  return 0;
}

OutcomeDistribution click_distribution(const PhotonDistribution& dist, int bins,
                                       double efficiency, double dark_rate) {
  validate_click_params(bins, efficiency, dark_rate);
  if (dist.tail_mass >= 1e-8)
    throw std::invalid_argument("click_distribution: distribution tail mass too large");

  if (bins > kExpansionMaxBins) {
    const Eigen::MatrixXd povm =
        click_povm_by_recursion(dist.cutoff(), bins, efficiency, dark_rate);
    return {povm * dist.probs};
  }
  Eigen::VectorXd e_vals(bins + 1);
  for (int s = 0; s <= bins; ++s) {
    const double z = 1.0 - s * efficiency / bins;
    double acc = 0.0;
    for (int m = 0; m <= dist.cutoff(); ++m) acc += dist.probs[m] * std::pow(z, m);
    e_vals[s] = std::exp(-s * dark_rate) * acc;
  }
  return {clicks_from_expvals(e_vals, bins)};
}

OutcomeDistribution click_distribution(const StateSpec& spec, int bins, double efficiency,
                                       double dark_rate) {
  validate_click_params(bins, efficiency, dark_rate);
  if (bins > kExpansionMaxBins)
    return click_distribution(photon_distribution(spec, adaptive_cutoff(spec)), bins,
                              efficiency, dark_rate);
  Eigen::VectorXd e_vals(bins + 1);
  for (int s = 0; s <= bins; ++s) {
    const double z = 1.0 - s * efficiency / bins;
    e_vals[s] = std::exp(-s * dark_rate) * factorial_moment_gf(spec, z);
  }
  return {clicks_from_expvals(e_vals, bins)};
}

Eigen::MatrixXd povm_matrix(const DetectorModel& model, int cutoff) {
  const int n_out = model.outcome_count();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_out, cutoff + 1);
  switch (model.kind) {
    case DetectorKind::IdealPnr:
      for (int m = 0; m <= cutoff; ++m) p(std::min(m, model.cutoff), m) = 1.0;
      break;
    case DetectorKind::BinnedPnr: {
      const int top_edge = model.bin_edges.back();
      for (int m = 0; m <= cutoff; ++m) {
        double below = 0.0;
        for (int j = 0; j < top_edge; ++j) {
          const double pj = thinned_dark_pmf(j, m, model.efficiency, model.dark_rate);
          // locate the bin containing count j
          int b = 0;
          while (b + 1 < n_out && j >= model.bin_edges[b + 1]) ++b;
          p(b, m) += pj;
          below += pj;
        }
        p(n_out - 1, m) += std::max(0.0, 1.0 - below); // open top bin
      }
      break;
    }
    case DetectorKind::ClickMultiplex: {
      if (model.bins > kExpansionMaxBins) {
        p = click_povm_by_recursion(cutoff, model.bins, model.efficiency, model.dark_rate);
        break;
      }
      for (int m = 0; m <= cutoff; ++m) {
        Eigen::VectorXd e_vals(model.bins + 1);
        for (int s = 0; s <= model.bins; ++s) {
          const double z = 1.0 - s * model.efficiency / model.bins;
          e_vals[s] = std::exp(-s * model.dark_rate) * std::pow(z, m);
        }
        p.col(m) = clicks_from_expvals(e_vals, model.bins);
      }
      break;
    }
    case DetectorKind::PovmFile:
      // columns are per-photon-number responses, so a smaller cutoff slices
      if (cutoff > model.cutoff)
        throw std::invalid_argument("povm_matrix: loaded POVM covers photon numbers only up to " +
                                    std::to_string(model.cutoff));
      p = model.povm.leftCols(cutoff + 1);
      break;
  }
  return p;
}

OutcomeDistribution pnr_response(const PhotonDistribution& dist, const DetectorModel& model) {
  OutcomeDistribution out;
  switch (model.kind) {
    case DetectorKind::IdealPnr: {
      const int n_out = model.cutoff + 1;
      out.probs = Eigen::VectorXd::Zero(n_out);
      for (int m = 0; m <= dist.cutoff(); ++m) out.probs[std::min(m, model.cutoff)] += dist.probs[m];
      out.probs[n_out - 1] += dist.tail_mass;
      break;
    }
    case DetectorKind::BinnedPnr: {
      // With unit efficiency every photon registers, so any number beyond the
      // cutoff lands in the open top bin and the tail is handled exactly.
      if (model.efficiency < 1.0 && dist.tail_mass >= 1e-8)
        throw std::invalid_argument("pnr_response: tail mass too large for eta < 1");
      const Eigen::MatrixXd p = povm_matrix(model, dist.cutoff());
      out.probs = p * dist.probs;
      out.probs[out.probs.size() - 1] += dist.tail_mass;
      break;
    }
    case DetectorKind::PovmFile: {
      if (dist.cutoff() != model.cutoff)
        throw std::invalid_argument("pnr_response: POVM cutoff " + std::to_string(model.cutoff) +
                                    " does not match distribution cutoff " +
                                    std::to_string(dist.cutoff()));
      out.probs = model.povm * dist.probs;
      break;
    }
    case DetectorKind::ClickMultiplex:
      throw std::invalid_argument("pnr_response: use click_distribution for multiplex detectors");
  }
  return out;
}

OutcomeDistribution detector_response(const PhotonDistribution& dist, const DetectorModel& model) {
  if (model.kind == DetectorKind::ClickMultiplex)
    return click_distribution(dist, model.bins, model.efficiency, model.dark_rate);
  return pnr_response(dist, model);
}

int draw_from_cdf(const Eigen::VectorXd& cdf, double u) {
  const double target = u * cdf[cdf.size() - 1];
  int lo = 0, hi = static_cast<int>(cdf.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (cdf[mid] <= target) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

SampleSet sample(const OutcomeDistribution& outcomes, int m_draws, uint64_t seed) {
  if (m_draws < 1) throw std::invalid_argument("sample: need at least 1 draw");
  Eigen::VectorXd cdf(outcomes.probs.size());
  double acc = 0.0;
  for (int i = 0; i < outcomes.probs.size(); ++i) {
    acc += outcomes.probs[i];
    cdf[i] = acc;
  }
  SampleSet set;
  set.samples.resize(m_draws, 1);
  set.seed = seed;
  SplitMix64 rng(seed);
  for (int a = 0; a < m_draws; ++a) set.samples(a, 0) = draw_from_cdf(cdf, rng.uniform());
  return set;
}

Eigen::VectorXd click_moments(const OutcomeDistribution& clicks, int order) {
  Eigen::VectorXd mom = Eigen::VectorXd::Zero(order);
  for (int k = 0; k <= clicks.max_outcome(); ++k) {
    double pw = 1.0;
    for (int j = 0; j < order; ++j) {
      pw *= k;
      mom[j] += pw * clicks.probs[k];
    }
  }
  return mom;
}

Eigen::VectorXd normal_ordered_pi_moments(const Eigen::VectorXd& click_moms, int bins) {
  const int order = static_cast<int>(click_moms.size());
  if (order < 1 || order > 3)
    throw std::invalid_argument("normal_ordered_pi_moments: order must be 1..3");
  if (order >= 3 && bins < 3)
    throw std::invalid_argument("normal_ordered_pi_moments: third moment needs N >= 3");
  if (bins < order)
    throw std::invalid_argument("normal_ordered_pi_moments: N too small for requested order");

  const double n = static_cast<double>(bins);
  Eigen::VectorXd pi(order);
  pi[0] = click_moms[0] / n;
  if (order >= 2) pi[1] = (click_moms[1] - click_moms[0]) / (n * (n - 1.0));
  if (order >= 3)
    pi[2] = (click_moms[2] - 3.0 * click_moms[1] + 2.0 * click_moms[0]) /
            (n * (n - 1.0) * (n - 2.0));
  return pi;
}

} // namespace qnc
