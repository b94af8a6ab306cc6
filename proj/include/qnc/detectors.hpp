#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qnc/rng.hpp"
#include "qnc/states.hpp"

namespace qnc {

enum class DetectorKind {
  IdealPnr,      // outcomes 0..C, top outcome absorbs the tail
  BinnedPnr,     // binomial thinning + Poisson dark counts, then binned
  ClickMultiplex, // N click bins, outcomes 0..N
  PovmFile,      // explicit outcome-by-photon-number matrix
};

struct DetectorModel {
  DetectorKind kind = DetectorKind::IdealPnr;
  int cutoff = 29;              // IdealPnr
  double efficiency = 1.0;      // BinnedPnr / ClickMultiplex
  double dark_rate = 0.0;       // BinnedPnr / ClickMultiplex
  std::vector<int> bin_edges;   // BinnedPnr lower edges, last bin open-ended
  int bins = 8;                 // ClickMultiplex N
  Eigen::MatrixXd povm;         // PovmFile: outcomes x (cutoff+1)

  static DetectorModel ideal_pnr(int cutoff);
  static DetectorModel binned_pnr(double efficiency, double dark_rate,
                                  std::vector<int> bin_edges = {0, 1, 2, 3, 4});
  static DetectorModel click_multiplex(int bins, double efficiency, double dark_rate);
  static DetectorModel povm_file(Eigen::MatrixXd matrix);

  int outcome_count() const;
};

/// Probabilities over observed outcomes; sums to 1 within 1e-9.
struct OutcomeDistribution {
  Eigen::VectorXd probs;
  int max_outcome() const { return static_cast<int>(probs.size()) - 1; }
};

/// M x d_x integer outcomes for one labeled state.
struct SampleSet {
  Eigen::MatrixXi samples;
  int label = 0; // 0 classical, 1 nonclassical
  StateSpec meta;
  std::vector<double> pattern; // per-mode amplitude multipliers (multimode)
  std::string state_id;
  uint64_t seed = 0;
};

/// Click-counting statistics of an N-bin multiplexed threshold detector,
/// computed by binomial expansion over normal-ordered exponentials:
///   c_k = C(N,k) sum_l C(k,l) (-1)^l E(N-k+l),
///   E(s) = e^{-s nu} sum_m p_m (1 - s eta/N)^m.
/// Exact alternating sums are well-conditioned for N <= 64 (enforced).
OutcomeDistribution click_distribution(const PhotonDistribution& dist, int bins,
                                       double efficiency, double dark_rate);

/// Same, but with <z^n> supplied in closed form (no photon-number cutoff).
OutcomeDistribution click_distribution(const StateSpec& spec, int bins, double efficiency,
                                       double dark_rate);

/// Outcome statistics of PNR-type detectors (IdealPnr, BinnedPnr, PovmFile).
OutcomeDistribution pnr_response(const PhotonDistribution& dist, const DetectorModel& model);

/// Full response for any detector kind.
OutcomeDistribution detector_response(const PhotonDistribution& dist, const DetectorModel& model);

/// Column-stochastic outcome-by-photon-number matrix P(outcome | m), m = 0..cutoff.
Eigen::MatrixXd povm_matrix(const DetectorModel& model, int cutoff);

/// M i.i.d. draws by inverse CDF; deterministic for a fixed seed.
SampleSet sample(const OutcomeDistribution& outcomes, int m_draws, uint64_t seed);

/// Single draw from a cumulative distribution (strictly increasing prefix sums).
int draw_from_cdf(const Eigen::VectorXd& cdf, double u);

/// Click moments <c>, <c^2>, ..., <c^order> of a click distribution.
Eigen::VectorXd click_moments(const OutcomeDistribution& clicks, int order);

/// Normal-ordered moments of the click POVM pi = 1 - pi_0:
///   <:pi:>   = <c> / N
///   <:pi^2:> = (<c^2> - <c>) / (N(N-1))
///   <:pi^3:> = (<c^3> - 3<c^2> + 2<c>) / (N(N-1)(N-2))
/// Requires N >= 3 when the third moment is requested (order = 3).
Eigen::VectorXd normal_ordered_pi_moments(const Eigen::VectorXd& click_moms, int bins);

} // namespace qnc
