#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qnc/detectors.hpp"
#include "qnc/mesh.hpp"

namespace qnc {

/// Truncated multimode Fock basis: either all tuples with total <= n_max or
/// one fixed-total sector. Mode count <= 10, occupations <= 63 (packed keys).
class FockBasis {
 public:
  static std::shared_ptr<const FockBasis> up_to(int modes, int n_max, size_t dim_cap = 2'000'000);
  static std::shared_ptr<const FockBasis> sector(int modes, int total, size_t dim_cap = 2'000'000);

  int modes() const { return modes_; }
  int max_total() const { return max_total_; }
  size_t size() const { return tuples_.rows(); }

  const Eigen::MatrixXi& tuples() const { return tuples_; }
  int occupation(size_t idx, int mode) const { return tuples_(static_cast<Eigen::Index>(idx), mode); }

  /// Index of a tuple; -1 if absent.
  long index_of(const Eigen::VectorXi& tuple) const;
  long index_of_packed(uint64_t key) const;

  static uint64_t pack(const Eigen::VectorXi& tuple);

 private:
  FockBasis() = default;
  static std::shared_ptr<const FockBasis> make(int modes, int total, bool exact_total,
                                               size_t dim_cap);
  void build_index();

  int modes_ = 0;
  int max_total_ = 0;
  Eigen::MatrixXi tuples_;
  std::unordered_map<uint64_t, long> index_;
};

/// Mixture of pure truncated states. Weights sum to 1; each component's
/// amplitude norm is 1 minus its declared truncation loss.
struct MultimodeState {
  struct Component {
    double weight = 1.0;
    std::shared_ptr<const FockBasis> basis;
    Eigen::VectorXcd amps;
    double truncation_loss = 0.0;
  };
  int d_x = 0;
  std::vector<Component> components;

  double total_truncation_loss() const;
};

MultimodeState product_coherent(const Eigen::VectorXcd& alphas, int n_max);
/// Per-mode squeezed vacua, each truncated at `local_cap` photons, as one
/// pure product component on the <= n_max basis.
MultimodeState product_squeezed(const Eigen::VectorXd& rs, int n_max, int local_cap = 10);
MultimodeState fock_product(const Eigen::VectorXi& ns);
/// Mixture of Fock products with the given weights (renormalized to sum 1).
MultimodeState fock_mixture(const std::vector<std::pair<double, Eigen::VectorXi>>& parts);

/// Apply each mesh element in plan order; photon-number sectors are preserved.
MultimodeState evolve(const MultimodeState& state, const MeshPlan& plan);

/// Joint photon-number probabilities aggregated over mixture components.
struct JointDistribution {
  int d_x = 0;
  Eigen::MatrixXi tuples; // rows are photon-number tuples
  Eigen::VectorXd probs;
  double truncation_loss = 0.0;

  double prob_of(const Eigen::VectorXi& tuple) const;

  /// Idempotent; library constructors call it so prob_of is safe to share
  /// across threads. Call it after assembling a table by hand.
  void build_index() const;

 private:
  mutable std::unordered_map<uint64_t, long> index_;
};

JointDistribution output_distribution(const MultimodeState& state);

/// Exact output of coherent inputs: means |(U alpha)_i|^2 per mode.
Eigen::VectorXd coherent_shortcut(const Eigen::VectorXcd& alphas, const Eigen::MatrixXcd& u);

/// Product-Poisson joint table over all tuples with total <= n_max.
JointDistribution joint_poisson_product(const Eigen::VectorXd& means, int n_max);

/// Two-stage sampling: draw a true photon tuple, then push each mode through
/// the detector POVM. Deterministic for a fixed seed.
SampleSet sample_multimode(const MultimodeState& state, const DetectorModel& detector,
                           int m_draws, uint64_t seed);

/// Observed joint outcome table under per-mode detection (small d_x only).
JointDistribution apply_detector_joint(const JointDistribution& joint,
                                       const DetectorModel& detector);

} // namespace qnc
