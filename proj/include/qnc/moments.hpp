#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "qnc/states.hpp"

namespace qnc {

/// Raw moments <n^k> and normal-ordered (falling-factorial) moments <:n^k:>
/// for k = 1..order. Standard-error vectors are filled by the empirical path
/// and empty for exact distributions.
struct MomentVector {
  Eigen::VectorXd raw;
  Eigen::VectorXd normal_ordered;
  Eigen::VectorXd raw_stderr;
  Eigen::VectorXd normal_stderr;

  int order() const { return static_cast<int>(raw.size()); }
};

struct TruncationError : std::runtime_error {
  double tail_mass;
  explicit TruncationError(double tail);
};

/// Exact moments by summation over the distribution.
/// Throws TruncationError if tail_mass >= 1e-8 (moments would be biased).
MomentVector moments(const PhotonDistribution& dist, int order);

/// Sample moments of one mode of an M x d outcome matrix, with standard
/// errors sqrt(unbiased variance / M). Requires M >= 2.
MomentVector empirical_moments(const Eigen::MatrixXi& samples, int mode, int order);

} // namespace qnc
