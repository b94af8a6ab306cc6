#include "qnc/moments.hpp"

#include <cmath>
#include <string>

#include "qnc/special.hpp"

namespace qnc {

TruncationError::TruncationError(double tail)
    : std::runtime_error("moments: tail mass " + std::to_string(tail) +
                         " exceeds 1e-8, moments would be biased"),
      tail_mass(tail) {}

MomentVector moments(const PhotonDistribution& dist, int order) {
  if (order < 1) throw std::invalid_argument("moments: order must be >= 1");
  if (dist.tail_mass >= 1e-8) throw TruncationError(dist.tail_mass);

  MomentVector mv;
  mv.raw = Eigen::VectorXd::Zero(order);
  mv.normal_ordered = Eigen::VectorXd::Zero(order);
  for (int m = 0; m <= dist.cutoff(); ++m) {
    const double p = dist.probs[m];
    if (p == 0.0) continue;
    const double md = static_cast<double>(m);
    double pw = 1.0;
    for (int k = 1; k <= order; ++k) {
      pw *= md;
      mv.raw[k - 1] += pw * p;
      mv.normal_ordered[k - 1] += falling_factorial(md, k) * p;
    }
  }
  return mv;
}

MomentVector empirical_moments(const Eigen::MatrixXi& samples, int mode, int order) {
  const int M = static_cast<int>(samples.rows());
  if (M < 2) throw std::invalid_argument("empirical_moments: need at least 2 samples");
  if (mode < 0 || mode >= samples.cols())
    throw std::invalid_argument("empirical_moments: mode out of range");
  if (order < 1) throw std::invalid_argument("empirical_moments: order must be >= 1");

  MomentVector mv;
  mv.raw = Eigen::VectorXd::Zero(order);
  mv.normal_ordered = Eigen::VectorXd::Zero(order);
  mv.raw_stderr = Eigen::VectorXd::Zero(order);
  mv.normal_stderr = Eigen::VectorXd::Zero(order);

  Eigen::VectorXd sum_pw = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sum_pw2 = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sum_ff = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sum_ff2 = Eigen::VectorXd::Zero(order);

  for (int a = 0; a < M; ++a) {
    const double x = static_cast<double>(samples(a, mode));
    double pw = 1.0;
    for (int k = 1; k <= order; ++k) {
      pw *= x;
      const double ff = falling_factorial(x, k);
      sum_pw[k - 1] += pw;
      sum_pw2[k - 1] += pw * pw;
      sum_ff[k - 1] += ff;
      sum_ff2[k - 1] += ff * ff;
    }
  }

  for (int k = 0; k < order; ++k) {
    const double mean_pw = sum_pw[k] / M;
    const double mean_ff = sum_ff[k] / M;
    mv.raw[k] = mean_pw;
    mv.normal_ordered[k] = mean_ff;
    // Unbiased sample variance; clamp tiny negative rounding residue.
    const double var_pw = std::max(0.0, (sum_pw2[k] - M * mean_pw * mean_pw) / (M - 1));
    const double var_ff = std::max(0.0, (sum_ff2[k] - M * mean_ff * mean_ff) / (M - 1));
    mv.raw_stderr[k] = std::sqrt(var_pw / M);
    mv.normal_stderr[k] = std::sqrt(var_ff / M);
  }
  return mv;
}

} // namespace qnc
