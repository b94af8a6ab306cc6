#pragma once

#include <Eigen/Dense>

#include "qnc/detectors.hpp"

namespace qnc {

/// First moments per mode followed by the upper-triangular second raw
/// moments <x_i x_j>, i <= j, in mode-major order. Dimension d + d(d+1)/2.
Eigen::VectorXd moment_features(const SampleSet& set);

/// Mean/std statistics frozen on the training split.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;

  static Standardizer fit(const Eigen::MatrixXd& rows);
  Eigen::VectorXd transform(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd transform_rows(const Eigen::MatrixXd& rows) const;
};

/// Linear SVM trained by deterministic full-batch subgradient descent on
/// hinge loss + (1/2C)||w||^2 with a 1/t learning-rate schedule.
struct SvmModel {
  Eigen::VectorXd w;
  double b = 0.0;
  double regularization_c = 1.0;

  int predict(const Eigen::VectorXd& v) const { return w.dot(v) + b >= 0.0 ? 1 : 0; }
  double projection(const Eigen::VectorXd& v) const { return w.dot(v) + b; }
};

/// labels: 0/1 (mapped internally to -1/+1). Requires both classes.
SvmModel svm_fit(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                 double c = 1.0, int epochs = 5000);

std::vector<int> svm_predict(const SvmModel& model, const Eigen::MatrixXd& features);

} // namespace qnc
