#include "qnc/svm.hpp"

#include <cmath>
#include <stdexcept>

namespace qnc {

Eigen::VectorXd moment_features(const SampleSet& set) {
  const int m = static_cast<int>(set.samples.rows());
  const int d = static_cast<int>(set.samples.cols());
  if (m < 1) throw std::invalid_argument("moment_features: empty sample set");
  const Eigen::MatrixXd x = set.samples.cast<double>();
  Eigen::VectorXd v(d + d * (d + 1) / 2);
  int idx = 0;
  for (int i = 0; i < d; ++i) v[idx++] = x.col(i).mean();
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) v[idx++] = x.col(i).cwiseProduct(x.col(j)).mean();
  return v;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& rows) {
  Standardizer st;
  st.mean = rows.colwise().mean();
  const Eigen::MatrixXd centered = rows.rowwise() - st.mean.transpose();
  st.std = (centered.array().square().colwise().mean()).sqrt();
  for (int i = 0; i < st.std.size(); ++i)
    if (st.std[i] < 1e-12) st.std[i] = 1.0; // constant feature
  return st;
}

Eigen::VectorXd Standardizer::transform(const Eigen::VectorXd& v) const {
  return (v - mean).cwiseQuotient(std);
}

Eigen::MatrixXd Standardizer::transform_rows(const Eigen::MatrixXd& rows) const {
  return (rows.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
}

SvmModel svm_fit(const Eigen::MatrixXd& features, const std::vector<int>& labels, double c,
                 int epochs) {
  const int n = static_cast<int>(features.rows());
  if (n < 2 || static_cast<size_t>(n) != labels.size())
    throw std::invalid_argument("svm_fit: bad training set");
  bool has0 = false, has1 = false;
  for (int l : labels) (l == 0 ? has0 : has1) = true;
  if (!has0 || !has1) throw std::invalid_argument("svm_fit: need both classes");
  if (c <= 0.0) throw std::invalid_argument("svm_fit: C must be positive");

  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = labels[i] == 1 ? 1.0 : -1.0;

  // Objective (1/n) sum hinge + (lambda/2)||w||^2 with lambda = 1/(C n).
  const double lambda = 1.0 / (c * static_cast<double>(n));
  SvmModel model;
  model.regularization_c = c;
  model.w = Eigen::VectorXd::Zero(features.cols());
  model.b = 0.0;

  for (int t = 1; t <= epochs; ++t) {
    const double lr = 1.0 / (lambda * static_cast<double>(t));
    Eigen::VectorXd gw = lambda * model.w;
    double gb = 0.0;
    for (int i = 0; i < n; ++i) {
      const double margin = y[i] * (model.w.dot(features.row(i)) + model.b);
      if (margin < 1.0) {
        gw -= (y[i] / n) * features.row(i).transpose();
        gb -= y[i] / n;
      }
    }
    model.w -= lr * gw;
    model.b -= lr * gb;
  }
  return model;
}

std::vector<int> svm_predict(const SvmModel& model, const Eigen::MatrixXd& features) {
  std::vector<int> pred(features.rows());
  for (int i = 0; i < features.rows(); ++i) pred[i] = model.predict(features.row(i));
  return pred;
}

} // namespace qnc
