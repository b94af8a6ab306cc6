#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qnc {

/// Per-class prediction accuracies. A class absent from the labels has no
/// defined accuracy.
struct AccuracyReport {
  std::optional<double> classical;
  std::optional<double> nonclassical;
  double total = 0.0;
  int n_classical = 0;
  int n_nonclassical = 0;
};

/// predictions/labels: 0 classical, 1 nonclassical.
AccuracyReport accuracy_report(const std::vector<int>& predictions,
                               const std::vector<int>& labels);

struct TradeoffPoint {
  double param = 0.0; // bias or lambda
  double acc_classical = 0.0;
  double acc_nonclassical = 0.0;
  double acc_total = 0.0;
};

struct TradeoffCurve {
  std::string name;
  std::vector<TradeoffPoint> points;

  /// Best nonclassical accuracy among points whose classical accuracy is at
  /// least `min_classical`; 0 if none qualifies.
  double best_nonclassical_at(double min_classical) const;
};

/// Shared CSV schema: name,bias,acc_classical,acc_nonclassical,value,stderr.
/// Curve rows leave value/stderr blank; report rows leave accuracies blank.
void write_curve_csv(std::ostream& os, const std::vector<TradeoffCurve>& curves);

struct ValueRow {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
};

void write_values_csv(std::ostream& os, const std::vector<ValueRow>& rows);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

} // namespace qnc
