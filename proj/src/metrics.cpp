#include "qnc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qnc {

AccuracyReport accuracy_report(const std::vector<int>& predictions,
                               const std::vector<int>& labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("accuracy_report: size mismatch");
  if (labels.empty()) throw std::invalid_argument("accuracy_report: empty input");

  AccuracyReport rep;
  int correct_cl = 0, correct_ncl = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) {
      ++rep.n_classical;
      if (predictions[i] == 0) ++correct_cl;
    } else {
      ++rep.n_nonclassical;
      if (predictions[i] == 1) ++correct_ncl;
    }
  }
  if (rep.n_classical > 0) rep.classical = static_cast<double>(correct_cl) / rep.n_classical;
  if (rep.n_nonclassical > 0)
    rep.nonclassical = static_cast<double>(correct_ncl) / rep.n_nonclassical;
  rep.total = static_cast<double>(correct_cl + correct_ncl) / static_cast<double>(labels.size());
  return rep;
}

double TradeoffCurve::best_nonclassical_at(double min_classical) const {
  double best = 0.0;
  for (const auto& p : points)
    if (p.acc_classical >= min_classical) best = std::max(best, p.acc_nonclassical);
  return best;
}

void write_curve_csv(std::ostream& os, const std::vector<TradeoffCurve>& curves) {
  os << "name,bias,acc_classical,acc_nonclassical,value,stderr\n";
  for (const auto& c : curves)
    for (const auto& p : c.points)
      os << c.name << ',' << p.param << ',' << p.acc_classical << ',' << p.acc_nonclassical
         << ",,\n";
}

void write_values_csv(std::ostream& os, const std::vector<ValueRow>& rows) {
  os << "name,bias,acc_classical,acc_nonclassical,value,stderr\n";
  for (const auto& r : rows) os << r.name << ",,,," << r.value << ',' << r.stderr_ << '\n';
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length vectors of size >= 2");
  auto ranks = [](const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return x[i] < x[j]; });
    std::vector<double> r(n);
    size_t i = 0;
    while (i < n) {
      size_t j = i;
      while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

} // namespace qnc
