#include "qnc/witnesses.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qnc/special.hpp"
#include "qnc/sym_eigen.hpp"

namespace qnc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPsdTol = 1e-8;

Eigen::MatrixXd mode_features(const Eigen::MatrixXi& samples, int mode,
                              const std::function<double(double, int)>& f, int n_feat) {
  const int m = static_cast<int>(samples.rows());
  Eigen::MatrixXd g(m, n_feat);
  for (int a = 0; a < m; ++a) {
    const double x = static_cast<double>(samples(a, mode));
    for (int k = 0; k < n_feat; ++k) g(a, k) = f(x, k);
  }
  return g;
}

} // namespace

std::pair<double, double> delta_method(
    const Eigen::MatrixXd& features, const std::function<double(const Eigen::VectorXd&)>& h,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad) {
  const int m = static_cast<int>(features.rows());
  if (m < 2) throw std::invalid_argument("delta_method: need at least 2 samples");
  const Eigen::VectorXd mean = features.colwise().mean();
  const Eigen::MatrixXd centered = features.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(m - 1);
  const Eigen::VectorXd g = grad(mean);
  const double var = std::max(0.0, (g.transpose() * cov * g).value() / static_cast<double>(m));
  return {h(mean), std::sqrt(var)};
}

// ---- Mandel Q -----------------------------------------------------------------

WitnessReport mandel_q(const MomentVector& mom) {
  WitnessReport rep;
  rep.name = "mandel_q";
  if (mom.order() < 2) throw std::invalid_argument("mandel_q: need moments up to order 2");
  const double n1 = mom.raw[0], n2 = mom.raw[1];
  if (n1 <= 0.0) {
    rep.not_applicable = true;
    return rep;
  }
  rep.value = (n2 - n1 * n1) / n1 - 1.0;
  return rep;
}

WitnessReport mandel_q_empirical(const Eigen::MatrixXi& samples, int mode) {
  WitnessReport rep;
  rep.name = "mandel_q";
  const Eigen::MatrixXd g = mode_features(
      samples, mode, [](double x, int k) { return k == 0 ? x : x * x; }, 2);
  const double n1 = g.col(0).mean();
  if (n1 <= 0.0) {
    rep.not_applicable = true;
    return rep;
  }
  auto [value, se] = delta_method(
      g, [](const Eigen::VectorXd& m) { return (m[1] - m[0] * m[0]) / m[0] - 1.0; },
      [](const Eigen::VectorXd& m) {
        return Eigen::Vector2d(-m[1] / (m[0] * m[0]) - 1.0, 1.0 / m[0]);
      });
  rep.value = value;
  rep.stderr_ = se;
  return rep;
}

// ---- Q3 -----------------------------------------------------------------------

WitnessReport q3_pnr(const MomentVector& mom) {
  WitnessReport rep;
  rep.name = "q3";
  if (mom.order() < 3) throw std::invalid_argument("q3_pnr: need moments up to order 3");
  const double f1 = mom.normal_ordered[0], f2 = mom.normal_ordered[1],
               f3 = mom.normal_ordered[2];
  rep.value = f1 * f3 - f2 * f2;
  return rep;
}

WitnessReport q3_empirical(const Eigen::MatrixXi& samples, int mode) {
  WitnessReport rep;
  rep.name = "q3";
  const Eigen::MatrixXd g = mode_features(
      samples, mode, [](double x, int k) { return falling_factorial(x, k + 1); }, 3);
  auto [value, se] = delta_method(
      g, [](const Eigen::VectorXd& f) { return f[0] * f[2] - f[1] * f[1]; },
      [](const Eigen::VectorXd& f) { return Eigen::Vector3d(f[2], -2.0 * f[1], f[0]); });
  rep.value = value;
  rep.stderr_ = se;
  return rep;
}

// ---- Q_B and Q_B3 ---------------------------------------------------------------

namespace {

double qb_value(const Eigen::VectorXd& c, double n) {
  return c[1] - (n - 1.0) / n * c[0] * c[0] - c[0];
}

double qb3_value(const Eigen::VectorXd& c, double n) {
  return c[2] * c[0] - (n - 2.0) / (n - 1.0) * c[1] * c[1] -
         (n + 1.0) / (n - 1.0) * c[1] * c[0] + n / (n - 1.0) * c[0] * c[0];
}

} // namespace

WitnessReport qb(const Eigen::VectorXd& click_moms, int bins) {
  if (bins < 2) throw std::invalid_argument("qb: need N >= 2");
  if (click_moms.size() < 2) throw std::invalid_argument("qb: need click moments up to order 2");
  WitnessReport rep;
  rep.name = "qb";
  rep.value = qb_value(click_moms, static_cast<double>(bins));
  return rep;
}

WitnessReport qb_empirical(const Eigen::MatrixXi& samples, int bins, int mode) {
  if (bins < 2) throw std::invalid_argument("qb: need N >= 2");
  const double n = static_cast<double>(bins);
  const Eigen::MatrixXd g = mode_features(
      samples, mode, [](double x, int k) { return k == 0 ? x : x * x; }, 2);
  WitnessReport rep;
  rep.name = "qb";
  auto [value, se] = delta_method(
      g, [n](const Eigen::VectorXd& c) { return qb_value(c, n); },
      [n](const Eigen::VectorXd& c) {
        return Eigen::Vector2d(-2.0 * (n - 1.0) / n * c[0] - 1.0, 1.0);
      });
  rep.value = value;
  rep.stderr_ = se;
  return rep;
}

WitnessReport qb3(const Eigen::VectorXd& click_moms, int bins) {
  if (bins < 3) throw std::invalid_argument("qb3: need N >= 3");
  if (click_moms.size() < 3) throw std::invalid_argument("qb3: need click moments up to order 3");
  WitnessReport rep;
  rep.name = "qb3";
  rep.value = qb3_value(click_moms, static_cast<double>(bins));
  return rep;
}

WitnessReport qb3_empirical(const Eigen::MatrixXi& samples, int bins, int mode) {
  if (bins < 3) throw std::invalid_argument("qb3: need N >= 3");
  const double n = static_cast<double>(bins);
  const Eigen::MatrixXd g = mode_features(
      samples, mode,
      [](double x, int k) { return k == 0 ? x : (k == 1 ? x * x : x * x * x); }, 3);
  WitnessReport rep;
  rep.name = "qb3";
  auto [value, se] = delta_method(
      g, [n](const Eigen::VectorXd& c) { return qb3_value(c, n); },
      [n](const Eigen::VectorXd& c) {
        return Eigen::Vector3d(
            c[2] - (n + 1.0) / (n - 1.0) * c[1] + 2.0 * n / (n - 1.0) * c[0],
            -2.0 * (n - 2.0) / (n - 1.0) * c[1] - (n + 1.0) / (n - 1.0) * c[0], c[0]);
      });
  rep.value = value;
  rep.stderr_ = se;
  return rep;
}

// ---- Klyshko ratio ---------------------------------------------------------------

WitnessReport klyshko(const Eigen::VectorXd& probs, int k) {
  const int c = static_cast<int>(probs.size()) - 1;
  if (k < 1 || k > c - 1) throw std::invalid_argument("klyshko: k out of range");
  WitnessReport rep;
  rep.name = "klyshko";
  rep.threshold = 1.0;
  const double num = (k + 1.0) * probs[k - 1] * probs[k + 1];
  const double den = k * probs[k] * probs[k];
  if (den == 0.0) {
    if (num == 0.0) rep.not_applicable = true;
    else rep.value = kInf;
    return rep;
  }
  rep.value = num / den;
  return rep;
}

WitnessReport klyshko_min(const Eigen::VectorXd& probs) {
  const int c = static_cast<int>(probs.size()) - 1;
  if (c < 2) throw std::invalid_argument("klyshko_min: need outcomes up to at least 2");
  WitnessReport best;
  best.name = "klyshko";
  best.threshold = 1.0;
  best.not_applicable = true;
  for (int k = 1; k <= c - 1; ++k) {
    const WitnessReport r = klyshko(probs, k);
    if (r.not_applicable) continue;
    if (best.not_applicable || r.value < best.value) {
      best.value = r.value;
      best.not_applicable = false;
    }
  }
  return best;
}

WitnessReport klyshko_min_empirical(const Eigen::MatrixXi& samples, int n_outcomes, int mode) {
  const Eigen::VectorXd freq = outcome_frequencies(samples, n_outcomes, mode);
  WitnessReport rep = klyshko_min(freq);
  if (rep.not_applicable || std::isinf(rep.value)) return rep;
  // Standard error at the most violated k via the multinomial delta method.
  const int c = n_outcomes - 1;
  int k_best = -1;
  for (int k = 1; k <= c - 1; ++k) {
    const WitnessReport r = klyshko(freq, k);
    if (!r.not_applicable && r.value == rep.value) {
      k_best = k;
      break;
    }
  }
  if (k_best < 0) return rep;
  const Eigen::MatrixXd g = mode_features(
      samples, mode,
      [k_best](double x, int i) { return x == static_cast<double>(k_best - 1 + i) ? 1.0 : 0.0; },
      3);
  const double kk = static_cast<double>(k_best);
  auto [value, se] = delta_method(
      g,
      [kk](const Eigen::VectorXd& p) { return (kk + 1.0) * p[0] * p[2] / (kk * p[1] * p[1]); },
      [kk](const Eigen::VectorXd& p) {
        const double d = kk * p[1] * p[1];
        return Eigen::Vector3d((kk + 1.0) * p[2] / d,
                               -2.0 * (kk + 1.0) * p[0] * p[2] / (d * p[1]),
                               (kk + 1.0) * p[0] / d);
      });
  rep.value = value;
  rep.stderr_ = se;
  return rep;
}

// ---- generalized Klyshko matrices --------------------------------------------------

MomentMatrix klyshko_matrix_pnr(const Eigen::VectorXd& probs, IndexKind kind) {
  const int c = static_cast<int>(probs.size()) - 1;
  if (c < 1) throw std::invalid_argument("klyshko_matrix_pnr: need outcomes up to C >= 1");
  MomentMatrix m;
  m.index_kind = kind;
  m.source = MatrixSource::PnrProbabilities;
  const int dim = (kind == IndexKind::Integer) ? c / 2 + 1 : (c + 1) / 2;
  m.entries.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double ji = (kind == IndexKind::Integer) ? i : i + 0.5;
      const double jj = (kind == IndexKind::Integer) ? j : j + 0.5;
      const int order = static_cast<int>(ji + jj); // integral in both cases
      m.entries(i, j) = binomial_real(ji + jj, ji) * probs[order];
    }
  return m;
}

MomentMatrix klyshko_matrix_click(const Eigen::VectorXd& clicks, int bins, IndexKind kind) {
  if (static_cast<int>(clicks.size()) != bins + 1)
    throw std::invalid_argument("klyshko_matrix_click: need click probabilities 0..N");
  if (bins < 2) throw std::invalid_argument("klyshko_matrix_click: need N >= 2");
  MomentMatrix m;
  m.index_kind = kind;
  m.source = MatrixSource::ClickProbabilities;
  const int dim = (kind == IndexKind::Integer) ? bins / 2 + 1 : (bins + 1) / 2;
  m.entries.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double ji = (kind == IndexKind::Integer) ? i : i + 0.5;
      const double jj = (kind == IndexKind::Integer) ? j : j + 0.5;
      const int order = static_cast<int>(ji + jj);
      m.entries(i, j) = clicks[order] / binomial_real(static_cast<double>(bins), ji + jj);
    }
  return m;
}

MomentMatrix moment_matrix_multimode(const Eigen::VectorXd& first,
                                     const Eigen::MatrixXd& second_raw) {
  const int d = static_cast<int>(first.size());
  if (second_raw.rows() != d || second_raw.cols() != d)
    throw std::invalid_argument("moment_matrix_multimode: dimension mismatch");
  MomentMatrix m;
  m.source = MatrixSource::MultimodeMoments;
  m.entries.resize(d + 1, d + 1);
  m.entries(0, 0) = 1.0;
  for (int i = 0; i < d; ++i) {
    m.entries(0, i + 1) = first[i];
    m.entries(i + 1, 0) = first[i];
    for (int j = 0; j < d; ++j) {
      // normal ordering subtracts <n_i> on the diagonal only
      m.entries(i + 1, j + 1) = second_raw(i, j) - (i == j ? first[i] : 0.0);
    }
  }
  m.entries = 0.5 * (m.entries + m.entries.transpose()).eval();
  return m;
}

MomentMatrix moment_matrix_multimode_exact(const JointDistribution& joint) {
  const int d = joint.d_x;
  const double mass = joint.probs.sum();
  if (mass <= 0.0) throw std::invalid_argument("moment_matrix_multimode_exact: empty table");
  Eigen::VectorXd first = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
  for (long r = 0; r < joint.tuples.rows(); ++r) {
    const double p = joint.probs[r] / mass;
    for (int i = 0; i < d; ++i) {
      first[i] += p * joint.tuples(r, i);
      for (int j = 0; j < d; ++j) second(i, j) += p * joint.tuples(r, i) * joint.tuples(r, j);
    }
  }
  return moment_matrix_multimode(first, second);
}

Eigen::VectorXd superindex_probs(const JointDistribution& joint, int base, long* collisions) {
  if (base < 2) throw std::invalid_argument("superindex_probs: base must be >= 2");
  long max_c = 0;
  std::vector<long> codes(joint.tuples.rows());
  for (long r = 0; r < joint.tuples.rows(); ++r) {
    long c = 0, place = 1;
    for (int i = 0; i < joint.d_x; ++i) {
      c += static_cast<long>(joint.tuples(r, i)) * place;
      place *= base;
    }
    codes[r] = c;
    max_c = std::max(max_c, c);
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(max_c + 1);
  std::vector<int> occupancy(max_c + 1, 0);
  long n_coll = 0;
  for (long r = 0; r < joint.tuples.rows(); ++r) {
    if (occupancy[codes[r]]++ > 0) ++n_coll;
    p[codes[r]] += joint.probs[r];
  }
  if (collisions) *collisions = n_coll;
  return p;
}

namespace {

// Operator digit vectors for the multimode matrix: per-mode exponents
// j_i <= floor(C/2) (integer) or j_i - 1/2 <= ceil(C/2) - 1 (half-integer),
// ordered by ascending superindex. The row/column index IS the superindex
// ordering; entries are read off the joint table by componentwise digit sums
// with a product of per-mode binomials, so superindex digit carries never
// corrupt a probability lookup (they are still counted and flagged).
struct SuperAssembly {
  MomentMatrix matrix;
  Eigen::MatrixXd entry_probs; // p at each entry (for stderr propagation)
  Eigen::MatrixXd entry_coeff;
};

SuperAssembly assemble_multimode_klyshko(
    int d_x, int base, IndexKind kind, int dimension_cap, bool allow_truncate,
    const std::function<double(const Eigen::VectorXi&)>& prob_of) {
  if (base < 1) throw std::invalid_argument("multimode_klyshko_matrix: base must be >= 1");
  const int digit_max = (kind == IndexKind::Integer) ? base / 2 : (base + 1) / 2 - 1;

  std::vector<std::pair<long, Eigen::VectorXi>> ops;
  Eigen::VectorXi digits = Eigen::VectorXi::Zero(d_x);
  while (true) {
    long super = 0, place = 1;
    for (int i = 0; i < d_x; ++i) {
      super += digits[i] * place;
      place *= base;
    }
    ops.emplace_back(super, digits);
    int pos = 0;
    while (pos < d_x && ++digits[pos] > digit_max) digits[pos++] = 0;
    if (pos == d_x) break;
  }
  std::sort(ops.begin(), ops.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const long natural_dim = static_cast<long>(ops.size());
  if (natural_dim > dimension_cap && !allow_truncate)
    throw std::invalid_argument("multimode_klyshko_matrix: dimension " +
                                std::to_string(natural_dim) + " exceeds cap " +
                                std::to_string(dimension_cap));
  const int dim = static_cast<int>(std::min<long>(natural_dim, dimension_cap));

  SuperAssembly out;
  out.matrix.index_kind = kind;
  out.matrix.source = MatrixSource::MultimodeProbabilities;
  out.matrix.entries.resize(dim, dim);
  out.entry_probs.resize(dim, dim);
  out.entry_coeff.resize(dim, dim);
  const double half = (kind == IndexKind::Integer) ? 0.0 : 0.5;
  Eigen::VectorXi sum(d_x);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      double coeff = 1.0;
      bool carry = false;
      for (int i = 0; i < d_x; ++i) {
        const double ji = ops[a].second[i] + half;
        const double ki = ops[b].second[i] + half;
        sum[i] = static_cast<int>(ji + ki);
        coeff *= binomial_real(ji + ki, ji);
        if (sum[i] >= base) carry = true;
      }
      if (carry) ++out.matrix.collisions;
      const double p = prob_of(sum);
      out.matrix.entries(a, b) = coeff * p;
      out.entry_probs(a, b) = p;
      out.entry_coeff(a, b) = coeff;
    }
  return out;
}

} // namespace

MomentMatrix multimode_klyshko_matrix(const JointDistribution& joint, int base, IndexKind kind,
                                      int dimension_cap, bool allow_truncate) {
  return assemble_multimode_klyshko(
             joint.d_x, base, kind, dimension_cap, allow_truncate,
             [&](const Eigen::VectorXi& t) { return joint.prob_of(t); })
      .matrix;
}

WitnessReport min_eig_report(const std::string& name, const MomentMatrix& m,
                             const Eigen::MatrixXd* entry_stderr) {
  WitnessReport rep;
  rep.name = name;
  const SymEigenResult eig = jacobi_eigen(m.entries);
  rep.value = eig.values[0];
  double stat_bound = 0.0;
  if (entry_stderr) {
    const Eigen::VectorXd v = eig.vectors.col(0).cwiseAbs();
    stat_bound = (v.transpose() * (*entry_stderr) * v).value();
    rep.stderr_ = stat_bound;
  }
  rep.tol = std::max(kPsdTol, 3.0 * stat_bound);
  return rep;
}

// ---- empirical matrix witnesses -----------------------------------------------------

Eigen::VectorXd outcome_frequencies(const Eigen::MatrixXi& samples, int n_outcomes, int mode) {
  if (samples.rows() < 1) throw std::invalid_argument("outcome_frequencies: empty sample set");
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(n_outcomes);
  for (long a = 0; a < samples.rows(); ++a) {
    const int x = samples(a, mode);
    if (x < 0 || x >= n_outcomes)
      throw std::invalid_argument("outcome_frequencies: sample outside outcome range");
    freq[x] += 1.0;
  }
  return freq / static_cast<double>(samples.rows());
}

namespace {

Eigen::MatrixXd frequency_stderr(const Eigen::VectorXd& freq, double m_draws,
                                 const std::function<double(int, int)>& scale, int dim,
                                 IndexKind kind) {
  Eigen::MatrixXd se(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const int order = (kind == IndexKind::Integer) ? i + j : i + j + 1;
      const double p = order < freq.size() ? freq[order] : 0.0;
      se(i, j) = scale(i, j) * std::sqrt(std::max(0.0, p * (1.0 - p)) / m_draws);
    }
  return se;
}

} // namespace

WitnessReport gen_klyshko_pnr_empirical(const Eigen::MatrixXi& samples, int n_outcomes,
                                        IndexKind kind, int mode) {
  const Eigen::VectorXd freq = outcome_frequencies(samples, n_outcomes, mode);
  const MomentMatrix m = klyshko_matrix_pnr(freq, kind);
  const int dim = static_cast<int>(m.entries.rows());
  const Eigen::MatrixXd se = frequency_stderr(
      freq, static_cast<double>(samples.rows()),
      [&](int i, int j) {
        const double ji = (kind == IndexKind::Integer) ? i : i + 0.5;
        const double jj = (kind == IndexKind::Integer) ? j : j + 0.5;
        return binomial_real(ji + jj, ji);
      },
      dim, kind);
  return min_eig_report(kind == IndexKind::Integer ? "gen_klyshko_int" : "gen_klyshko_half", m,
                        &se);
}

WitnessReport gen_klyshko_click_empirical(const Eigen::MatrixXi& samples, int bins,
                                          IndexKind kind, int mode) {
  const Eigen::VectorXd freq = outcome_frequencies(samples, bins + 1, mode);
  const MomentMatrix m = klyshko_matrix_click(freq, bins, kind);
  const int dim = static_cast<int>(m.entries.rows());
  const Eigen::MatrixXd se = frequency_stderr(
      freq, static_cast<double>(samples.rows()),
      [&](int i, int j) {
        const double ji = (kind == IndexKind::Integer) ? i : i + 0.5;
        const double jj = (kind == IndexKind::Integer) ? j : j + 0.5;
        return 1.0 / binomial_real(static_cast<double>(bins), ji + jj);
      },
      dim, kind);
  return min_eig_report(
      kind == IndexKind::Integer ? "gen_klyshko_click_int" : "gen_klyshko_click_half", m, &se);
}

WitnessReport moment_matrix_empirical(const Eigen::MatrixXi& samples) {
  const int m_draws = static_cast<int>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  if (m_draws < 2) throw std::invalid_argument("moment_matrix_empirical: need M >= 2");
  const Eigen::MatrixXd x = samples.cast<double>();
  const Eigen::VectorXd first = x.colwise().mean();
  const Eigen::MatrixXd second = x.transpose() * x / static_cast<double>(m_draws);
  const MomentMatrix mm = moment_matrix_multimode(first, second);

  // Entry-wise standard errors of the estimated matrix.
  Eigen::MatrixXd se = Eigen::MatrixXd::Zero(d + 1, d + 1);
  auto column_se = [&](const Eigen::VectorXd& col) {
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / (m_draws - 1);
    return std::sqrt(var / m_draws);
  };
  for (int i = 0; i < d; ++i) {
    se(0, i + 1) = se(i + 1, 0) = column_se(x.col(i));
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXd prod = x.col(i).cwiseProduct(x.col(j));
      if (i == j) prod -= x.col(i);
      se(i + 1, j + 1) = column_se(prod);
    }
  }
  return min_eig_report("moment_matrix", mm, &se);
}

WitnessReport multimode_klyshko_empirical(const Eigen::MatrixXi& samples, int base,
                                          IndexKind kind, int dimension_cap) {
  const int m_draws = static_cast<int>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  if (m_draws < 1) throw std::invalid_argument("multimode_klyshko_empirical: empty sample set");

  // Relative tuple frequencies, no smoothing.
  std::unordered_map<uint64_t, double> freq;
  for (int a = 0; a < m_draws; ++a) {
    Eigen::VectorXi row = samples.row(a);
    freq[FockBasis::pack(row)] += 1.0 / m_draws;
  }
  const SuperAssembly asm_ = assemble_multimode_klyshko(
      d, base, kind, dimension_cap, true, [&](const Eigen::VectorXi& t) {
        auto it = freq.find(FockBasis::pack(t));
        return it == freq.end() ? 0.0 : it->second;
      });

  Eigen::MatrixXd se(asm_.matrix.entries.rows(), asm_.matrix.entries.cols());
  for (int i = 0; i < se.rows(); ++i)
    for (int j = 0; j < se.cols(); ++j) {
      const double p = asm_.entry_probs(i, j);
      se(i, j) = asm_.entry_coeff(i, j) * std::sqrt(std::max(0.0, p * (1.0 - p)) / m_draws);
    }
  return min_eig_report("mm_gen_klyshko", asm_.matrix, &se);
}

// ---- bias sweep -----------------------------------------------------------------------

TradeoffCurve sweep_bias(const std::string& name, const std::vector<WitnessReport>& reports,
                         const std::vector<int>& labels, const std::vector<double>& bias_grid) {
  if (reports.size() != labels.size())
    throw std::invalid_argument("sweep_bias: reports/labels size mismatch");
  bool has_cl = false, has_ncl = false;
  for (int l : labels) (l == 0 ? has_cl : has_ncl) = true;
  if (!has_cl || !has_ncl)
    throw std::invalid_argument("sweep_bias: need at least one state per class");

  TradeoffCurve curve;
  curve.name = name;
  for (double b : bias_grid) {
    std::vector<int> pred(reports.size());
    for (size_t i = 0; i < reports.size(); ++i)
      pred[i] = reports[i].nonclassical_at_bias(b) ? 1 : 0;
    const AccuracyReport acc = accuracy_report(pred, labels);
    curve.points.push_back(
        {b, acc.classical.value_or(0.0), acc.nonclassical.value_or(0.0), acc.total});
  }
  return curve;
}

} // namespace qnc
