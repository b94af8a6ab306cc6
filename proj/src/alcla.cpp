#include "qnc/alcla.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qnc/rng.hpp"

namespace qnc {

namespace {

constexpr double kEulerMascheroni = 0.5772156649;
constexpr double kYClamp = 1e-7;

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

} // namespace

int Monomial::total_order() const {
  int t = 0;
  for (const Factor& f : factors) t += f.order * f.exponent;
  return t;
}

DecoderBasis DecoderBasis::build(int d_x, int total_order) {
  if (d_x < 1 || total_order < 1)
    throw std::invalid_argument("DecoderBasis: need d_x >= 1 and L >= 1");
  DecoderBasis basis;
  basis.d_x = d_x;
  basis.total_order = total_order;
  const int L = total_order;

  // Factor universe (mode, order), lexicographic.
  std::vector<std::pair<int, int>> universe;
  for (int i = 0; i < d_x; ++i)
    for (int m = 1; m <= L; ++m) universe.emplace_back(i, m);

  std::vector<Monomial> terms;
  const int u = static_cast<int>(universe.size());
  // Up to three distinct factors; exponents chosen by nested search under
  // the budget sum_j j*m <= L.
  for (int a = 0; a < u; ++a) {
    const auto [ia, ma] = universe[a];
    for (int ja = 1; ja * ma <= L; ++ja) {
      Monomial m1;
      m1.factors = {{ia, ma, ja}};
      terms.push_back(m1);
      for (int b = a + 1; b < u; ++b) {
        const auto [ib, mb] = universe[b];
        for (int jb = 1; ja * ma + jb * mb <= L; ++jb) {
          Monomial m2;
          m2.factors = {{ia, ma, ja}, {ib, mb, jb}};
          terms.push_back(m2);
          for (int c = b + 1; c < u; ++c) {
            const auto [ic, mc] = universe[c];
            for (int jc = 1; ja * ma + jb * mb + jc * mc <= L; ++jc) {
              Monomial m3;
              m3.factors = {{ia, ma, ja}, {ib, mb, jb}, {ic, mc, jc}};
              terms.push_back(m3);
            }
          }
        }
      }
    }
  }

  std::sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) {
    if (a.total_order() != b.total_order()) return a.total_order() < b.total_order();
    if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size();
    auto key = [](const Monomial& m) {
      std::vector<int> k;
      for (const auto& f : m.factors) {
        k.push_back(f.mode);
        k.push_back(f.order);
        k.push_back(f.exponent);
      }
      return k;
    };
    return key(a) < key(b);
  });
  terms.push_back(Monomial{}); // constant term last
  basis.terms = std::move(terms);
  return basis;
}

long decoder_term_count(int d_x, int total_order) {
  return static_cast<long>(DecoderBasis::build(d_x, total_order).terms.size());
}

double parameter_bound(int d_x, int total_order) {
  const double L = static_cast<double>(total_order);
  const double lt = L * std::log(L) + L * kEulerMascheroni;
  const double d = static_cast<double>(d_x);
  return 1.0 + d * lt / 36.0 * (35.0 + d * d * lt * lt);
}

bool parameter_bound_applicable(int total_order) {
  // The derivation replaces sum_m floor(L/m) by L ln L + L gamma; the bound
  // only follows where that replacement is an upper bound.
  const double L = static_cast<double>(total_order);
  const double lt = L * std::log(L) + L * kEulerMascheroni;
  long s = 0;
  for (int m = 1; m <= total_order; ++m) s += total_order / m;
  return lt >= static_cast<double>(s);
}

AlClaParams AlClaParams::init(const AlClaConfig& config, const DecoderBasis& basis) {
  SplitMix64 rng(hash_mix(config.seed, 0x9a1ca));
  AlClaParams p;
  p.k_mats.resize(std::max(0, config.total_order - 1));
  for (auto& k : p.k_mats) {
    // identity plus symmetric noise: theta and K multiply, so a K started
    // near zero leaves that encoder path stuck at a gradient saddle
    k.resize(config.d_x, config.d_x);
    for (int i = 0; i < config.d_x; ++i)
      for (int j = 0; j < config.d_x; ++j)
        k(i, j) = (i == j ? 1.0 : 0.0) + (rng.uniform() - 0.5);
    if (config.upper_triangular_k)
      for (int i = 0; i < config.d_x; ++i)
        for (int j = 0; j < i; ++j) k(i, j) = 0.0;
  }
  p.theta.resize(basis.size());
  for (int t = 0; t < basis.size(); ++t) p.theta[t] = 0.2 * (rng.uniform() - 0.5);
  p.theta_amplify = 1.0;
  return p;
}

EncoderOutputs encode(const Eigen::MatrixXd& samples, const AlClaParams& params,
                      const AlClaConfig& config) {
  const int L = config.total_order;
  if (static_cast<int>(params.k_mats.size()) != L - 1)
    throw std::invalid_argument("encode: params have wrong number of encoder layers");
  if (samples.cols() != config.d_x)
    throw std::invalid_argument("encode: sample mode count does not match d_x");
  const double m = static_cast<double>(samples.rows());
  const double norm = config.normalize_by_m ? 1.0 / m : 1.0;

  EncoderOutputs out;
  out.s.resize(L);
  out.x.resize(L);
  out.s[0] = samples;
  out.x[0] = norm * samples.colwise().sum();
  for (int i = 1; i < L; ++i) {
    const Eigen::MatrixXd& k = params.k_mats[i - 1];
    if (k.rows() != config.d_x || k.cols() != config.d_x)
      throw std::invalid_argument("encode: K matrix shape mismatch");
    out.s[i] = samples.cwiseProduct(out.s[i - 1] * k.transpose());
    out.x[i] = norm * out.s[i].colwise().sum();
  }
  return out;
}

double decoder_value(const DecoderBasis& basis, const Eigen::VectorXd& theta,
                     const std::vector<Eigen::VectorXd>& x) {
  if (theta.size() != basis.size())
    throw std::invalid_argument("decoder_value: theta size mismatch");
  double f = 0.0;
  for (int t = 0; t < basis.size(); ++t) {
    double mono = 1.0;
    for (const auto& fac : basis.terms[t].factors)
      mono *= std::pow(x[fac.order - 1][fac.mode], fac.exponent);
    f += theta[t] * mono;
  }
  return f;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ForwardResult forward(const Eigen::MatrixXd& samples, const AlClaParams& params,
                      const DecoderBasis& basis, const AlClaConfig& config) {
  const EncoderOutputs enc = encode(samples, params, config);
  ForwardResult r;
  r.f = decoder_value(basis, params.theta, enc.x);
  r.y = 1.0 - sigmoid(params.theta_amplify * r.f);
  return r;
}

double loss(double y, double label, const AlClaParams& params, const AlClaConfig& config) {
  const double yc = std::clamp(y, kYClamp, 1.0 - kYClamp);
  double l = -label * std::log(yc) - (1.0 - label) * std::log(1.0 - yc);
  l += config.lambda * (1.0 - label) * std::abs(label - y);
  if (config.lambda_k > 0.0)
    for (const auto& k : params.k_mats) l += config.lambda_k * k.cwiseAbs().sum();
  return l;
}

double batch_loss(const std::vector<Eigen::MatrixXd>& states, const std::vector<double>& labels,
                  const AlClaParams& params, const DecoderBasis& basis,
                  const AlClaConfig& config) {
  if (states.empty() || states.size() != labels.size())
    throw std::invalid_argument("batch_loss: bad batch");
  double acc = 0.0;
  for (size_t i = 0; i < states.size(); ++i) {
    const ForwardResult r = forward(states[i], params, basis, config);
    const double yc = std::clamp(r.y, kYClamp, 1.0 - kYClamp);
    acc += -labels[i] * std::log(yc) - (1.0 - labels[i]) * std::log(1.0 - yc) +
           config.lambda * (1.0 - labels[i]) * std::abs(labels[i] - r.y);
  }
  acc /= static_cast<double>(states.size());
  if (config.lambda_k > 0.0)
    for (const auto& k : params.k_mats) acc += config.lambda_k * k.cwiseAbs().sum();
  return acc;
}

AlClaGradients gradients(const std::vector<Eigen::MatrixXd>& states,
                         const std::vector<double>& labels, const AlClaParams& params,
                         const DecoderBasis& basis, const AlClaConfig& config) {
  if (states.empty() || states.size() != labels.size())
    throw std::invalid_argument("gradients: bad batch");
  const int L = config.total_order;
  const int d = config.d_x;

  AlClaGradients g;
  g.k_mats.assign(params.k_mats.size(), Eigen::MatrixXd::Zero(d, d));
  g.theta = Eigen::VectorXd::Zero(params.theta.size());
  g.theta_amplify = 0.0;

  const double inv_n = 1.0 / static_cast<double>(states.size());
  for (size_t st = 0; st < states.size(); ++st) {
    const Eigen::MatrixXd& xm = states[st];
    const double label = labels[st];
    const EncoderOutputs enc = encode(xm, params, config);
    const double f = decoder_value(basis, params.theta, enc.x);
    const double z = params.theta_amplify * f;
    const double sig = sigmoid(z);
    const double y = 1.0 - sig;

    double dl_dy = 0.0;
    if (y > kYClamp && y < 1.0 - kYClamp)
      dl_dy = -label / y + (1.0 - label) / (1.0 - y);
    dl_dy += config.lambda * (1.0 - label) * sign0(y - label);
    const double dy_dz = -sig * (1.0 - sig);
    const double dl_dz = dl_dy * dy_dz;
    const double g_f = dl_dz * params.theta_amplify;
    g.theta_amplify += inv_n * dl_dz * f;

    // decoder: theta gradients and df/dx
    std::vector<Eigen::VectorXd> dfdx(L, Eigen::VectorXd::Zero(d));
    for (int t = 0; t < basis.size(); ++t) {
      const auto& facs = basis.terms[t].factors;
      double mono = 1.0;
      for (const auto& fac : facs) mono *= std::pow(enc.x[fac.order - 1][fac.mode], fac.exponent);
      g.theta[t] += inv_n * g_f * mono;
      for (size_t fi = 0; fi < facs.size(); ++fi) {
        double part = static_cast<double>(facs[fi].exponent) *
                      std::pow(enc.x[facs[fi].order - 1][facs[fi].mode], facs[fi].exponent - 1);
        for (size_t fj = 0; fj < facs.size(); ++fj) {
          if (fj == fi) continue;
          part *= std::pow(enc.x[facs[fj].order - 1][facs[fj].mode], facs[fj].exponent);
        }
        dfdx[facs[fi].order - 1][facs[fi].mode] += params.theta[t] * part;
      }
    }

    // encoder backward pass
    const double norm =
        config.normalize_by_m ? 1.0 / static_cast<double>(xm.rows()) : 1.0;
    Eigen::MatrixXd d_s =
        norm * Eigen::VectorXd::Ones(xm.rows()) * (g_f * dfdx[L - 1]).transpose();
    for (int i = L - 1; i >= 1; --i) {
      const Eigen::MatrixXd p = xm.cwiseProduct(d_s);
      g.k_mats[i - 1] += inv_n * (p.transpose() * enc.s[i - 1]);
      if (i >= 2)
        d_s = p * params.k_mats[i - 1] +
              norm * Eigen::VectorXd::Ones(xm.rows()) * (g_f * dfdx[i - 1]).transpose();
    }
  }

  // L1 subgradient of the sparsity penalty (sign, 0 at 0).
  if (config.lambda_k > 0.0)
    for (size_t i = 0; i < params.k_mats.size(); ++i)
      g.k_mats[i] += config.lambda_k * params.k_mats[i].unaryExpr([](double v) {
        return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
      });
  return g;
}

namespace {

struct AdamState {
  std::vector<Eigen::MatrixXd> mk, vk;
  Eigen::VectorXd mt, vt;
  double ma = 0.0, va = 0.0;
  long t = 0;
};

void adam_step(AlClaParams& params, const AlClaGradients& g, AdamState& st,
               const AlClaConfig& config, double lr) {
  ++st.t;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(st.t));
  auto update = [&](double& p, double grad, double& m, double& v) {
    m = config.beta1 * m + (1.0 - config.beta1) * grad;
    v = config.beta2 * v + (1.0 - config.beta2) * grad * grad;
    p -= lr * (m / bc1) / (std::sqrt(v / bc2) + config.adam_eps);
  };
  for (size_t i = 0; i < params.k_mats.size(); ++i)
    for (int r = 0; r < params.k_mats[i].rows(); ++r)
      for (int c = 0; c < params.k_mats[i].cols(); ++c)
        update(params.k_mats[i](r, c), g.k_mats[i](r, c), st.mk[i](r, c), st.vk[i](r, c));
  for (int t = 0; t < params.theta.size(); ++t)
    update(params.theta[t], g.theta[t], st.mt[t], st.vt[t]);
  update(params.theta_amplify, g.theta_amplify, st.ma, st.va);
}

void clip_params(AlClaParams& params, const AlClaConfig& config) {
  for (auto& k : params.k_mats) {
    k = k.cwiseMax(-config.k_clip).cwiseMin(config.k_clip);
    if (config.upper_triangular_k)
      for (int i = 0; i < k.rows(); ++i)
        for (int j = 0; j < i; ++j) k(i, j) = 0.0;
  }
  params.theta = params.theta.cwiseMax(-config.theta_clip).cwiseMin(config.theta_clip);
  params.theta_amplify = std::clamp(params.theta_amplify, config.amplify_lo, config.amplify_hi);
  assert(params.theta.cwiseAbs().maxCoeff() <= config.theta_clip);
  assert(params.theta_amplify >= config.amplify_lo && params.theta_amplify <= config.amplify_hi);
  for ([[maybe_unused]] const auto& k : params.k_mats)
    assert(k.cwiseAbs().maxCoeff() <= config.k_clip);
}

AccuracyReport split_accuracy(const std::vector<Eigen::MatrixXd>& states,
                              const std::vector<double>& labels,
                              const std::vector<int>& indices, const AlClaParams& params,
                              const DecoderBasis& basis, const AlClaConfig& config) {
  std::vector<int> pred, truth;
  pred.reserve(indices.size());
  truth.reserve(indices.size());
  for (int i : indices) {
    const ForwardResult r = forward(states[i], params, basis, config);
    pred.push_back(r.y > 0.5 ? 1 : 0); // tie classified classical
    truth.push_back(labels[i] > 0.5 ? 1 : 0);
  }
  return accuracy_report(pred, truth);
}

} // namespace

TrainResult train(const std::vector<SampleSet>& dataset, const AlClaConfig& config) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  bool has_cl = false, has_ncl = false;
  for (const auto& s : dataset) (s.label == 0 ? has_cl : has_ncl) = true;
  if (!has_cl || !has_ncl)
    throw std::invalid_argument("train: dataset must contain both classes");

  std::vector<Eigen::MatrixXd> states;
  std::vector<double> labels;
  states.reserve(dataset.size());
  for (const auto& s : dataset) {
    if (s.samples.cols() != config.d_x)
      throw std::invalid_argument("train: dataset mode count does not match config.d_x");
    states.push_back(s.samples.cast<double>());
    labels.push_back(static_cast<double>(s.label));
  }

  // Seeded shuffle for the 80/20 split.
  std::vector<int> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 shuffle_rng(hash_mix(config.seed, 0x5117));
  for (size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[shuffle_rng.next() % i]);
  const size_t n_train =
      std::max<size_t>(1, static_cast<size_t>(std::round(config.train_fraction * order.size())));
  TrainResult result;
  result.train_indices.assign(order.begin(), order.begin() + n_train);
  result.test_indices.assign(order.begin() + n_train, order.end());

  result.basis = DecoderBasis::build(config.d_x, config.total_order);
  AlClaParams params = AlClaParams::init(config, result.basis);

  std::vector<Eigen::MatrixXd> train_states;
  std::vector<double> train_labels;
  for (int i : result.train_indices) {
    train_states.push_back(states[i]);
    train_labels.push_back(labels[i]);
  }

  AdamState adam;
  adam.mk.assign(params.k_mats.size(), Eigen::MatrixXd::Zero(config.d_x, config.d_x));
  adam.vk = adam.mk;
  adam.mt = Eigen::VectorXd::Zero(params.theta.size());
  adam.vt = adam.mt;

  double lr = config.lr;
  double best_train_acc = -1.0;
  int epochs_since_improvement = 0;

  AlClaParams best_params = params;
  int best_epoch = -1;
  double prev_train = -1.0, prev_test = -1.0;

  result.history.reserve(config.epochs);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const AlClaGradients g =
        gradients(train_states, train_labels, params, result.basis, config);
    adam_step(params, g, adam, config, lr);
    clip_params(params, config);

    HistoryRow row;
    row.epoch = epoch;
    row.lr = lr;
    row.loss = batch_loss(train_states, train_labels, params, result.basis, config);
    row.train = split_accuracy(states, labels, result.train_indices, params, result.basis, config);
    if (!result.test_indices.empty())
      row.test = split_accuracy(states, labels, result.test_indices, params, result.basis, config);
    result.history.push_back(row);

    if (config.plateau_scheduler) {
      if (row.train.total > best_train_acc + 1e-12) {
        best_train_acc = row.train.total;
        epochs_since_improvement = 0;
      } else if (++epochs_since_improvement >= config.patience) {
        lr = std::max(config.min_lr, 0.5 * lr);
        epochs_since_improvement = 0;
      }
    } else {
      // Best epoch: one split's accuracy increased while the other did not
      // decrease; keep the last epoch satisfying the conjunction.
      const double tr = row.train.total;
      const double te = result.test_indices.empty() ? tr : row.test.total;
      if (prev_train >= 0.0) {
        const bool improved = (tr > prev_train && te >= prev_test) ||
                              (te > prev_test && tr >= prev_train);
        if (improved) {
          best_params = params;
          best_epoch = epoch;
        }
      } else {
        best_params = params;
        best_epoch = epoch;
      }
      prev_train = tr;
      prev_test = te;
    }
  }

  if (!config.plateau_scheduler && best_epoch > 0) {
    result.params = best_params;
    result.best_epoch = best_epoch;
  } else {
    result.params = params;
  }
  return result;
}

std::vector<ForwardResult> predict(const std::vector<SampleSet>& dataset,
                                   const AlClaParams& params, const DecoderBasis& basis,
                                   const AlClaConfig& config) {
  std::vector<ForwardResult> out;
  out.reserve(dataset.size());
  for (const auto& s : dataset)
    out.push_back(forward(s.samples.cast<double>(), params, basis, config));
  return out;
}

// ---- decision-rule extraction ------------------------------------------------------

int RuleTerm::degree() const {
  int d = 0;
  for (const auto& [sym, exp] : factors) d += static_cast<int>(sym.modes.size()) * exp;
  return d;
}

namespace {

using MomentPoly = std::map<std::vector<int>, double>; // sorted mode multiset -> coeff

// x^(m)_mode as a linear combination of order-m moments.
MomentPoly expand_encoder_output(const AlClaParams& params, int order, int mode) {
  MomentPoly poly;
  if (order == 1) {
    poly[{mode}] = 1.0;
    return poly;
  }
  // chains mode -> eta_1 -> ... -> eta_{order-1} through K^(order)..K^(2)
  struct Frame {
    int node;
    double weight;
    std::vector<int> modes;
  };
  std::vector<Frame> stack{{mode, 1.0, {mode}}};
  for (int level = order; level >= 2; --level) {
    const Eigen::MatrixXd& k = params.k_mats[level - 2];
    std::vector<Frame> next;
    for (const Frame& fr : stack) {
      for (int eta = 0; eta < k.cols(); ++eta) {
        const double w = fr.weight * k(fr.node, eta);
        if (w == 0.0) continue;
        Frame nf{eta, w, fr.modes};
        nf.modes.push_back(eta);
        next.push_back(std::move(nf));
      }
    }
    stack = std::move(next);
  }
  for (Frame& fr : stack) {
    std::sort(fr.modes.begin(), fr.modes.end());
    poly[fr.modes] += fr.weight;
  }
  return poly;
}

// product key: sorted list of moment multisets (with multiplicity)
using ProductKey = std::vector<std::vector<int>>;
using RulePoly = std::map<ProductKey, double>;

RulePoly poly_multiply(const RulePoly& a, const MomentPoly& b) {
  RulePoly out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) {
      ProductKey key = ka;
      key.push_back(kb);
      std::sort(key.begin(), key.end());
      out[key] += va * vb;
    }
  return out;
}

} // namespace

DecisionRule extract_rule(const AlClaParams& params, const DecoderBasis& basis) {
  RulePoly total;
  for (int t = 0; t < basis.size(); ++t) {
    const double theta = params.theta[t];
    if (theta == 0.0 && !basis.terms[t].factors.empty()) continue;
    RulePoly term{{ProductKey{}, theta}};
    for (const auto& fac : basis.terms[t].factors) {
      const MomentPoly expansion = expand_encoder_output(params, fac.order, fac.mode);
      for (int e = 0; e < fac.exponent; ++e) term = poly_multiply(term, expansion);
    }
    for (const auto& [key, coeff] : term) total[key] += coeff;
  }

  DecisionRule rule;
  rule.d_x = basis.d_x;
  for (const auto& [key, coeff] : total) {
    RuleTerm rt;
    rt.coeff = coeff;
    // collapse repeated symbols into exponents
    std::map<std::vector<int>, int> counts;
    for (const auto& sym : key) counts[sym] += 1;
    for (const auto& [modes, exp] : counts) rt.factors.push_back({MomentSymbol{modes}, exp});
    rule.terms.push_back(std::move(rt));
  }
  std::sort(rule.terms.begin(), rule.terms.end(), [](const RuleTerm& a, const RuleTerm& b) {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    auto key = [](const RuleTerm& t) {
      std::vector<std::vector<int>> k;
      for (const auto& [sym, exp] : t.factors)
        for (int e = 0; e < exp; ++e) k.push_back(sym.modes);
      return k;
    };
    return key(a) < key(b);
  });
  return rule;
}

std::string DecisionRule::text() const {
  auto superscript = [](int e) {
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string s;
    for (char c : std::to_string(e)) s += digits[c - '0'];
    return s;
  };
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  bool first = true;
  for (const auto& term : terms) {
    if (term.coeff == 0.0 && terms.size() > 1) continue;
    const double mag = std::abs(term.coeff);
    if (first) {
      if (term.coeff < 0.0) os << "-";
      first = false;
    } else {
      os << (term.coeff < 0.0 ? " - " : " + ");
    }
    os << mag;
    for (const auto& [sym, exp] : term.factors) {
      // single mode prints <n^k>, multimode <n_1 n_2 ...>
      std::map<int, int> mode_counts;
      for (int m : sym.modes) mode_counts[m] += 1;
      os << "⟨";
      for (const auto& [m, c] : mode_counts) {
        os << "n̂";
        if (d_x > 1) os << "_" << (m + 1);
        if (c > 1) os << superscript(c);
      }
      os << "⟩";
      if (exp > 1) os << superscript(exp);
    }
  }
  if (first) os << "0.0000";
  return os.str();
}

double DecisionRule::coefficient(
    const std::vector<std::pair<std::vector<int>, int>>& factors) const {
  std::map<std::vector<int>, int> want;
  for (const auto& [modes, exp] : factors) {
    std::vector<int> sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    want[sorted] += exp;
  }
  for (const auto& term : terms) {
    std::map<std::vector<int>, int> have;
    for (const auto& [sym, exp] : term.factors) have[sym.modes] += exp;
    if (have == want) return term.coeff;
  }
  return 0.0;
}

double DecisionRule::evaluate(const Eigen::MatrixXd& samples) const {
  const long m = samples.rows();
  std::map<std::vector<int>, double> cache;
  auto moment = [&](const std::vector<int>& modes) {
    auto it = cache.find(modes);
    if (it != cache.end()) return it->second;
    double acc = 0.0;
    for (long a = 0; a < m; ++a) {
      double prod = 1.0;
      for (int mode : modes) prod *= samples(a, mode);
      acc += prod;
    }
    acc /= static_cast<double>(m);
    cache[modes] = acc;
    return acc;
  };
  double value = 0.0;
  for (const auto& term : terms) {
    double v = term.coeff;
    for (const auto& [sym, exp] : term.factors) v *= std::pow(moment(sym.modes), exp);
    value += v;
  }
  return value;
}

} // namespace qnc
