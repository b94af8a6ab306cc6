#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qnc/detectors.hpp"
#include "qnc/metrics.hpp"

namespace qnc {

/// Hyperparameters of the algebraic classifier. L is the total polynomial
/// order; the encoder has L-1 layers with matrices K^(2)..K^(L).
struct AlClaConfig {
  int d_x = 1;
  int total_order = 2; // L
  double lambda = 0.0;   // false-positive regularization weight
  double lambda_k = 0.0; // encoder L1 sparsity weight

  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int epochs = 900;

  bool plateau_scheduler = true; // false: constant lr with best-epoch selection
  int patience = 50;
  double min_lr = 1e-5;

  bool upper_triangular_k = false;
  bool normalize_by_m = true; // sample-mean (1/M) encoder outputs
  double train_fraction = 0.8;
  uint64_t seed = 1;

  // weight clipping ranges
  double k_clip = 10.0;
  double theta_clip = 10.0;
  double amplify_lo = 1.0;
  double amplify_hi = 50.0;
};

/// One decoder monomial: product of encoder outputs (x_mode^(order))^exponent
/// over at most 3 distinct (mode, order) factors; empty = the constant term.
struct Monomial {
  struct Factor {
    int mode = 0;
    int order = 1;    // which x^(m)
    int exponent = 1; // j
  };
  std::vector<Factor> factors;

  int total_order() const;
};

/// Enumerated decoder terms for (d_x, L); the constant term is last.
struct DecoderBasis {
  int d_x = 1;
  int total_order = 1;
  std::vector<Monomial> terms;

  static DecoderBasis build(int d_x, int total_order);
  int size() const { return static_cast<int>(terms.size()); }
};

long decoder_term_count(int d_x, int total_order);

/// Closed-form decoder parameter bound 1 + (d L~/36)(35 + d^2 L~^2) with
/// L~ = L ln L + L*gamma. The harmonic-sum step underlying the bound requires
/// sum floor(L/m) <= L~, which fails for small L; see parameter_bound_applicable.
double parameter_bound(int d_x, int total_order);
bool parameter_bound_applicable(int total_order);

struct AlClaParams {
  std::vector<Eigen::MatrixXd> k_mats; // K^(2)..K^(L)
  Eigen::VectorXd theta;               // one coefficient per basis term
  double theta_amplify = 1.0;

  static AlClaParams init(const AlClaConfig& config, const DecoderBasis& basis);
};

struct EncoderOutputs {
  std::vector<Eigen::MatrixXd> s; // s[0] = samples (M x d), s[i] per layer
  std::vector<Eigen::VectorXd> x; // x[i] = output of order i+1 (d-vector)
};

EncoderOutputs encode(const Eigen::MatrixXd& samples, const AlClaParams& params,
                      const AlClaConfig& config);

/// Pre-sigmoid polynomial value f.
double decoder_value(const DecoderBasis& basis, const Eigen::VectorXd& theta,
                     const std::vector<Eigen::VectorXd>& x);

/// Overflow-guarded logistic function.
double sigmoid(double z);

struct ForwardResult {
  double f = 0.0; // polynomial value
  double y = 0.5; // 1 - sigmoid(amplify * f); nonclassical iff y > 0.5
};

ForwardResult forward(const Eigen::MatrixXd& samples, const AlClaParams& params,
                      const DecoderBasis& basis, const AlClaConfig& config);

/// Per-state loss: clamped binary cross entropy + lambda (1-y~)|y~-y| +
/// lambda_K sum_i ||K^(i)||_1.
double loss(double y, double label, const AlClaParams& params, const AlClaConfig& config);

struct AlClaGradients {
  std::vector<Eigen::MatrixXd> k_mats;
  Eigen::VectorXd theta;
  double theta_amplify = 0.0;
};

/// Batch loss over states: mean of data losses plus the L1 penalty once.
double batch_loss(const std::vector<Eigen::MatrixXd>& states, const std::vector<double>& labels,
                  const AlClaParams& params, const DecoderBasis& basis,
                  const AlClaConfig& config);

/// Exact reverse-mode gradients of batch_loss.
AlClaGradients gradients(const std::vector<Eigen::MatrixXd>& states,
                         const std::vector<double>& labels, const AlClaParams& params,
                         const DecoderBasis& basis, const AlClaConfig& config);

struct HistoryRow {
  int epoch = 0;
  double loss = 0.0;
  double lr = 0.0;
  AccuracyReport train;
  AccuracyReport test;
};

struct TrainResult {
  AlClaParams params;
  DecoderBasis basis;
  std::vector<HistoryRow> history;
  std::vector<int> train_indices;
  std::vector<int> test_indices;
  int best_epoch = -1; // constant-lr mode only
};

/// Adam + clipping on full-batch gradients with a seeded 80/20 split.
TrainResult train(const std::vector<SampleSet>& dataset, const AlClaConfig& config);

/// Predictions of a trained model on a dataset.
std::vector<ForwardResult> predict(const std::vector<SampleSet>& dataset,
                                   const AlClaParams& params, const DecoderBasis& basis,
                                   const AlClaConfig& config);

// ---- decision-rule extraction ----------------------------------------------------

/// A moment symbol <n_i n_j ...> identified by its sorted mode multiset.
struct MomentSymbol {
  std::vector<int> modes;
  bool operator==(const MomentSymbol&) const = default;
  bool operator<(const MomentSymbol& o) const { return modes < o.modes; }
};

struct RuleTerm {
  double coeff = 0.0;
  std::vector<std::pair<MomentSymbol, int>> factors; // symbol, exponent
  int degree() const;
};

/// The learned polynomial over empirical moments, expanded from the encoder
/// weights; evaluating it on the raw samples reproduces forward's f.
struct DecisionRule {
  int d_x = 1;
  std::vector<RuleTerm> terms; // sorted by descending degree, constant last
  std::string text() const;    // 4-decimal human-readable rendering
  double evaluate(const Eigen::MatrixXd& samples) const;

  /// Coefficient of an exact moment product; zero if absent. Factors are
  /// (sorted mode multiset, exponent) pairs; empty = the constant term.
  double coefficient(const std::vector<std::pair<std::vector<int>, int>>& factors) const;
};

DecisionRule extract_rule(const AlClaParams& params, const DecoderBasis& basis);

} // namespace qnc
