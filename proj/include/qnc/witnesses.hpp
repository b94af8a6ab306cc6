#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "qnc/detectors.hpp"
#include "qnc/fock_space.hpp"
#include "qnc/metrics.hpp"
#include "qnc/moments.hpp"

namespace qnc {

/// One evaluated nonclassicality witness. A state is flagged nonclassical at
/// bias b when value + b < threshold - tol; tol carries both the numeric PSD
/// margin and the 3-sigma statistical margin for empirical matrix witnesses.
struct WitnessReport {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
  double threshold = 0.0; // 0 for moment witnesses, 1 for the Klyshko ratio
  double tol = 0.0;
  bool not_applicable = false;

  bool nonclassical_at_bias(double bias) const {
    return !not_applicable && value + bias < threshold - tol;
  }
};

enum class IndexKind { Integer, HalfInteger };

enum class MatrixSource {
  PnrProbabilities,
  ClickProbabilities,
  MultimodeMoments,
  MultimodeProbabilities,
};

struct MomentMatrix {
  Eigen::MatrixXd entries;
  IndexKind index_kind = IndexKind::Integer;
  MatrixSource source = MatrixSource::PnrProbabilities;
  long collisions = 0; // superindex digit-carry collisions (multimode only)
};

// ---- moment-based witnesses -------------------------------------------------

/// Mandel Q = (<n^2> - <n>^2)/<n> - 1; classical >= 0. Vacuum input
/// (<n> = 0) is reported not applicable.
WitnessReport mandel_q(const MomentVector& mom);
WitnessReport mandel_q_empirical(const Eigen::MatrixXi& samples, int mode = 0);

/// Third-order witness Q3 = <n><:n^3:> - <:n^2:>^2; classical >= 0.
WitnessReport q3_pnr(const MomentVector& mom);
WitnessReport q3_empirical(const Eigen::MatrixXi& samples, int mode = 0);

/// Sub-binomial parameter Q_B = <c^2> - (N-1)/N <c>^2 - <c>; classical >= 0.
WitnessReport qb(const Eigen::VectorXd& click_moms, int bins);
WitnessReport qb_empirical(const Eigen::MatrixXi& samples, int bins, int mode = 0);

/// Q_B3 = <c^3><c> - (N-2)/(N-1)<c^2>^2 - (N+1)/(N-1)<c^2><c> + N/(N-1)<c>^2.
WitnessReport qb3(const Eigen::VectorXd& click_moms, int bins);
WitnessReport qb3_empirical(const Eigen::MatrixXi& samples, int bins, int mode = 0);

// ---- probability-based witnesses --------------------------------------------

/// Klyshko ratio (k+1) p_{k-1} p_{k+1} / (k p_k^2); classical >= 1.
/// p_k = 0 with a nonzero numerator yields +inf (no violation); 0/0 is
/// indeterminate and reported not applicable.
WitnessReport klyshko(const Eigen::VectorXd& probs, int k);
/// Most-violated-k variant: minimum finite ratio over k = 1..C-1.
WitnessReport klyshko_min(const Eigen::VectorXd& probs);
WitnessReport klyshko_min_empirical(const Eigen::MatrixXi& samples, int n_outcomes, int mode = 0);

/// Generalized Klyshko matrix M_{jk} = C(j+k, j) p_{j+k}, indices integer
/// (0, 1, ...) or half-integer (1/2, 3/2, ...), all entries within j+k <= C.
MomentMatrix klyshko_matrix_pnr(const Eigen::VectorXd& probs, IndexKind kind);

/// Click variant M_{jk} = c_{j+k} / C(N, j+k), j+k <= N.
MomentMatrix klyshko_matrix_click(const Eigen::VectorXd& clicks, int bins, IndexKind kind);

/// Multimode second-order matrix [[1, <n_i>], [<n_j>, <:n_i n_j:>]].
MomentMatrix moment_matrix_multimode(const Eigen::VectorXd& first,
                                     const Eigen::MatrixXd& second_raw);
MomentMatrix moment_matrix_multimode_exact(const JointDistribution& joint);

/// Superindexed multimode probabilities p'(c), c = n_0 + n_1 C + ... Digits
/// equal to C overflow into the next place; colliding tuples accumulate and
/// are counted.
Eigen::VectorXd superindex_probs(const JointDistribution& joint, int base, long* collisions);

/// Generalized Klyshko matrix over superindexed probabilities, truncated to
/// the leading principal block of size <= dimension_cap.
MomentMatrix multimode_klyshko_matrix(const JointDistribution& joint, int base, IndexKind kind,
                                      int dimension_cap, bool allow_truncate = true);

/// Verdict from the minimal eigenvalue of a moment matrix. For empirical
/// matrices, entry_stderr propagates a 3-sigma bound into the tolerance.
WitnessReport min_eig_report(const std::string& name, const MomentMatrix& m,
                             const Eigen::MatrixXd* entry_stderr = nullptr);

// ---- empirical matrix witnesses ---------------------------------------------

WitnessReport gen_klyshko_pnr_empirical(const Eigen::MatrixXi& samples, int n_outcomes,
                                        IndexKind kind, int mode = 0);
WitnessReport gen_klyshko_click_empirical(const Eigen::MatrixXi& samples, int bins,
                                          IndexKind kind, int mode = 0);
WitnessReport moment_matrix_empirical(const Eigen::MatrixXi& samples);
WitnessReport multimode_klyshko_empirical(const Eigen::MatrixXi& samples, int base,
                                          IndexKind kind, int dimension_cap);

// ---- bias sweeps --------------------------------------------------------------

/// Accuracy trade-off of one witness over a labeled collection of reports.
TradeoffCurve sweep_bias(const std::string& name, const std::vector<WitnessReport>& reports,
                         const std::vector<int>& labels, const std::vector<double>& bias_grid);

/// Delta-method value and standard error of h(mean of feature rows).
std::pair<double, double> delta_method(const Eigen::MatrixXd& features,
                                       const std::function<double(const Eigen::VectorXd&)>& h,
                                       const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad);

/// Empirical outcome frequencies (no smoothing) over outcomes 0..n_outcomes-1.
Eigen::VectorXd outcome_frequencies(const Eigen::MatrixXi& samples, int n_outcomes, int mode = 0);

} // namespace qnc
