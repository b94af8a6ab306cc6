#include "qnc/fock_space.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qnc/special.hpp"

namespace qnc {

using std::complex;

namespace {

void enumerate_tuples(int modes, int budget, bool exact_total, Eigen::VectorXi& cur, int pos,
                      std::vector<Eigen::VectorXi>& out) {
  if (pos == modes - 1) {
    if (exact_total) {
      cur[pos] = budget;
      out.push_back(cur);
    } else {
      for (int n = 0; n <= budget; ++n) {
        cur[pos] = n;
        out.push_back(cur);
      }
    }
    return;
  }
  for (int n = 0; n <= budget; ++n) {
    cur[pos] = n;
    enumerate_tuples(modes, budget - n, exact_total, cur, pos + 1, out);
  }
}

} // namespace

std::shared_ptr<const FockBasis> FockBasis::make(int modes, int total, bool exact_total,
                                                 size_t dim_cap) {
  if (modes < 1 || modes > 10)
    throw std::invalid_argument("FockBasis: mode count must lie in [1,10]");
  if (total < 0 || total > 63)
    throw std::invalid_argument("FockBasis: photon budget must lie in [0,63]");

  std::vector<Eigen::VectorXi> tuples;
  Eigen::VectorXi cur(modes);
  enumerate_tuples(modes, total, exact_total, cur, 0, tuples);
  if (tuples.size() > dim_cap)
    throw std::runtime_error("FockBasis: dimension " + std::to_string(tuples.size()) +
                             " exceeds cap " + std::to_string(dim_cap));

  std::shared_ptr<FockBasis> basis(new FockBasis());
  basis->modes_ = modes;
  basis->max_total_ = total;
  basis->tuples_.resize(static_cast<Eigen::Index>(tuples.size()), modes);
  for (size_t i = 0; i < tuples.size(); ++i)
    basis->tuples_.row(static_cast<Eigen::Index>(i)) = tuples[i];
  basis->build_index();
  return basis;
}

std::shared_ptr<const FockBasis> FockBasis::up_to(int modes, int n_max, size_t dim_cap) {
  return make(modes, n_max, false, dim_cap);
}

std::shared_ptr<const FockBasis> FockBasis::sector(int modes, int total, size_t dim_cap) {
  return make(modes, total, true, dim_cap);
}

uint64_t FockBasis::pack(const Eigen::VectorXi& tuple) {
  uint64_t key = 0;
  for (int i = 0; i < tuple.size(); ++i) key = (key << 6) | static_cast<uint64_t>(tuple[i] & 63);
  return key;
}

void FockBasis::build_index() {
  index_.reserve(static_cast<size_t>(tuples_.rows()) * 2);
  for (long i = 0; i < tuples_.rows(); ++i) {
    Eigen::VectorXi row = tuples_.row(i);
    index_.emplace(pack(row), i);
  }
}

long FockBasis::index_of(const Eigen::VectorXi& tuple) const { return index_of_packed(pack(tuple)); }

long FockBasis::index_of_packed(uint64_t key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

double MultimodeState::total_truncation_loss() const {
  double loss = 0.0;
  for (const auto& c : components) loss += c.weight * c.truncation_loss;
  return loss;
}

MultimodeState product_coherent(const Eigen::VectorXcd& alphas, int n_max) {
  const int d = static_cast<int>(alphas.size());
  MultimodeState st;
  st.d_x = d;
  MultimodeState::Component comp;
  comp.basis = FockBasis::up_to(d, n_max);
  comp.amps.resize(static_cast<Eigen::Index>(comp.basis->size()));

  Eigen::VectorXd log_abs(d);
  Eigen::VectorXd phase(d);
  double mu_sum = 0.0;
  for (int i = 0; i < d; ++i) {
    log_abs[i] = std::abs(alphas[i]) > 0 ? std::log(std::abs(alphas[i])) : 0.0;
    phase[i] = std::arg(alphas[i]);
    mu_sum += std::norm(alphas[i]);
  }
  for (size_t t = 0; t < comp.basis->size(); ++t) {
    double log_mag = -0.5 * mu_sum;
    double ph = 0.0;
    bool zero = false;
    for (int i = 0; i < d; ++i) {
      const int n = comp.basis->occupation(t, i);
      if (n == 0) continue;
      if (std::abs(alphas[i]) == 0.0) {
        zero = true;
        break;
      }
      log_mag += n * log_abs[i] - 0.5 * log_factorial(n);
      ph += n * phase[i];
    }
    comp.amps[static_cast<Eigen::Index>(t)] = zero ? 0.0 : std::polar(std::exp(log_mag), ph);
  }
  comp.truncation_loss = std::max(0.0, 1.0 - comp.amps.squaredNorm());
  st.components.push_back(std::move(comp));
  return st;
}

MultimodeState product_squeezed(const Eigen::VectorXd& rs, int n_max, int local_cap) {
  const int d = static_cast<int>(rs.size());
  MultimodeState st;
  st.d_x = d;
  MultimodeState::Component comp;
  comp.basis = FockBasis::up_to(d, n_max);
  comp.amps.resize(static_cast<Eigen::Index>(comp.basis->size()));

  // Single-mode amplitudes c_n(r); odd n vanish.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, n_max + 1);
  for (int i = 0; i < d; ++i) {
    const double r = rs[i];
    for (int n = 0; n <= std::min(n_max, local_cap); n += 2) {
      const int t = n / 2;
      if (r == 0.0) {
        c(i, n) = n == 0 ? 1.0 : 0.0;
        continue;
      }
      const double sign = (t % 2 == 0) ? 1.0 : -1.0;
      c(i, n) = sign *
                std::exp(0.5 * log_factorial(n) - t * std::log(2.0) - log_factorial(t) +
                         t * std::log(std::tanh(std::abs(r))) - 0.5 * std::log(std::cosh(r)));
      if (r < 0.0 && t % 2 == 1) c(i, n) = -c(i, n);
    }
  }
  for (size_t t = 0; t < comp.basis->size(); ++t) {
    double amp = 1.0;
    for (int i = 0; i < d && amp != 0.0; ++i) amp *= c(i, comp.basis->occupation(t, i));
    comp.amps[static_cast<Eigen::Index>(t)] = amp;
  }
  comp.truncation_loss = std::max(0.0, 1.0 - comp.amps.squaredNorm());
  st.components.push_back(std::move(comp));
  return st;
}

MultimodeState fock_product(const Eigen::VectorXi& ns) {
  MultimodeState st;
  st.d_x = static_cast<int>(ns.size());
  MultimodeState::Component comp;
  comp.basis = FockBasis::sector(st.d_x, ns.sum());
  comp.amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(comp.basis->size()));
  const long idx = comp.basis->index_of(ns);
  if (idx < 0) throw std::runtime_error("fock_product: tuple missing from its own sector");
  comp.amps[idx] = 1.0;
  st.components.push_back(std::move(comp));
  return st;
}

MultimodeState fock_mixture(const std::vector<std::pair<double, Eigen::VectorXi>>& parts) {
  if (parts.empty()) throw std::invalid_argument("fock_mixture: no components");
  MultimodeState st;
  st.d_x = static_cast<int>(parts.front().second.size());
  double wsum = 0.0;
  for (const auto& [w, ns] : parts) wsum += w;
  // Shared sector bases keyed by total photon number.
  std::unordered_map<int, std::shared_ptr<const FockBasis>> bases;
  for (const auto& [w, ns] : parts) {
    const int total = ns.sum();
    auto& basis = bases[total];
    if (!basis) basis = FockBasis::sector(st.d_x, total);
    MultimodeState::Component comp;
    comp.weight = w / wsum;
    comp.basis = basis;
    comp.amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    comp.amps[basis->index_of(ns)] = 1.0;
    st.components.push_back(std::move(comp));
  }
  return st;
}

namespace {

// Two-mode sector matrices W_S(k', k): amplitude for |k, S-k> -> |k', S-k'>
// under the 2x2 single-photon block B, built by photon-adding recursion.
std::vector<Eigen::MatrixXcd> sector_matrices(const Eigen::Matrix2cd& b, int max_total) {
  std::vector<Eigen::MatrixXcd> w(max_total + 1);
  w[0] = Eigen::MatrixXcd::Ones(1, 1);
  for (int s = 1; s <= max_total; ++s) {
    w[s] = Eigen::MatrixXcd::Zero(s + 1, s + 1);
    for (int m = 0; m <= s; ++m) { // input (m, s-m)
      if (m >= 1) {
        // add one photon to input mode a of (m-1, s-m)
        for (int k = 0; k <= s - 1; ++k) {
          const complex<double> prev = w[s - 1](k, m - 1);
          if (prev == complex<double>(0.0)) continue;
          w[s](k + 1, m) += b(0, 0) * std::sqrt(static_cast<double>(k + 1)) * prev /
                            std::sqrt(static_cast<double>(m));
          w[s](k, m) += b(1, 0) * std::sqrt(static_cast<double>(s - k)) * prev /
                        std::sqrt(static_cast<double>(m));
        }
      } else {
        // add one photon to input mode b of (0, s-1)
        for (int k = 0; k <= s - 1; ++k) {
          const complex<double> prev = w[s - 1](k, 0);
          if (prev == complex<double>(0.0)) continue;
          w[s](k + 1, 0) += b(0, 1) * std::sqrt(static_cast<double>(k + 1)) * prev /
                            std::sqrt(static_cast<double>(s));
          w[s](k, 0) += b(1, 1) * std::sqrt(static_cast<double>(s - k)) * prev /
                        std::sqrt(static_cast<double>(s));
        }
      }
    }
  }
  return w;
}

// Scatter targets for a beamsplitter on one basis: for each index, the list
// of partner indices across its two-mode sector.
struct BsTransitions {
  std::vector<int> k_in;      // occupation of mode a
  std::vector<int> sector;    // k_in + occupation of mode b
  std::vector<long> offsets;  // into targets
  std::vector<long> targets;  // basis index of (k' , sector-k'), k' = 0..sector
};

BsTransitions build_transitions(const FockBasis& basis, int a, int b) {
  BsTransitions tr;
  const size_t n = basis.size();
  tr.k_in.resize(n);
  tr.sector.resize(n);
  tr.offsets.resize(n + 1);
  long total = 0;
  for (size_t t = 0; t < n; ++t) {
    tr.k_in[t] = basis.occupation(t, a);
    tr.sector[t] = tr.k_in[t] + basis.occupation(t, b);
    tr.offsets[t] = total;
    total += tr.sector[t] + 1;
  }
  tr.offsets[n] = total;
  tr.targets.resize(total);
  Eigen::VectorXi tup(basis.modes());
  for (size_t t = 0; t < n; ++t) {
    tup = basis.tuples().row(static_cast<Eigen::Index>(t));
    const int s = tr.sector[t];
    for (int k = 0; k <= s; ++k) {
      tup[a] = k;
      tup[b] = s - k;
      tr.targets[tr.offsets[t] + k] = basis.index_of(tup);
    }
  }
  return tr;
}

} // namespace

MultimodeState evolve(const MultimodeState& state, const MeshPlan& plan) {
  MultimodeState out = state;
  for (const MeshElement& e : plan) {
    if (e.kind == MeshElement::Kind::PhaseShifter) {
      for (auto& comp : out.components) {
        const int mode = e.mode_a;
        if (mode >= comp.basis->modes())
          throw std::invalid_argument("evolve: phase shifter mode out of range");
        for (size_t t = 0; t < comp.basis->size(); ++t)
          comp.amps[static_cast<Eigen::Index>(t)] *=
              std::polar(1.0, e.phi * comp.basis->occupation(t, mode));
      }
      continue;
    }
    // Beamsplitter: share the per-basis transition table across components.
    Eigen::Matrix2cd b2;
    {
      const Eigen::MatrixXcd m = e.matrix(std::max(e.mode_a, e.mode_b) + 1);
      b2 << m(e.mode_a, e.mode_a), m(e.mode_a, e.mode_b), m(e.mode_b, e.mode_a),
          m(e.mode_b, e.mode_b);
    }
    std::unordered_map<const FockBasis*, BsTransitions> cache;
    std::unordered_map<int, std::vector<Eigen::MatrixXcd>> w_cache;
    for (auto& comp : out.components) {
      if (e.mode_a >= comp.basis->modes() || e.mode_b >= comp.basis->modes())
        throw std::invalid_argument("evolve: beamsplitter mode out of range");
      auto [it, fresh] = cache.try_emplace(comp.basis.get());
      if (fresh) it->second = build_transitions(*comp.basis, e.mode_a, e.mode_b);
      const BsTransitions& tr = it->second;
      auto [wit, wfresh] = w_cache.try_emplace(comp.basis->max_total());
      if (wfresh) wit->second = sector_matrices(b2, comp.basis->max_total());
      const std::vector<Eigen::MatrixXcd>& w = wit->second;

      Eigen::VectorXcd next = Eigen::VectorXcd::Zero(comp.amps.size());
      for (size_t t = 0; t < comp.basis->size(); ++t) {
        const complex<double> amp = comp.amps[static_cast<Eigen::Index>(t)];
        if (amp == complex<double>(0.0)) continue;
        const int s = tr.sector[t];
        const int k = tr.k_in[t];
        const Eigen::MatrixXcd& ws = w[s];
        const long off = tr.offsets[t];
        for (int kp = 0; kp <= s; ++kp) next[tr.targets[off + kp]] += ws(kp, k) * amp;
      }
      comp.amps = std::move(next);
    }
  }
  return out;
}

void JointDistribution::build_index() const {
  if (!index_.empty() || tuples.rows() == 0) return;
  index_.reserve(static_cast<size_t>(tuples.rows()) * 2);
  for (long i = 0; i < tuples.rows(); ++i) {
    Eigen::VectorXi row = tuples.row(i);
    index_.emplace(FockBasis::pack(row), i);
  }
}

double JointDistribution::prob_of(const Eigen::VectorXi& tuple) const {
  build_index();
  auto it = index_.find(FockBasis::pack(tuple));
  return it == index_.end() ? 0.0 : probs[it->second];
}

JointDistribution output_distribution(const MultimodeState& state) {
  std::unordered_map<uint64_t, double> acc;
  for (const auto& comp : state.components) {
    for (size_t t = 0; t < comp.basis->size(); ++t) {
      const double p = comp.weight * std::norm(comp.amps[static_cast<Eigen::Index>(t)]);
      if (p == 0.0) continue;
      Eigen::VectorXi row = comp.basis->tuples().row(static_cast<Eigen::Index>(t));
      acc[FockBasis::pack(row)] += p;
    }
  }
  JointDistribution joint;
  joint.d_x = state.d_x;
  joint.truncation_loss = state.total_truncation_loss();
  joint.tuples.resize(static_cast<Eigen::Index>(acc.size()), state.d_x);
  joint.probs.resize(static_cast<Eigen::Index>(acc.size()));
  long i = 0;
  for (const auto& [key, p] : acc) {
    for (int m = state.d_x - 1; m >= 0; --m)
      joint.tuples(i, m) = static_cast<int>((key >> (6 * (state.d_x - 1 - m))) & 63);
    joint.probs[i] = p;
    ++i;
  }
  joint.build_index(); // eager, so later reads are safe concurrently
  return joint;
}

Eigen::VectorXd coherent_shortcut(const Eigen::VectorXcd& alphas, const Eigen::MatrixXcd& u) {
  if (u.cols() != alphas.size())
    throw std::invalid_argument("coherent_shortcut: dimension mismatch");
  const Eigen::VectorXcd out = u * alphas;
  return out.cwiseAbs2();
}

JointDistribution joint_poisson_product(const Eigen::VectorXd& means, int n_max) {
  const int d = static_cast<int>(means.size());
  auto basis = FockBasis::up_to(d, n_max);
  JointDistribution joint;
  joint.d_x = d;
  joint.tuples = basis->tuples();
  joint.probs.resize(static_cast<Eigen::Index>(basis->size()));
  Eigen::VectorXd log_mu(d);
  for (int i = 0; i < d; ++i) log_mu[i] = means[i] > 0 ? std::log(means[i]) : 0.0;
  for (size_t t = 0; t < basis->size(); ++t) {
    double lp = -means.sum();
    bool zero = false;
    for (int i = 0; i < d; ++i) {
      const int n = basis->occupation(t, i);
      if (n == 0) continue;
      if (means[i] == 0.0) {
        zero = true;
        break;
      }
      lp += n * log_mu[i] - log_factorial(n);
    }
    joint.probs[static_cast<Eigen::Index>(t)] = zero ? 0.0 : std::exp(lp);
  }
  joint.truncation_loss = std::max(0.0, 1.0 - joint.probs.sum());
  joint.build_index();
  return joint;
}

SampleSet sample_multimode(const MultimodeState& state, const DetectorModel& detector,
                           int m_draws, uint64_t seed) {
  if (m_draws < 1) throw std::invalid_argument("sample_multimode: need at least 1 draw");
  const int d = state.d_x;

  // Component CDF over mixture weights (losses renormalized away per draw).
  const size_t n_comp = state.components.size();
  Eigen::VectorXd comp_cdf(n_comp);
  std::vector<Eigen::VectorXd> tuple_cdf(n_comp);
  double wacc = 0.0;
  int max_n = 0;
  for (size_t c = 0; c < n_comp; ++c) {
    const auto& comp = state.components[c];
    wacc += comp.weight;
    comp_cdf[static_cast<Eigen::Index>(c)] = wacc;
    tuple_cdf[c].resize(comp.amps.size());
    double acc = 0.0;
    for (Eigen::Index t = 0; t < comp.amps.size(); ++t) {
      acc += std::norm(comp.amps[t]);
      tuple_cdf[c][t] = acc;
    }
    max_n = std::max(max_n, comp.basis->max_total());
  }

  // Per-mode outcome CDFs conditioned on the true count.
  const Eigen::MatrixXd povm = povm_matrix(detector, max_n);
  Eigen::MatrixXd povm_cdf = povm;
  for (int m = 0; m <= max_n; ++m)
    for (int o = 1; o < povm.rows(); ++o) povm_cdf(o, m) += povm_cdf(o - 1, m);

  SampleSet set;
  set.samples.resize(m_draws, d);
  set.seed = seed;
  SplitMix64 rng(seed);
  for (int a = 0; a < m_draws; ++a) {
    const size_t c = static_cast<size_t>(draw_from_cdf(comp_cdf, rng.uniform()));
    const long t = draw_from_cdf(tuple_cdf[c], rng.uniform());
    for (int i = 0; i < d; ++i) {
      const int n = state.components[c].basis->occupation(static_cast<size_t>(t), i);
      set.samples(a, i) = draw_from_cdf(povm_cdf.col(n), rng.uniform());
    }
  }
  return set;
}

JointDistribution apply_detector_joint(const JointDistribution& joint,
                                       const DetectorModel& detector) {
  if (joint.d_x > 3)
    throw std::invalid_argument("apply_detector_joint: supported for d_x <= 3 only");
  const int max_n = joint.tuples.maxCoeff();
  const Eigen::MatrixXd povm = povm_matrix(detector, max_n);
  const int n_out = static_cast<int>(povm.rows());

  long n_cells = 1;
  for (int i = 0; i < joint.d_x; ++i) n_cells *= n_out;
  Eigen::VectorXd obs = Eigen::VectorXd::Zero(n_cells);

  std::vector<int> outcome(joint.d_x);
  for (long r = 0; r < joint.tuples.rows(); ++r) {
    const double p = joint.probs[r];
    if (p == 0.0) continue;
    // iterate all outcome tuples (n_out^d cells)
    std::fill(outcome.begin(), outcome.end(), 0);
    for (long cell = 0; cell < n_cells; ++cell) {
      double q = p;
      long key = 0;
      for (int i = 0; i < joint.d_x; ++i) {
        q *= povm(outcome[i], joint.tuples(r, i));
        key = key * n_out + outcome[i];
      }
      obs[key] += q;
      // advance mixed-radix counter
      for (int i = joint.d_x - 1; i >= 0; --i) {
        if (++outcome[i] < n_out) break;
        outcome[i] = 0;
      }
    }
  }

  JointDistribution result;
  result.d_x = joint.d_x;
  result.truncation_loss = joint.truncation_loss;
  result.tuples.resize(n_cells, joint.d_x);
  result.probs = obs;
  for (long cell = 0; cell < n_cells; ++cell) {
    long rem = cell;
    for (int i = joint.d_x - 1; i >= 0; --i) {
      result.tuples(cell, i) = static_cast<int>(rem % n_out);
      rem /= n_out;
    }
  }
  result.build_index();
  return result;
}

} // namespace qnc
