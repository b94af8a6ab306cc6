#include "qnc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qnc/fock_space.hpp"
#include "qnc/mesh.hpp"
#include "qnc/rng.hpp"

namespace qnc {

using json = nlohmann::ordered_json;

namespace {

std::vector<double> grid(double lo, double hi, int count, bool log_grid) {
  if (count < 1) throw std::invalid_argument("grid: count must be >= 1");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  if (log_grid) {
    if (lo <= 0.0 || hi <= 0.0) throw std::invalid_argument("grid: log grid needs positive range");
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < count; ++i) g[i] = lo * std::exp(ratio * i / (count - 1));
  } else {
    for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  }
  return g;
}

StateSpec make_single_mode_spec(const StateEntry& entry, double amp) {
  switch (entry.family) {
    case StateFamily::Coherent: return StateSpec::coherent(amp);
    case StateFamily::MixedCoherent:
      return StateSpec::mixed_coherent(amp, entry.alpha2_ratio * amp);
    case StateFamily::Thermal: return StateSpec::thermal(amp);
    case StateFamily::SqueezedVacuum: return StateSpec::squeezed_vacuum(amp);
    case StateFamily::Spats: return StateSpec::spats(amp);
    case StateFamily::LossyFock:
      return StateSpec::lossy_fock(static_cast<int>(std::lround(amp)), entry.p_loss);
  }
  throw std::invalid_argument("unknown family");
}

json params_json(const StateSpec& spec) {
  json p;
  switch (spec.family) {
    case StateFamily::Coherent: p["alpha"] = spec.alpha1; break;
    case StateFamily::MixedCoherent:
      p["alpha1"] = spec.alpha1;
      p["alpha2"] = spec.alpha2;
      break;
    case StateFamily::Thermal: p["nbar"] = spec.nbar; break;
    case StateFamily::SqueezedVacuum: p["r"] = spec.r; break;
    case StateFamily::Spats: p["nbar"] = spec.nbar; break;
    case StateFamily::LossyFock:
      p["n"] = spec.fock_n;
      p["p_loss"] = spec.p_loss;
      break;
  }
  return p;
}

StateSpec params_from_json(StateFamily family, const json& p) {
  switch (family) {
    case StateFamily::Coherent: return StateSpec::coherent(p.at("alpha"));
    case StateFamily::MixedCoherent:
      return StateSpec::mixed_coherent(p.at("alpha1"), p.at("alpha2"));
    case StateFamily::Thermal: return StateSpec::thermal(p.at("nbar"));
    case StateFamily::SqueezedVacuum: return StateSpec::squeezed_vacuum(p.at("r"));
    case StateFamily::Spats: return StateSpec::spats(p.at("nbar"));
    case StateFamily::LossyFock: return StateSpec::lossy_fock(p.at("n"), p.at("p_loss"));
  }
  throw std::invalid_argument("unknown family");
}

json detector_json(const DetectorModel& d) {
  json j;
  switch (d.kind) {
    case DetectorKind::IdealPnr:
      j["kind"] = "ideal_pnr";
      j["cutoff"] = d.cutoff;
      break;
    case DetectorKind::BinnedPnr:
      j["kind"] = "binned_pnr";
      j["efficiency"] = d.efficiency;
      j["dark_rate"] = d.dark_rate;
      j["bin_edges"] = d.bin_edges;
      break;
    case DetectorKind::ClickMultiplex:
      j["kind"] = "click_multiplex";
      j["bins"] = d.bins;
      j["efficiency"] = d.efficiency;
      j["dark_rate"] = d.dark_rate;
      break;
    case DetectorKind::PovmFile: {
      j["kind"] = "povm";
      j["outcomes"] = d.povm.rows();
      j["cutoff"] = d.cutoff;
      std::vector<std::vector<double>> rows;
      for (int r = 0; r < d.povm.rows(); ++r)
        rows.emplace_back(d.povm.row(r).begin(), d.povm.row(r).end());
      j["matrix"] = rows;
      break;
    }
  }
  return j;
}

DetectorModel detector_from_json(const json& j) {
  const std::string kind = j.at("kind");
  if (kind == "ideal_pnr") return DetectorModel::ideal_pnr(j.at("cutoff"));
  if (kind == "binned_pnr")
    return DetectorModel::binned_pnr(j.at("efficiency"), j.at("dark_rate"),
                                     j.at("bin_edges").get<std::vector<int>>());
  if (kind == "click_multiplex")
    return DetectorModel::click_multiplex(j.at("bins"), j.at("efficiency"), j.at("dark_rate"));
  if (kind == "povm") {
    if (j.contains("file")) return load_povm(j.at("file"));
    const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd m(rows.size(), rows.at(0).size());
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return DetectorModel::povm_file(m);
  }
  throw std::invalid_argument("unknown detector kind: " + kind);
}

StateEntry entry_from_json(const json& j) {
  StateEntry e;
  e.family = family_from_name(j.at("family"));
  e.count = j.at("count");
  e.lo = j.at("range").at(0);
  e.hi = j.at("range").at(1);
  if (j.contains("log_grid")) e.log_grid = j.at("log_grid");
  if (j.contains("pattern")) e.pattern = j.at("pattern").get<std::vector<double>>();
  if (j.contains("alpha2_ratio")) e.alpha2_ratio = j.at("alpha2_ratio");
  if (j.contains("p_loss")) e.p_loss = j.at("p_loss");
  if (j.contains("main_weight")) e.main_weight = j.at("main_weight");
  if (j.contains("loss_weight")) e.loss_weight = j.at("loss_weight");
  return e;
}

} // namespace

DatasetConfig preset(const std::string& name, int samples_per_state, uint64_t seed) {
  DatasetConfig cfg;
  cfg.name = name;
  cfg.samples_per_state = samples_per_state;
  cfg.seed = seed;
  if (name == "table1") {
    cfg.detector = DetectorModel::ideal_pnr(29);
    cfg.states = {
        {StateFamily::SqueezedVacuum, 12, 0.1, 1.2, false, {}, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::Spats, 20, 0.25, 1.2, false, {}, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::Coherent, 36, 0.0, 3.5, false, {}, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::MixedCoherent, 18, 0.0, 3.5, false, {}, 0.5, 0.1, 0.9, 0.0167},
    };
  } else if (name == "table2" || name == "table3") {
    if (name == "table2") cfg.detector = DetectorModel::binned_pnr(1.0, 0.0);
    else cfg.detector = DetectorModel::click_multiplex(8, 1.0, 0.0);
    cfg.states = {
        {StateFamily::SqueezedVacuum, 12, 0.1, 1.2, false, {}, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::Spats, 10, 0.15, 0.42, false, {}, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::Coherent, 13, 0.0, 12.0, false, {}, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::Thermal, 14, 0.5, 7.0, false, {}, 0.5, 0.1, 0.9, 0.0167},
    };
    if (name == "table3") {
      // five decades of coherent amplitudes; equidistant in log alpha
      cfg.states[2].lo = 1.04e-3;
      cfg.states[2].hi = 9.81e1;
      cfg.states[2].log_grid = true;
    }
  } else if (name == "table4") {
    cfg.detector = DetectorModel::binned_pnr(1.0, 0.0);
    cfg.d_x = 6;
    cfg.n_max = 12;
    cfg.unitary = bundled_unitary6();
    const std::vector<double> all{1, 1, 1, 1, 1, 1};
    const std::vector<double> last3{0, 0, 0, 1, 1, 1};
    const std::vector<double> first3{1, 1, 1, 0, 0, 0};
    cfg.states = {
        {StateFamily::SqueezedVacuum, 6, 0.1, 0.6, false, all, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::SqueezedVacuum, 8, 0.1, 0.8, false, last3, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::SqueezedVacuum, 8, 0.1, 0.8, false, first3, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::Coherent, 10, 0.0, 0.9, false, all, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::Coherent, 14, 0.1, 1.4, false, last3, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::Coherent, 14, 0.1, 1.4, false, first3, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::LossyFock, 5, 1.0, 5.0, false, all, 0.5, 0.1, 0.9, 0.0167},
        {StateFamily::LossyFock, 5, 1.0, 5.0, false, last3, 0.5, 0.1, 0.95, 0.0167},
        {StateFamily::LossyFock, 5, 1.0, 5.0, false, first3, 0.5, 0.1, 0.95, 0.0167},
    };
  } else {
    throw std::invalid_argument("unknown preset: " + name +
                                " (available: table1, table2, table3, table4)");
  }
  return cfg;
}

DatasetConfig load_dataset_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  in >> j;
  if (j.contains("preset"))
    return preset(j.at("preset"), j.value("samples_per_state", 1000),
                  j.value("seed", uint64_t{12345}));

  DatasetConfig cfg;
  cfg.name = j.value("name", "dataset");
  cfg.detector = detector_from_json(j.at("detector"));
  cfg.samples_per_state = j.value("samples_per_state", 1000);
  cfg.seed = j.value("seed", uint64_t{12345});
  cfg.d_x = j.value("d_x", 1);
  cfg.n_max = j.value("n_max", 12);
  for (const auto& e : j.at("states")) cfg.states.push_back(entry_from_json(e));
  if (j.contains("unitary_file")) cfg.unitary = load_unitary(j.at("unitary_file"));
  for (const auto& e : cfg.states) {
    if (!e.pattern.empty() && static_cast<int>(e.pattern.size()) != cfg.d_x)
      throw std::invalid_argument("config: pattern length does not match d_x");
    if (e.count < 1) throw std::invalid_argument("config: state count must be >= 1");
  }
  return cfg;
}

namespace {

SampleSet simulate_single_mode(const StateEntry& entry, double amp, const DetectorModel& det,
                               int m_draws, uint64_t state_seed) {
  const StateSpec spec = make_single_mode_spec(entry, amp);
  OutcomeDistribution out;
  if (det.kind == DetectorKind::ClickMultiplex) {
    out = click_distribution(spec, det.bins, det.efficiency, det.dark_rate);
  } else {
    const int cutoff =
        det.kind == DetectorKind::PovmFile ? det.cutoff : adaptive_cutoff(spec);
    out = pnr_response(photon_distribution(spec, cutoff), det);
  }
  SampleSet set = sample(out, m_draws, state_seed);
  set.meta = spec;
  set.label = spec.nonclassical() ? 1 : 0;
  return set;
}

SampleSet simulate_multimode(const StateEntry& entry, double amp, const DatasetConfig& cfg,
                             const MeshPlan& plan, int m_draws, uint64_t state_seed) {
  const int d = cfg.d_x;
  SampleSet set;
  set.pattern = entry.pattern;
  set.seed = state_seed;

  if (entry.family == StateFamily::Coherent) {
    // Coherent products stay coherent products; sample each mode exactly.
    Eigen::VectorXcd alphas(d);
    for (int i = 0; i < d; ++i) alphas[i] = amp * entry.pattern[i];
    const Eigen::VectorXd means =
        coherent_shortcut(alphas, orthonormalize(cfg.unitary));
    std::vector<Eigen::VectorXd> cdfs(d);
    for (int i = 0; i < d; ++i) {
      const StateSpec mode_spec = StateSpec::coherent(std::sqrt(means[i]));
      const OutcomeDistribution out = detector_response(
          photon_distribution(mode_spec, adaptive_cutoff(mode_spec)), cfg.detector);
      cdfs[i].resize(out.probs.size());
      double acc = 0.0;
      for (int o = 0; o < out.probs.size(); ++o) {
        acc += out.probs[o];
        cdfs[i][o] = acc;
      }
    }
    set.samples.resize(m_draws, d);
    SplitMix64 rng(state_seed);
    for (int a = 0; a < m_draws; ++a)
      for (int i = 0; i < d; ++i) set.samples(a, i) = draw_from_cdf(cdfs[i], rng.uniform());
    set.meta = StateSpec::coherent(amp);
    set.label = 0;
    return set;
  }

  MultimodeState input;
  if (entry.family == StateFamily::SqueezedVacuum) {
    Eigen::VectorXd rs(d);
    for (int i = 0; i < d; ++i) rs[i] = amp * entry.pattern[i];
    input = product_squeezed(rs, cfg.n_max);
    set.meta = StateSpec::squeezed_vacuum(amp);
  } else if (entry.family == StateFamily::LossyFock) {
    const int n = static_cast<int>(std::lround(amp));
    if (n < 1) throw std::invalid_argument("simulate: multimode LossyFock needs n >= 1");
    Eigen::VectorXi main(d);
    for (int i = 0; i < d; ++i) main[i] = n * static_cast<int>(std::lround(entry.pattern[i]));
    std::vector<std::pair<double, Eigen::VectorXi>> parts{{entry.main_weight, main}};
    double loss_total = 0.0;
    for (int i = 0; i < d; ++i) {
      if (main[i] == 0) continue;
      Eigen::VectorXi lost = main;
      lost[i] -= 1;
      parts.emplace_back(entry.loss_weight, lost);
      loss_total += entry.loss_weight;
    }
    input = fock_mixture(parts); // weights renormalized to sum 1
    set.meta = StateSpec::lossy_fock(n, loss_total / (entry.main_weight + loss_total));
  } else {
    throw std::invalid_argument("simulate: family not supported in multimode configs: " +
                                make_single_mode_spec(entry, amp).family_name());
  }

  const MultimodeState evolved = evolve(input, plan);
  SampleSet drawn = sample_multimode(evolved, cfg.detector, m_draws, state_seed);
  set.samples = std::move(drawn.samples);
  set.label = set.meta.nonclassical() ? 1 : 0;
  return set;
}

} // namespace

std::vector<SampleSet> simulate(const DatasetConfig& cfg) {
  std::vector<SampleSet> out;
  MeshPlan plan;
  if (cfg.d_x > 1) {
    if (cfg.unitary.rows() != cfg.d_x)
      throw std::invalid_argument("simulate: multimode config needs a d_x-dim unitary");
    plan = decompose(orthonormalize(cfg.unitary));
  }
  for (size_t e = 0; e < cfg.states.size(); ++e) {
    const StateEntry& entry = cfg.states[e];
    if (cfg.d_x > 1 && entry.pattern.empty())
      throw std::invalid_argument("simulate: multimode entries need a mode pattern");
    const std::vector<double> amps = grid(entry.lo, entry.hi, entry.count, entry.log_grid);
    for (int i = 0; i < entry.count; ++i) {
      std::ostringstream id;
      id << "e" << e << ":" << make_single_mode_spec(entry, amps[i]).family_name() << ":" << i;
      const uint64_t state_seed = derive_seed(cfg.seed, id.str());
      SampleSet set =
          cfg.d_x == 1
              ? simulate_single_mode(entry, amps[i], cfg.detector, cfg.samples_per_state,
                                     state_seed)
              : simulate_multimode(entry, amps[i], cfg, plan, cfg.samples_per_state, state_seed);
      set.state_id = id.str();
      set.seed = state_seed;
      out.push_back(std::move(set));
    }
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write file: " + tmp);
    os << contents;
  }
  std::filesystem::rename(tmp, path);
}

void write_dataset(const std::string& path, const std::vector<SampleSet>& states,
                   const DetectorModel& detector, int d_x) {
  std::ostringstream os;
  for (const auto& s : states) {
    json rec;
    rec["state_id"] = s.state_id;
    rec["family"] = s.meta.family_name();
    rec["params"] = params_json(s.meta);
    rec["label"] = s.label;
    rec["d_x"] = d_x;
    rec["M"] = s.samples.rows();
    std::vector<std::vector<int>> rows(s.samples.rows());
    for (long r = 0; r < s.samples.rows(); ++r)
      rows[r].assign(s.samples.row(r).begin(), s.samples.row(r).end());
    rec["samples"] = rows;
    rec["seed"] = s.seed;
    if (!s.pattern.empty()) rec["pattern"] = s.pattern;
    rec["detector"] = detector_json(detector);
    os << rec.dump() << '\n';
  }
  write_file_atomic(path, os.str());
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset file: " + path);
  Dataset ds;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const std::exception& ex) {
      throw std::invalid_argument("dataset line " + std::to_string(line_no) + ": " + ex.what());
    }
    SampleSet s;
    s.state_id = rec.at("state_id");
    s.meta = params_from_json(family_from_name(rec.at("family")), rec.at("params"));
    s.label = rec.at("label");
    if (s.label != 0 && s.label != 1)
      throw std::invalid_argument("dataset line " + std::to_string(line_no) +
                                  ": label must be 0 or 1");
    const int d = rec.at("d_x");
    const long m = rec.at("M");
    const auto rows = rec.at("samples").get<std::vector<std::vector<int>>>();
    if (static_cast<long>(rows.size()) != m)
      throw std::invalid_argument("dataset line " + std::to_string(line_no) +
                                  ": sample count does not match M");
    s.samples.resize(m, d);
    for (long r = 0; r < m; ++r) {
      if (static_cast<int>(rows[r].size()) != d)
        throw std::invalid_argument("dataset line " + std::to_string(line_no) +
                                    ": sample width does not match d_x");
      for (int c = 0; c < d; ++c) s.samples(r, c) = rows[r][c];
    }
    if (rec.contains("seed")) s.seed = rec.at("seed");
    if (rec.contains("pattern")) s.pattern = rec.at("pattern").get<std::vector<double>>();
    if (ds.states.empty()) {
      ds.detector = detector_from_json(rec.at("detector"));
      ds.d_x = d;
    } else if (d != ds.d_x) {
      throw std::invalid_argument("dataset line " + std::to_string(line_no) +
                                  ": inconsistent d_x");
    }
    ds.states.push_back(std::move(s));
  }
  if (ds.states.empty()) throw std::invalid_argument("dataset file is empty: " + path);
  return ds;
}

Eigen::MatrixXcd load_unitary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open unitary file: " + path);
  json j;
  in >> j;
  const int d = j.at("dim");
  const auto re = j.at("re").get<std::vector<std::vector<double>>>();
  std::vector<std::vector<double>> im;
  if (j.contains("im")) im = j.at("im").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(re.size()) != d)
    throw std::invalid_argument("unitary file: re matrix does not match dim");
  Eigen::MatrixXcd u(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      u(r, c) = {re.at(r).at(c), im.empty() ? 0.0 : im.at(r).at(c)};
  return u;
}

DetectorModel load_povm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open POVM file: " + path);
  json j;
  in >> j;
  const int outcomes = j.at("outcomes");
  const int cutoff = j.at("cutoff");
  const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(rows.size()) != outcomes)
    throw std::invalid_argument("POVM file: matrix row count does not match outcomes");
  Eigen::MatrixXd m(outcomes, cutoff + 1);
  for (int r = 0; r < outcomes; ++r) {
    if (static_cast<int>(rows[r].size()) != cutoff + 1)
      throw std::invalid_argument("POVM file: matrix column count does not match cutoff");
    for (int c = 0; c <= cutoff; ++c) m(r, c) = rows[r][c];
  }
  return DetectorModel::povm_file(m); // validates column sums
}

// ---- checkpoints --------------------------------------------------------------

namespace {

json config_json(const AlClaConfig& c) {
  json j;
  j["d_x"] = c.d_x;
  j["total_order"] = c.total_order;
  j["lambda"] = c.lambda;
  j["lambda_k"] = c.lambda_k;
  j["lr"] = c.lr;
  j["epochs"] = c.epochs;
  j["plateau_scheduler"] = c.plateau_scheduler;
  j["patience"] = c.patience;
  j["min_lr"] = c.min_lr;
  j["upper_triangular_k"] = c.upper_triangular_k;
  j["normalize_by_m"] = c.normalize_by_m;
  j["train_fraction"] = c.train_fraction;
  j["seed"] = c.seed;
  return j;
}

AlClaConfig config_from_json(const json& j) {
  AlClaConfig c;
  c.d_x = j.at("d_x");
  c.total_order = j.at("total_order");
  c.lambda = j.at("lambda");
  c.lambda_k = j.at("lambda_k");
  c.lr = j.at("lr");
  c.epochs = j.at("epochs");
  c.plateau_scheduler = j.at("plateau_scheduler");
  c.patience = j.at("patience");
  c.min_lr = j.at("min_lr");
  c.upper_triangular_k = j.at("upper_triangular_k");
  c.normalize_by_m = j.at("normalize_by_m");
  c.train_fraction = j.at("train_fraction");
  c.seed = j.at("seed");
  return c;
}

json history_json(const std::vector<HistoryRow>& history) {
  json arr = json::array();
  for (const auto& h : history) {
    json r;
    r["epoch"] = h.epoch;
    r["loss"] = h.loss;
    r["lr"] = h.lr;
    r["train_classical"] = h.train.classical.value_or(-1.0);
    r["train_nonclassical"] = h.train.nonclassical.value_or(-1.0);
    r["train_total"] = h.train.total;
    r["test_classical"] = h.test.classical.value_or(-1.0);
    r["test_nonclassical"] = h.test.nonclassical.value_or(-1.0);
    r["test_total"] = h.test.total;
    arr.push_back(r);
  }
  return arr;
}

} // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  json j;
  j["config"] = config_json(ck.config);
  json ks = json::array();
  for (const auto& k : ck.params.k_mats) {
    std::vector<double> row_major;
    for (int r = 0; r < k.rows(); ++r)
      for (int c = 0; c < k.cols(); ++c) row_major.push_back(k(r, c));
    ks.push_back(row_major);
  }
  j["k"] = ks;
  j["theta"] = std::vector<double>(ck.params.theta.begin(), ck.params.theta.end());
  j["theta_amplify"] = ck.params.theta_amplify;
  json basis = json::array();
  for (const auto& term : ck.basis.terms) {
    json facs = json::array();
    for (const auto& f : term.factors)
      facs.push_back(json{{"mode", f.mode}, {"order", f.order}, {"exponent", f.exponent}});
    basis.push_back(facs);
  }
  j["basis"] = basis;
  j["history"] = history_json(ck.history);
  j["train_indices"] = ck.train_indices;
  j["test_indices"] = ck.test_indices;
  j["best_epoch"] = ck.best_epoch;
  write_file_atomic(path, j.dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open checkpoint file: " + path);
  json j;
  in >> j;
  Checkpoint ck;
  ck.config = config_from_json(j.at("config"));
  ck.basis = DecoderBasis::build(ck.config.d_x, ck.config.total_order);
  // sanity: stored basis must match the rebuilt enumeration
  const auto& stored = j.at("basis");
  if (static_cast<int>(stored.size()) != ck.basis.size())
    throw std::invalid_argument("checkpoint: basis size mismatch");
  for (const auto& k_flat : j.at("k")) {
    Eigen::MatrixXd k(ck.config.d_x, ck.config.d_x);
    const auto flat = k_flat.get<std::vector<double>>();
    if (static_cast<int>(flat.size()) != ck.config.d_x * ck.config.d_x)
      throw std::invalid_argument("checkpoint: K matrix size mismatch");
    for (int r = 0; r < ck.config.d_x; ++r)
      for (int c = 0; c < ck.config.d_x; ++c) k(r, c) = flat[r * ck.config.d_x + c];
    ck.params.k_mats.push_back(k);
  }
  const auto theta = j.at("theta").get<std::vector<double>>();
  ck.params.theta = Eigen::Map<const Eigen::VectorXd>(theta.data(), theta.size());
  ck.params.theta_amplify = j.at("theta_amplify");
  for (const auto& r : j.at("history")) {
    HistoryRow h;
    h.epoch = r.at("epoch");
    h.loss = r.at("loss");
    h.lr = r.at("lr");
    auto opt = [](double v) { return v < 0.0 ? std::optional<double>{} : std::optional<double>{v}; };
    h.train.classical = opt(r.at("train_classical"));
    h.train.nonclassical = opt(r.at("train_nonclassical"));
    h.train.total = r.at("train_total");
    h.test.classical = opt(r.at("test_classical"));
    h.test.nonclassical = opt(r.at("test_nonclassical"));
    h.test.total = r.at("test_total");
    ck.history.push_back(h);
  }
  ck.train_indices = j.at("train_indices").get<std::vector<int>>();
  ck.test_indices = j.at("test_indices").get<std::vector<int>>();
  ck.best_epoch = j.at("best_epoch");
  return ck;
}

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& history) {
  std::ostringstream os;
  os << "epoch,loss,lr,train_classical,train_nonclassical,train_total,"
        "test_classical,test_nonclassical,test_total\n";
  for (const auto& h : history)
    os << h.epoch << ',' << h.loss << ',' << h.lr << ',' << h.train.classical.value_or(-1.0)
       << ',' << h.train.nonclassical.value_or(-1.0) << ',' << h.train.total << ','
       << h.test.classical.value_or(-1.0) << ',' << h.test.nonclassical.value_or(-1.0) << ','
       << h.test.total << '\n';
  write_file_atomic(path, os.str());
}

// ---- witness dispatch ------------------------------------------------------------

std::vector<std::string> valid_witnesses(const Dataset& ds) {
  if (ds.d_x > 1) return {"moment_matrix", "mm_gen_klyshko"};
  if (ds.detector.kind == DetectorKind::ClickMultiplex)
    return {"qb", "qb3", "gen_klyshko_click"};
  return {"mandel_q", "q3", "klyshko", "gen_klyshko"};
}

std::vector<int> dataset_labels(const Dataset& ds) {
  std::vector<int> labels;
  labels.reserve(ds.states.size());
  for (const auto& s : ds.states) labels.push_back(s.label);
  return labels;
}

std::vector<WitnessReport> evaluate_witness(const Dataset& ds, const std::string& witness) {
  const std::vector<std::string> valid = valid_witnesses(ds);
  if (std::find(valid.begin(), valid.end(), witness) == valid.end()) {
    std::string msg = "witness '" + witness + "' is not applicable to this dataset; valid: ";
    for (size_t i = 0; i < valid.size(); ++i) msg += (i ? ", " : "") + valid[i];
    throw std::invalid_argument(msg);
  }
  const int n_out = ds.detector.outcome_count();
  std::vector<WitnessReport> reports;
  reports.reserve(ds.states.size());
  for (const auto& s : ds.states) {
    if (witness == "mandel_q") {
      reports.push_back(mandel_q_empirical(s.samples));
    } else if (witness == "q3") {
      reports.push_back(q3_empirical(s.samples));
    } else if (witness == "klyshko") {
      reports.push_back(klyshko_min_empirical(s.samples, n_out));
    } else if (witness == "gen_klyshko") {
      const WitnessReport a =
          gen_klyshko_pnr_empirical(s.samples, n_out, IndexKind::Integer);
      const WitnessReport b =
          gen_klyshko_pnr_empirical(s.samples, n_out, IndexKind::HalfInteger);
      reports.push_back(a.value + a.tol <= b.value + b.tol ? a : b);
    } else if (witness == "qb") {
      reports.push_back(qb_empirical(s.samples, ds.detector.bins));
    } else if (witness == "qb3") {
      reports.push_back(qb3_empirical(s.samples, ds.detector.bins));
    } else if (witness == "gen_klyshko_click") {
      const WitnessReport a =
          gen_klyshko_click_empirical(s.samples, ds.detector.bins, IndexKind::Integer);
      const WitnessReport b =
          gen_klyshko_click_empirical(s.samples, ds.detector.bins, IndexKind::HalfInteger);
      reports.push_back(a.value + a.tol <= b.value + b.tol ? a : b);
    } else if (witness == "moment_matrix") {
      reports.push_back(moment_matrix_empirical(s.samples));
    } else if (witness == "mm_gen_klyshko") {
      const int base = std::max(2, n_out - 1);
      const WitnessReport a =
          multimode_klyshko_empirical(s.samples, base, IndexKind::Integer, 32);
      const WitnessReport b =
          multimode_klyshko_empirical(s.samples, base, IndexKind::HalfInteger, 32);
      reports.push_back(a.value + a.tol <= b.value + b.tol ? a : b);
    }
  }
  return reports;
}

TradeoffCurve witness_curve(const Dataset& ds, const std::string& witness,
                            const std::vector<double>& bias_grid) {
  return sweep_bias(witness, evaluate_witness(ds, witness), dataset_labels(ds), bias_grid);
}

TradeoffCurve lambda_sweep(const std::vector<SampleSet>& states, AlClaConfig config,
                           const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty()) throw std::invalid_argument("lambda_sweep: empty grid");
  TradeoffCurve curve;
  curve.name = "alcla_L" + std::to_string(config.total_order);
  for (double lambda : lambda_grid) {
    config.lambda = lambda;
    const TrainResult result = train(states, config);
    const HistoryRow& last = result.history.back();
    const AccuracyReport& acc =
        result.best_epoch > 0 ? result.history[result.best_epoch - 1].train : last.train;
    curve.points.push_back(
        {lambda, acc.classical.value_or(0.0), acc.nonclassical.value_or(0.0), acc.total});
  }
  return curve;
}

} // namespace qnc
