#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qnc/dataset.hpp"

using namespace qnc;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

TEST_CASE("preset compositions match the published tables") {
  const DatasetConfig t1 = preset("table1", 10, 1);
  int n1 = 0;
  for (const auto& e : t1.states) n1 += e.count;
  CHECK(n1 == 86);

  const std::vector<SampleSet> s1 = simulate(t1);
  int cl = 0, ncl = 0;
  for (const auto& s : s1) (s.label == 0 ? cl : ncl)++;
  CHECK(cl == 54);
  CHECK(ncl == 32);
  CHECK(s1.size() == 86);

  const DatasetConfig t2 = preset("table2", 10, 1);
  const std::vector<SampleSet> s2 = simulate(t2);
  cl = ncl = 0;
  for (const auto& s : s2) (s.label == 0 ? cl : ncl)++;
  CHECK(cl == 27);
  CHECK(ncl == 22);

  const DatasetConfig t3 = preset("table3", 10, 1);
  CHECK(t3.detector.kind == DetectorKind::ClickMultiplex);
  CHECK(t3.detector.bins == 8);
  const std::vector<SampleSet> s3 = simulate(t3);
  CHECK(s3.size() == 49);

  CHECK_THROWS(preset("table9"));
}

TEST_CASE("table4 composition and label split") {
  const DatasetConfig t4 = preset("table4", 5, 2);
  CHECK(t4.d_x == 6);
  const std::vector<SampleSet> s4 = simulate(t4);
  CHECK(s4.size() == 75);
  int cl = 0, ncl = 0;
  for (const auto& s : s4) (s.label == 0 ? cl : ncl)++;
  CHECK(cl == 38);
  CHECK(ncl == 37);
  for (const auto& s : s4) {
    CHECK(s.samples.rows() == 5);
    CHECK(s.samples.cols() == 6);
    CHECK(s.samples.maxCoeff() <= 4); // binned detector outcomes 0..4
  }
}

TEST_CASE("dataset files round-trip byte-identically") {
  const DatasetConfig cfg = preset("table1", 3, 99);
  const std::vector<SampleSet> states = simulate(cfg);
  TempFile f1("qnc_ds1.jsonl"), f2("qnc_ds2.jsonl");
  write_dataset(f1.path, states, cfg.detector, cfg.d_x);
  const Dataset ds = read_dataset(f1.path);
  CHECK(ds.states.size() == states.size());
  CHECK(ds.d_x == 1);
  CHECK(ds.detector.kind == DetectorKind::IdealPnr);
  write_dataset(f2.path, ds.states, ds.detector, ds.d_x);
  CHECK(slurp(f1.path) == slurp(f2.path));
}

TEST_CASE("simulate is deterministic per seed and stable under appends") {
  DatasetConfig a = preset("table2", 4, 7);
  const std::vector<SampleSet> s1 = simulate(a);
  const std::vector<SampleSet> s2 = simulate(a);
  for (size_t i = 0; i < s1.size(); ++i) CHECK((s1[i].samples == s2[i].samples));

  // appending a state entry must not perturb earlier records
  DatasetConfig b = a;
  b.states.push_back({StateFamily::Thermal, 2, 0.1, 0.2, false, {}, 0.5, 0.1, 0.9, 0.0167});
  const std::vector<SampleSet> s3 = simulate(b);
  for (size_t i = 0; i < s1.size(); ++i) CHECK((s1[i].samples == s3[i].samples));
}

TEST_CASE("witness dispatch honors detector kinds") {
  const DatasetConfig t1 = preset("table1", 50, 3);
  Dataset ds;
  ds.states = simulate(t1);
  ds.detector = t1.detector;
  ds.d_x = 1;
  CHECK_THROWS_WITH_AS(evaluate_witness(ds, "qb"), doctest::Contains("valid"),
                       std::invalid_argument);
  const std::vector<WitnessReport> reps = evaluate_witness(ds, "mandel_q");
  CHECK(reps.size() == ds.states.size());

  const std::vector<double> grid{-0.5, 0.0, 0.5};
  const TradeoffCurve curve = witness_curve(ds, "mandel_q", grid);
  CHECK(curve.points.size() == 3);
}

TEST_CASE("click witnesses run on click datasets") {
  const DatasetConfig t3 = preset("table3", 60, 5);
  Dataset ds;
  ds.states = simulate(t3);
  ds.detector = t3.detector;
  ds.d_x = 1;
  for (const std::string w : {"qb", "qb3", "gen_klyshko_click"}) {
    const std::vector<WitnessReport> reps = evaluate_witness(ds, w);
    CHECK(reps.size() == ds.states.size());
  }
  CHECK_THROWS(evaluate_witness(ds, "mandel_q"));
}

TEST_CASE("unitary and POVM file loading") {
  TempFile uf("qnc_unitary.json");
  write_file_atomic(uf.path,
                    R"({"dim": 2, "re": [[0.6, -0.8], [0.8, 0.6]], "im": [[0,0],[0,0]]})");
  const Eigen::MatrixXcd u = load_unitary(uf.path);
  CHECK(u.rows() == 2);
  CHECK(std::abs(u(0, 0).real() - 0.6) < 1e-12);

  TempFile pf("qnc_povm.json");
  write_file_atomic(pf.path,
                    R"({"outcomes": 2, "cutoff": 1, "matrix": [[1.0, 0.3], [0.0, 0.7]]})");
  const DetectorModel povm = load_povm(pf.path);
  CHECK(povm.kind == DetectorKind::PovmFile);
  CHECK(povm.povm(1, 1) == doctest::Approx(0.7));

  TempFile bad("qnc_povm_bad.json");
  write_file_atomic(bad.path,
                    R"({"outcomes": 2, "cutoff": 1, "matrix": [[1.0, 0.3], [0.1, 0.7]]})");
  CHECK_THROWS(load_povm(bad.path));
}

TEST_CASE("checkpoints round-trip through JSON") {
  const DatasetConfig cfg = preset("table1", 30, 17);
  const std::vector<SampleSet> all_states = simulate(cfg);
  std::vector<SampleSet> states;
  for (size_t i = 0; i < all_states.size(); i += 4) states.push_back(all_states[i]);
  bool has_cl = false, has_ncl = false;
  for (const auto& s : states) (s.label == 0 ? has_cl : has_ncl) = true;
  REQUIRE((has_cl && has_ncl));

  AlClaConfig mc;
  mc.d_x = 1;
  mc.total_order = 2;
  mc.epochs = 30;
  mc.seed = 5;
  const TrainResult tr = train(states, mc);
  Checkpoint ck{mc,       tr.params,       tr.basis,      tr.history,
                tr.train_indices, tr.test_indices, tr.best_epoch};
  TempFile f("qnc_ck.json");
  save_checkpoint(f.path, ck);
  const Checkpoint back = load_checkpoint(f.path);
  CHECK(back.params.theta.size() == tr.params.theta.size());
  CHECK((back.params.theta - tr.params.theta).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.params.theta_amplify == tr.params.theta_amplify);
  CHECK(back.train_indices == tr.train_indices);
  CHECK(back.history.size() == tr.history.size());

  // predictions from the reloaded checkpoint match exactly
  const std::vector<ForwardResult> y1 = predict(states, tr.params, tr.basis, mc);
  const std::vector<ForwardResult> y2 = predict(states, back.params, back.basis, back.config);
  for (size_t i = 0; i < y1.size(); ++i) CHECK(y1[i].y == y2[i].y);
}

TEST_CASE("custom config files parse") {
  TempFile f("qnc_cfg.json");
  write_file_atomic(f.path, R"({
    "name": "mini",
    "detector": {"kind": "ideal_pnr", "cutoff": 10},
    "samples_per_state": 25,
    "seed": 4,
    "states": [
      {"family": "coherent", "count": 3, "range": [0.0, 1.0]},
      {"family": "spats", "count": 2, "range": [0.3, 0.4]}
    ]
  })");
  const DatasetConfig cfg = load_dataset_config(f.path);
  CHECK(cfg.states.size() == 2);
  const std::vector<SampleSet> states = simulate(cfg);
  CHECK(states.size() == 5);
  CHECK(states[0].samples.rows() == 25);
}

TEST_CASE("lambda sweep produces one point per grid value") {
  const DatasetConfig cfg = preset("table1", 40, 23);
  std::vector<SampleSet> states = simulate(cfg);
  AlClaConfig mc;
  mc.d_x = 1;
  mc.total_order = 2;
  mc.epochs = 40;
  mc.seed = 2;
  const TradeoffCurve curve = lambda_sweep(states, mc, {0.0, 0.8});
  CHECK(curve.points.size() == 2);
  CHECK(curve.points[0].param == 0.0);
  CHECK(curve.points[1].param == 0.8);
  for (const auto& p : curve.points) {
    CHECK(p.acc_classical >= 0.0);
    CHECK(p.acc_classical <= 1.0);
  }
}

TEST_CASE("evaluating a checkpoint on its own dataset matches the final history row") {
  const DatasetConfig cfg = preset("table2", 120, 5);
  const std::vector<SampleSet> states = simulate(cfg);
  AlClaConfig mc;
  mc.d_x = 1;
  mc.total_order = 2;
  mc.epochs = 60;
  mc.seed = 9;
  const TrainResult r = train(states, mc);

  const std::vector<ForwardResult> ys = predict(states, r.params, r.basis, mc);
  auto split_acc = [&](const std::vector<int>& idx) {
    std::vector<int> pred, truth;
    for (int i : idx) {
      pred.push_back(ys[i].y > 0.5 ? 1 : 0);
      truth.push_back(states[i].label);
    }
    return accuracy_report(pred, truth);
  };
  const AccuracyReport train_acc = split_acc(r.train_indices);
  const AccuracyReport test_acc = split_acc(r.test_indices);
  CHECK(train_acc.total == r.history.back().train.total);
  CHECK(test_acc.total == r.history.back().test.total);
}

TEST_CASE("checkpoint interpolates to a freshly resampled dataset") {
  const DatasetConfig cfg = preset("table2", 500, 21);
  const std::vector<SampleSet> states = simulate(cfg);
  AlClaConfig mc;
  mc.d_x = 1;
  mc.total_order = 2;
  mc.seed = 2;
  const TrainResult r = train(states, mc);
  const double trained_total = r.history.back().train.total;

  DatasetConfig fresh = cfg;
  fresh.seed = 2121; // same states, new samples
  const std::vector<SampleSet> resampled = simulate(fresh);
  const std::vector<ForwardResult> ys = predict(resampled, r.params, r.basis, mc);
  std::vector<int> pred, truth;
  for (size_t i = 0; i < resampled.size(); ++i) {
    pred.push_back(ys[i].y > 0.5 ? 1 : 0);
    truth.push_back(resampled[i].label);
  }
  const AccuracyReport acc = accuracy_report(pred, truth);
  CHECK(std::abs(acc.total - trained_total) <= 0.10);
}

TEST_CASE("classical accuracy rises with lambda (Spearman over 5 seeds)") {
  const std::vector<double> grid{0, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2};
  std::vector<double> mean_cl(grid.size(), 0.0);
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const DatasetConfig cfg = preset("table1", 1000, 2000 + seed);
    const std::vector<SampleSet> states = simulate(cfg);
    AlClaConfig mc;
    mc.d_x = 1;
    mc.total_order = 2;
    mc.seed = seed;
    mc.plateau_scheduler = false;
    const TradeoffCurve c = lambda_sweep(states, mc, grid);
    for (size_t i = 0; i < grid.size(); ++i) mean_cl[i] += c.points[i].acc_classical / 5.0;
  }
  CHECK(spearman(grid, mean_cl) >= 0.6);
}

TEST_CASE("configs reference POVM files by path") {
  TempFile pf("qnc_det_povm.json");
  write_file_atomic(pf.path,
                    R"({"outcomes": 3, "cutoff": 2,
                        "matrix": [[1.0, 0.2, 0.1], [0.0, 0.8, 0.3], [0.0, 0.0, 0.6]]})");
  TempFile cf("qnc_det_cfg.json");
  write_file_atomic(cf.path, R"({
    "name": "povm_mini",
    "detector": {"kind": "povm", "file": ")" + pf.path + R"("},
    "samples_per_state": 10, "seed": 2,
    "states": [{"family": "lossy_fock", "count": 2, "range": [1, 2], "p_loss": 0.3}]
  })");
  const DatasetConfig cfg = load_dataset_config(cf.path);
  CHECK(cfg.detector.kind == DetectorKind::PovmFile);
  const std::vector<SampleSet> states = simulate(cfg);
  CHECK(states.size() == 2);
  CHECK(states[0].samples.maxCoeff() <= 2);
}

TEST_CASE("classifier sweep dominates click witnesses at matched classical accuracies") {
  const DatasetConfig cfg = preset("table3", 1000, 4242);
  Dataset ds;
  ds.states = simulate(cfg);
  ds.detector = cfg.detector;
  ds.d_x = 1;
  std::vector<double> grid;
  for (int i = 0; i <= 80; ++i) grid.push_back(-2.0 + 4.0 * i / 80.0);
  const TradeoffCurve qb_curve = witness_curve(ds, "qb", grid);
  const TradeoffCurve qb3_curve = witness_curve(ds, "qb3", grid);
  AlClaConfig mc;
  mc.d_x = 1;
  mc.total_order = 3;
  mc.seed = 7;
  const TradeoffCurve ac = lambda_sweep(ds.states, mc, {0, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2});
  for (double level : {0.70, 0.80, 0.90}) {
    CHECK(ac.best_nonclassical_at(level) >= qb_curve.best_nonclassical_at(level) - 0.05);
    CHECK(ac.best_nonclassical_at(level) >= qb3_curve.best_nonclassical_at(level) - 0.05);
  }
}
