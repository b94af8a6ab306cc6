// Command-line front end: dataset simulation, classifier training and
// evaluation, witness bias sweeps, and lambda sweeps.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qnc/alcla.hpp"
#include "qnc/dataset.hpp"
#include "qnc/metrics.hpp"

using namespace qnc;

namespace {

std::vector<double> parse_grid(const std::string& spec) {
  // "lo:hi:count" linspace, or comma-separated values
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    double lo, hi;
    int count;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
      throw std::invalid_argument("bad grid spec: " + spec);
    for (int i = 0; i < count; ++i)
      grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return grid;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) grid.push_back(std::stod(tok));
  if (grid.empty()) throw std::invalid_argument("bad grid spec: " + spec);
  return grid;
}

AlClaConfig model_config_from_file(const std::string& path, int d_x) {
  AlClaConfig cfg;
  cfg.d_x = d_x;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model config: " + path);
  nlohmann::json j;
  in >> j;
  cfg.total_order = j.value("total_order", cfg.total_order);
  cfg.lambda = j.value("lambda", cfg.lambda);
  cfg.lambda_k = j.value("lambda_k", cfg.lambda_k);
  cfg.lr = j.value("lr", cfg.lr);
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.plateau_scheduler = j.value("plateau_scheduler", cfg.plateau_scheduler);
  cfg.patience = j.value("patience", cfg.patience);
  cfg.min_lr = j.value("min_lr", cfg.min_lr);
  cfg.upper_triangular_k = j.value("upper_triangular_k", cfg.upper_triangular_k);
  cfg.normalize_by_m = j.value("normalize_by_m", cfg.normalize_by_m);
  cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

int run_simulate(const std::string& config_path, const std::string& preset_name,
                 const std::string& out, int samples, uint64_t seed) {
  DatasetConfig cfg = preset_name.empty() ? load_dataset_config(config_path)
                                          : preset(preset_name, samples, seed);
  if (!preset_name.empty()) {
    cfg.samples_per_state = samples;
    cfg.seed = seed;
  }
  const std::vector<SampleSet> states = simulate(cfg);
  write_dataset(out, states, cfg.detector, cfg.d_x);
  int n_cl = 0, n_ncl = 0;
  for (const auto& s : states) (s.label == 0 ? n_cl : n_ncl)++;
  std::cout << "wrote " << states.size() << " states (" << n_cl << " classical, " << n_ncl
            << " nonclassical) to " << out << "\n";
  return 0;
}

int run_train(const std::string& dataset_path, const std::string& model_config,
              const std::string& out, uint64_t seed, bool seed_given) {
  const Dataset ds = read_dataset(dataset_path);
  AlClaConfig cfg = model_config_from_file(model_config, ds.d_x);
  if (seed_given) cfg.seed = seed;
  const TrainResult result = train(ds.states, cfg);

  Checkpoint ck{cfg,
                result.params,
                result.basis,
                result.history,
                result.train_indices,
                result.test_indices,
                result.best_epoch};
  save_checkpoint(out, ck);
  write_history_csv(out + ".history.csv", result.history);

  const DecisionRule rule = extract_rule(result.params, result.basis);
  write_file_atomic(out + ".rule.txt", rule.text() + "\n");

  const HistoryRow& last =
      result.best_epoch > 0 ? result.history[result.best_epoch - 1] : result.history.back();
  std::cout << "trained " << result.history.size() << " epochs; train acc "
            << last.train.total;
  if (!result.test_indices.empty()) std::cout << ", test acc " << last.test.total;
  if (result.best_epoch > 0) std::cout << " (best epoch " << result.best_epoch << ")";
  std::cout << "\nlearned rule: " << rule.text() << "\n";
  return 0;
}

int run_evaluate(const std::string& checkpoint_path, const std::string& dataset_path,
                 const std::string& out) {
  const Checkpoint ck = load_checkpoint(checkpoint_path);
  const Dataset ds = read_dataset(dataset_path);
  if (ds.d_x != ck.config.d_x)
    throw std::invalid_argument("evaluate: dataset d_x does not match the checkpoint");
  const std::vector<ForwardResult> ys = predict(ds.states, ck.params, ck.basis, ck.config);

  std::vector<int> pred, labels;
  std::ostringstream os;
  os << "state_id,label,y,f,predicted\n";
  for (size_t i = 0; i < ds.states.size(); ++i) {
    const int p = ys[i].y > 0.5 ? 1 : 0;
    pred.push_back(p);
    labels.push_back(ds.states[i].label);
    os << ds.states[i].state_id << ',' << ds.states[i].label << ',' << ys[i].y << ','
       << ys[i].f << ',' << p << '\n';
  }
  if (!out.empty()) write_file_atomic(out, os.str());
  const AccuracyReport acc = accuracy_report(pred, labels);
  std::cout << "classical acc "
            << (acc.classical ? std::to_string(*acc.classical) : std::string("n/a"))
            << ", nonclassical acc "
            << (acc.nonclassical ? std::to_string(*acc.nonclassical) : std::string("n/a"))
            << ", total " << acc.total << "\n";
  return 0;
}

int run_witness(const std::string& dataset_path, const std::string& witness,
                const std::string& bias_grid, const std::string& out) {
  const Dataset ds = read_dataset(dataset_path);
  const std::vector<double> grid =
      bias_grid.empty() ? parse_grid("-0.5:0.5:41") : parse_grid(bias_grid);
  const TradeoffCurve curve = witness_curve(ds, witness, grid);
  std::ostringstream os;
  write_curve_csv(os, {curve});
  if (!out.empty()) write_file_atomic(out, os.str());
  else std::cout << os.str();
  return 0;
}

int run_sweep(const std::string& dataset_path, const std::string& model_config,
              const std::string& lambda_grid, const std::string& out, uint64_t seed,
              bool seed_given) {
  const Dataset ds = read_dataset(dataset_path);
  AlClaConfig cfg = model_config_from_file(model_config, ds.d_x);
  if (seed_given) cfg.seed = seed;
  const std::vector<double> grid = lambda_grid.empty()
                                       ? std::vector<double>{0, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2}
                                       : parse_grid(lambda_grid);
  const TradeoffCurve curve = lambda_sweep(ds.states, cfg, grid);
  std::ostringstream os;
  write_curve_csv(os, {curve});
  if (!out.empty()) write_file_atomic(out, os.str());
  else std::cout << os.str();
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon-statistics nonclassicality toolkit"};
  app.require_subcommand(1);

  std::string config_path, preset_name, dataset_path, model_config, checkpoint_path;
  std::string out, witness, bias_grid, lambda_grid;
  int samples = 1000;
  uint64_t seed = 12345;
  bool seed_given = false;

  auto* sim = app.add_subcommand("simulate", "generate a sampled dataset");
  sim->add_option("--config", config_path, "dataset config JSON");
  sim->add_option("--preset", preset_name, "table1|table2|table3|table4");
  sim->add_option("--out", out, "output JSON-Lines path")->required();
  sim->add_option("--samples", samples, "measurement samples per state");
  sim->add_option("--seed", seed, "master seed");

  auto* tr = app.add_subcommand("train", "train the algebraic classifier");
  tr->add_option("--dataset", dataset_path, "dataset JSON-Lines")->required();
  tr->add_option("--config", model_config, "model config JSON");
  tr->add_option("--out", out, "checkpoint path")->required();
  tr->add_option("--seed", seed, "training seed")->each([&](const std::string&) {
    seed_given = true;
  });

  auto* ev = app.add_subcommand("evaluate", "evaluate a checkpoint on a dataset");
  ev->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")->required();
  ev->add_option("--dataset", dataset_path, "dataset JSON-Lines")->required();
  ev->add_option("--out", out, "per-state predictions CSV");

  auto* wit = app.add_subcommand("witness", "traditional witness bias sweep");
  wit->add_option("--dataset", dataset_path, "dataset JSON-Lines")->required();
  wit->add_option("--witness", witness, "witness name")->required();
  wit->add_option("--bias-grid", bias_grid, "lo:hi:count or comma list");
  wit->add_option("--out", out, "output CSV");

  auto* sw = app.add_subcommand("sweep", "lambda sweep of the classifier");
  sw->add_option("--dataset", dataset_path, "dataset JSON-Lines")->required();
  sw->add_option("--config", model_config, "model config JSON");
  sw->add_option("--lambda-grid", lambda_grid, "lo:hi:count or comma list");
  sw->add_option("--out", out, "output CSV");
  sw->add_option("--seed", seed, "training seed")->each([&](const std::string&) {
    seed_given = true;
  });

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      if (config_path.empty() == preset_name.empty())
        throw std::invalid_argument("simulate: pass exactly one of --config / --preset");
      return run_simulate(config_path, preset_name, out, samples, seed);
    }
    if (tr->parsed()) return run_train(dataset_path, model_config, out, seed, seed_given);
    if (ev->parsed()) return run_evaluate(checkpoint_path, dataset_path, out);
    if (wit->parsed()) return run_witness(dataset_path, witness, bias_grid, out);
    if (sw->parsed())
      return run_sweep(dataset_path, model_config, lambda_grid, out, seed, seed_given);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
