#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qnc/alcla.hpp"
#include "qnc/detectors.hpp"
#include "qnc/metrics.hpp"
#include "qnc/witnesses.hpp"

namespace qnc {

/// One config row: a family swept over an amplitude grid, optionally spread
/// over modes by a 0/1 (or fractional) pattern.
struct StateEntry {
  StateFamily family = StateFamily::Coherent;
  int count = 1;
  double lo = 0.0;
  double hi = 0.0;
  bool log_grid = false;          // geometric instead of linear spacing
  std::vector<double> pattern;    // per-mode multipliers; empty = single mode
  double alpha2_ratio = 0.5;      // MixedCoherent: alpha2 = ratio * alpha1
  double p_loss = 0.1;            // single-mode LossyFock
  double main_weight = 0.9;       // multimode LossyFock mixtures
  double loss_weight = 0.0167;    // per single-loss component
};

struct DatasetConfig {
  std::string name;
  DetectorModel detector;
  std::vector<StateEntry> states;
  int samples_per_state = 1000;
  uint64_t seed = 12345;
  int d_x = 1;
  Eigen::MatrixXcd unitary; // multimode circuits (orthonormalized on use)
  int n_max = 12;           // Fock truncation for non-Fock multimode inputs
};

/// Built-in compositions: table1 (ideal PNR, cutoff 29), table2 (binned PNR
/// 0-4+), table3 (8-bin time multiplexing), table4 (6-mode circuit).
DatasetConfig preset(const std::string& name, int samples_per_state = 1000,
                     uint64_t seed = 12345);

DatasetConfig load_dataset_config(const std::string& path);

/// Exact outcome distributions per state, then seeded sampling.
std::vector<SampleSet> simulate(const DatasetConfig& config);

struct Dataset {
  std::vector<SampleSet> states;
  DetectorModel detector;
  int d_x = 1;
};

void write_dataset(const std::string& path, const std::vector<SampleSet>& states,
                   const DetectorModel& detector, int d_x);
Dataset read_dataset(const std::string& path);

Eigen::MatrixXcd load_unitary(const std::string& path);
DetectorModel load_povm(const std::string& path);

struct Checkpoint {
  AlClaConfig config;
  AlClaParams params;
  DecoderBasis basis;
  std::vector<HistoryRow> history;
  std::vector<int> train_indices;
  std::vector<int> test_indices;
  int best_epoch = -1;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);
void write_history_csv(const std::string& path, const std::vector<HistoryRow>& history);

/// Witnesses evaluable on a dataset's detector kind.
std::vector<std::string> valid_witnesses(const Dataset& ds);

/// Empirical witness reports, one per state. Throws (naming the valid
/// witnesses) on a witness/detector mismatch.
std::vector<WitnessReport> evaluate_witness(const Dataset& ds, const std::string& witness);

std::vector<int> dataset_labels(const Dataset& ds);

/// Witness trade-off curve over a bias grid.
TradeoffCurve witness_curve(const Dataset& ds, const std::string& witness,
                            const std::vector<double>& bias_grid);

/// One full training run per lambda; train-split accuracies per point.
TradeoffCurve lambda_sweep(const std::vector<SampleSet>& states, AlClaConfig config,
                           const std::vector<double>& lambda_grid);

/// Atomic file write (temp + rename).
void write_file_atomic(const std::string& path, const std::string& contents);

} // namespace qnc
