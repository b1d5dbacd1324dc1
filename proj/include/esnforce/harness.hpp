#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "esnforce/config.hpp"
#include "esnforce/reservoir.hpp"

namespace esnforce {

enum class Phase { training = 0, prediction = 1 };

struct StepTrace {
  long step = 0;
  Phase phase = Phase::training;
  double f = 0.0;       // target
  double z = 0.0;       // network output
  double e = 0.0;       // prior error (training) / z - f (prediction)
  double w_norm = 0.0;  // ||w_out|| after the step
  std::array<double, 10> w_sample{};
  std::array<double, 3> node_sample{};
};

struct RunRecord {
  ExperimentConfig config;
  std::vector<StepTrace> steps;
  std::array<int, 10> w_indices{};
  std::array<int, 3> node_indices{};
  double train_mse = 0.0;
  std::optional<double> predict_mse;
  std::optional<long> diverged_at;
  double wall_seconds = 0.0;
};

/// Mean of squared differences. Throws std::invalid_argument on length
/// mismatch or empty input.
double mse(std::span<const double> a, std::span<const double> b);

/// Runs the full experiment: build the network, online training over
/// train_steps, then autonomous prediction over predict_steps with the
/// learner frozen. During training the recorded output z(k) uses the
/// post-update readout, and the feedback carries that output. A numeric
/// divergence ends the run early with diverged_at set instead of throwing.
/// An optional trained-model sink receives the model at the phase boundary.
RunRecord run_experiment(const ExperimentConfig& cfg,
                         EsnModel* trained_model = nullptr);

struct SweepAggregate {
  double train_mse_median = 0.0;
  double train_mse_min = 0.0;
  double train_mse_max = 0.0;
  double predict_mse_median = 0.0;
  double predict_mse_min = 0.0;
  double predict_mse_max = 0.0;
  int diverged_count = 0;
  int run_count = 0;
};

struct SweepResult {
  std::vector<RunRecord> runs;  // one per seed, in seed-list order
  SweepAggregate aggregate;     // diverged runs excluded from the medians
};

/// Independent runs of `cfg` with each listed seed, optionally in parallel.
/// Results are independent of execution order.
SweepResult seed_sweep(const ExperimentConfig& cfg,
                       std::span<const std::uint64_t> seeds, int jobs = 1);

/// Earliest training step index (1-based) after which the relative spread of
/// ||w_out|| within every subsequent 100-step window stays below rel_tol;
/// nullopt if no such step exists.
std::optional<long> convergence_step(const RunRecord& record, double rel_tol);

/// Per-run trace CSV: step,phase,f,z,e,w_norm,w_0..w_9,node_0..node_2
void write_run_csv(const RunRecord& record, std::ostream& out);

/// Sweep summary CSV: seed,method,train_mse,predict_mse,converge_step,diverged
void write_sweep_summary_csv(std::span<const RunRecord> runs,
                             std::ostream& out);

}  // namespace esnforce
