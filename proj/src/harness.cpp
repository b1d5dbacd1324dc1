#include "esnforce/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "esnforce/learners.hpp"
#include "esnforce/mackey_glass.hpp"

namespace esnforce {

namespace {

constexpr double kSummaryConvergenceTol = 1e-3;

void write_double(std::ostream& out, double d) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  out.write(buf, p - buf);
}

double mean_sq_error(const std::vector<StepTrace>& steps, Phase phase) {
  double acc = 0.0;
  long n = 0;
  for (const auto& s : steps) {
    if (s.phase != phase) continue;
    const double d = s.z - s.f;
    acc += d * d;
    ++n;
  }
  return n > 0 ? acc / static_cast<double>(n) : 0.0;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("mse: length mismatch");
  if (a.empty()) throw std::invalid_argument("mse: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

RunRecord run_experiment(const ExperimentConfig& cfg, EsnModel* trained_model) {
  config_validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.config = cfg;
  rec.steps.reserve(static_cast<std::size_t>(cfg.train_steps) +
                    static_cast<std::size_t>(cfg.predict_steps));

  SeededRng rng(cfg.seed);
  EsnModel model = build_esn(cfg, rng);
  ReservoirState state(cfg.n_neurons);

  SeededRng trace_rng = rng.substream("trace");
  for (auto& idx : rec.w_indices) {
    idx = static_cast<int>(trace_rng.uniform(0.0, cfg.n_neurons));
  }
  for (auto& idx : rec.node_indices) {
    idx = static_cast<int>(trace_rng.uniform(0.0, cfg.n_neurons));
  }

  MackeyGlass mgs(cfg.mgs_tau, cfg.mgs_init);
  for (long i = 0; i < cfg.washout_steps; ++i) mgs.next();

  const bool uses_rls = cfg.method != Method::composite_lms;
  const bool uses_bank = cfg.method != Method::rls_force;
  RlsState rls =
      uses_rls ? RlsState::init(cfg.n_neurons, cfg.rls_init) : RlsState{};
  FilterBank bank = uses_bank ? FilterBank::init(cfg.n_neurons, cfg.filter_const)
                              : FilterBank{};

  auto record_step = [&](long step, Phase phase, double f, double z, double e) {
    StepTrace t;
    t.step = step;
    t.phase = phase;
    t.f = f;
    t.z = z;
    t.e = e;
    t.w_norm = model.w_out.norm();
    for (std::size_t i = 0; i < t.w_sample.size(); ++i) {
      t.w_sample[i] = model.w_out[rec.w_indices[i]];
    }
    for (std::size_t i = 0; i < t.node_sample.size(); ++i) {
      t.node_sample[i] = state.x[rec.node_indices[i]];
    }
    rec.steps.push_back(t);
  };

  long step = 0;
  try {
    for (long k = 1; k <= cfg.train_steps; ++k) {
      step = k;
      const double f = mgs.next();
      reservoir_step(model, state, /*u=*/f, state.z_prev);
      LearnerOutput out;
      switch (cfg.method) {
        case Method::rls_force:
          out = rls_force_step(model.w_out, rls, state.r, f);
          break;
        case Method::composite_rls:
          out = composite_rls_step(model.w_out, rls, bank, state.r, f,
                                   cfg.composite_gain, cfg.composite_sign);
          break;
        case Method::composite_lms:
          out = composite_lms_step(model.w_out, bank, state.r, f,
                                   cfg.composite_gain, cfg.lms_rate,
                                   cfg.composite_sign);
          break;
      }
      model.w_out = out.w_out;
      // feedback carries the post-update (error-suppressed) output
      const double z = readout(model, state.r);
      if (!std::isfinite(z) || !model.w_out.allFinite()) {
        rec.diverged_at = k;
        break;
      }
      record_step(k, Phase::training, f, z, out.e_prior);
      state.z_prev = z;
    }

    if (trained_model != nullptr) *trained_model = model;

    if (!rec.diverged_at) {
      for (long j = 1; j <= cfg.predict_steps; ++j) {
        const long k = cfg.train_steps + j;
        step = k;
        const double f = mgs.next();
        const double u = cfg.autonomous_input == AutonomousInput::self_feedback
                             ? state.z_prev
                             : f;
        reservoir_step(model, state, u, state.z_prev);
        const double z = readout(model, state.r);
        if (!std::isfinite(z)) {
          rec.diverged_at = k;
          break;
        }
        record_step(k, Phase::prediction, f, z, z - f);
        state.z_prev = z;
      }
    }
  } catch (const std::runtime_error&) {
    // non-finite reservoir state or learner denominator
    rec.diverged_at = step;
  }

  rec.train_mse = mean_sq_error(rec.steps, Phase::training);
  if (cfg.predict_steps > 0 && !rec.diverged_at) {
    rec.predict_mse = mean_sq_error(rec.steps, Phase::prediction);
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

SweepResult seed_sweep(const ExperimentConfig& cfg,
                       std::span<const std::uint64_t> seeds, int jobs) {
  if (seeds.empty()) throw std::invalid_argument("seed_sweep: no seeds");
  SweepResult result;
  result.runs.resize(seeds.size());

  const int workers = std::max(
      1, std::min<int>(jobs, static_cast<int>(seeds.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < seeds.size();
         i = next.fetch_add(1)) {
      ExperimentConfig c = cfg;
      c.seed = seeds[i];
      result.runs[i] = run_experiment(c);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<double> train, predict;
  for (const auto& run : result.runs) {
    if (run.diverged_at) {
      ++result.aggregate.diverged_count;
      continue;
    }
    train.push_back(run.train_mse);
    if (run.predict_mse) predict.push_back(*run.predict_mse);
  }
  result.aggregate.run_count = static_cast<int>(result.runs.size());
  if (!train.empty()) {
    result.aggregate.train_mse_min = *std::min_element(train.begin(), train.end());
    result.aggregate.train_mse_max = *std::max_element(train.begin(), train.end());
    result.aggregate.train_mse_median = median(train);
  }
  if (!predict.empty()) {
    result.aggregate.predict_mse_min =
        *std::min_element(predict.begin(), predict.end());
    result.aggregate.predict_mse_max =
        *std::max_element(predict.begin(), predict.end());
    result.aggregate.predict_mse_median = median(predict);
  }
  return result;
}

std::optional<long> convergence_step(const RunRecord& record, double rel_tol) {
  if (!(rel_tol > 0.0)) {
    throw std::invalid_argument("convergence_step: rel_tol must be > 0");
  }
  std::vector<double> norms;
  std::vector<long> step_of;
  for (const auto& s : record.steps) {
    if (s.phase != Phase::training) continue;
    norms.push_back(s.w_norm);
    step_of.push_back(s.step);
  }
  if (norms.empty()) return std::nullopt;

  const std::size_t window = std::min<std::size_t>(100, norms.size());
  auto window_bad = [&](std::size_t i) {
    double lo = norms[i], hi = norms[i];
    for (std::size_t j = i; j < i + window; ++j) {
      lo = std::min(lo, norms[j]);
      hi = std::max(hi, norms[j]);
    }
    const double scale = std::max(std::abs(hi), 1e-300);
    return (hi - lo) / scale >= rel_tol;
  };

  // scan windows from the end; the settled region starts after the last bad one
  std::size_t settled_from = 0;
  for (std::size_t i = norms.size() - window + 1; i-- > 0;) {
    if (window_bad(i)) {
      settled_from = i + 1;
      break;
    }
  }
  if (settled_from + window > norms.size()) return std::nullopt;
  return step_of[settled_from];
}

void write_run_csv(const RunRecord& record, std::ostream& out) {
  out << "step,phase,f,z,e,w_norm";
  for (int i = 0; i < 10; ++i) out << ",w_" << i;
  for (int i = 0; i < 3; ++i) out << ",node_" << i;
  out << "\n";
  for (const auto& s : record.steps) {
    out << s.step << ','
        << (s.phase == Phase::training ? "train" : "predict") << ',';
    write_double(out, s.f);
    out << ',';
    write_double(out, s.z);
    out << ',';
    write_double(out, s.e);
    out << ',';
    write_double(out, s.w_norm);
    for (double w : s.w_sample) {
      out << ',';
      write_double(out, w);
    }
    for (double x : s.node_sample) {
      out << ',';
      write_double(out, x);
    }
    out << "\n";
  }
}

void write_sweep_summary_csv(std::span<const RunRecord> runs,
                             std::ostream& out) {
  out << "seed,method,train_mse,predict_mse,converge_step,diverged\n";
  for (const auto& run : runs) {
    out << run.config.seed << ',' << to_string(run.config.method) << ',';
    write_double(out, run.train_mse);
    out << ',';
    if (run.predict_mse) write_double(out, *run.predict_mse);
    out << ',';
    if (const auto k = convergence_step(run, kSummaryConvergenceTol)) {
      out << *k;
    }
    out << ',' << (run.diverged_at ? 1 : 0) << "\n";
  }
}

}  // namespace esnforce
