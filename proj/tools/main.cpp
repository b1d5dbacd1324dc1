#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "esnforce/csv.hpp"
#include "esnforce/harness.hpp"
#include "esnforce/mackey_glass.hpp"
#include "esnforce/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace esnforce;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string method;
  std::string out_dir = "out";
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Config file (key = value lines)");
  cmd->add_option("--set", opts.sets, "Override, KEY=VALUE (repeatable)");
  cmd->add_option("--method", opts.method,
                  "rls-force | composite-rls | composite-lms");
  cmd->add_option("--out-dir", opts.out_dir, "Output directory");
  cmd->add_option("--jobs", opts.jobs, "Parallel runs for sweeps")
      ->check(CLI::PositiveNumber);
}

ExperimentConfig build_config(const CommonOpts& opts) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + opts.config_path);
    std::ostringstream text;
    text << in.rdbuf();
    cfg = config_load(text.str());
  }
  for (const auto& kv : opts.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects KEY=VALUE, got '" + kv + "'");
    }
    config_set(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!opts.method.empty()) cfg.method = method_from_string(opts.method);
  const std::string warning = config_validate(cfg);
  if (!warning.empty()) std::cerr << warning << "\n";
  return cfg;
}

void write_effective_config(const ExperimentConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "effective_config.txt");
  out << config_serialize(cfg);
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  const auto range = spec.find("..");
  if (range != std::string::npos) {
    const std::uint64_t lo = std::stoull(spec.substr(0, range));
    const std::uint64_t hi = std::stoull(spec.substr(range + 2));
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  } else {
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (!tok.empty()) seeds.push_back(std::stoull(tok));
    }
  }
  if (seeds.empty()) throw std::invalid_argument("empty seed list: " + spec);
  return seeds;
}

fs::path run_csv_path(const fs::path& dir, const ExperimentConfig& cfg) {
  return dir / ("run_" + to_string(cfg.method) + "_" +
                std::to_string(cfg.seed) + ".csv");
}

int save_run(const RunRecord& rec, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(run_csv_path(dir, rec.config));
  write_run_csv(rec, out);
  std::cout << to_string(rec.config.method) << " seed=" << rec.config.seed
            << " train_mse=" << rec.train_mse << " predict_mse=";
  if (rec.predict_mse) {
    std::cout << *rec.predict_mse;
  } else {
    std::cout << "n/a";
  }
  std::cout << "\n";
  if (rec.diverged_at) {
    std::cerr << "run diverged at step " << *rec.diverged_at << "\n";
    return 3;
  }
  return 0;
}

int cmd_run(const CommonOpts& opts, std::uint64_t seed, bool seed_given,
            const std::string& model_path) {
  ExperimentConfig cfg = build_config(opts);
  if (seed_given) cfg.seed = seed;
  write_effective_config(cfg, opts.out_dir);
  EsnModel trained;
  const RunRecord rec = run_experiment(cfg, &trained);
  if (!model_path.empty()) {
    std::ofstream out(model_path);
    model_save(trained, out);
  }
  return save_run(rec, opts.out_dir);
}

int cmd_sweep(const CommonOpts& opts, const std::string& seeds_spec) {
  ExperimentConfig cfg = build_config(opts);
  const auto seeds = parse_seeds(seeds_spec);
  write_effective_config(cfg, opts.out_dir);
  const SweepResult result = seed_sweep(cfg, seeds, opts.jobs);
  int status = 0;
  for (const auto& rec : result.runs) {
    if (save_run(rec, opts.out_dir) != 0) status = 3;
  }
  std::ofstream summary(fs::path(opts.out_dir) / "sweep_summary.csv");
  write_sweep_summary_csv(result.runs, summary);
  const auto& agg = result.aggregate;
  std::cout << "median train_mse=" << agg.train_mse_median
            << " predict_mse=" << agg.predict_mse_median
            << " (" << agg.run_count - agg.diverged_count << "/"
            << agg.run_count << " runs converged)\n";
  return status;
}

int cmd_compare(const CommonOpts& opts, const std::string& seeds_spec) {
  ExperimentConfig cfg = build_config(opts);
  const auto seeds = parse_seeds(seeds_spec);
  write_effective_config(cfg, opts.out_dir);
  fs::create_directories(opts.out_dir);

  const Method methods[] = {Method::rls_force, Method::composite_rls,
                            Method::composite_lms};
  std::vector<RunRecord> all_runs;
  std::vector<SweepAggregate> aggs;
  int status = 0;
  for (Method m : methods) {
    ExperimentConfig mc = cfg;
    mc.method = m;
    SweepResult result = seed_sweep(mc, seeds, opts.jobs);
    if (result.aggregate.diverged_count > 0) status = 3;
    aggs.push_back(result.aggregate);
    for (auto& rec : result.runs) {
      std::ofstream run_out(run_csv_path(opts.out_dir, rec.config));
      write_run_csv(rec, run_out);
      all_runs.push_back(std::move(rec));
    }
  }

  std::ofstream runs_out(fs::path(opts.out_dir) / "compare_runs.csv");
  write_sweep_summary_csv(all_runs, runs_out);

  std::ofstream summary(fs::path(opts.out_dir) / "compare_summary.csv");
  summary << "method,train_mse,predict_mse\n";
  for (std::size_t i = 0; i < aggs.size(); ++i) {
    char train_buf[64], pred_buf[64];
    std::snprintf(train_buf, sizeof(train_buf), "%.17g",
                  aggs[i].train_mse_median);
    std::snprintf(pred_buf, sizeof(pred_buf), "%.17g",
                  aggs[i].predict_mse_median);
    summary << to_string(methods[i]) << ',' << train_buf << ',' << pred_buf
            << "\n";
  }

  std::printf("%-16s %14s %14s %10s\n", "method", "train MSE", "predict MSE",
              "diverged");
  for (std::size_t i = 0; i < aggs.size(); ++i) {
    std::printf("%-16s %14.6f %14.6f %7d/%d\n",
                to_string(methods[i]).c_str(), aggs[i].train_mse_median,
                aggs[i].predict_mse_median, aggs[i].diverged_count,
                aggs[i].run_count);
  }
  return status;
}

int cmd_signal_dump(const CommonOpts& opts, long steps,
                    const std::string& out_path) {
  ExperimentConfig cfg = build_config(opts);
  MackeyGlass mgs(cfg.mgs_tau, cfg.mgs_init);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    out = &file;
  }
  *out << "step,f\n";
  for (long k = 0; k < steps; ++k) {
    *out << k << ',' << mgs.next() << "\n";
  }
  return 0;
}

struct WindowOpt {
  long start = 0;
  long end = -1;  // -1 = to the end
};

void crop(std::vector<double>& x, std::vector<double>& y, const WindowOpt& w) {
  std::vector<double> cx, cy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < w.start) continue;
    if (w.end >= 0 && x[i] > w.end) continue;
    cx.push_back(x[i]);
    cy.push_back(y[i]);
  }
  x = std::move(cx);
  y = std::move(cy);
}

int cmd_plot(const std::string& kind, const std::string& in_path,
             const std::string& out_path, const WindowOpt& window) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open " + in_path);
  const CsvTable table = read_csv(in);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open " + out_path);

  if (kind == "mse-bar") {
    const auto method_col = table.column("method");
    const auto train = table.numeric_column("train_mse");
    const auto predict = table.numeric_column("predict_mse");
    std::vector<BarGroup> groups;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      groups.push_back({table.rows[i][method_col], {train[i], predict[i]}});
    }
    write_bar_chart_svg(out, "MSE by method", "MSE",
                        {"training MSE", "prediction MSE"}, groups);
    return 0;
  }

  const auto step = table.numeric_column("step");
  auto make = [&](const std::string& col, const std::string& label) {
    PlotSeries s{label, step, table.numeric_column(col)};
    crop(s.x, s.y, window);
    return s;
  };
  std::vector<PlotSeries> series;
  std::string title, ylabel;
  if (kind == "output-vs-target") {
    series = {make("f", "target f"), make("z", "output z")};
    title = "Network output vs target";
    ylabel = "value";
  } else if (kind == "weight-norm") {
    series = {make("w_norm", "||w_out||")};
    title = "Readout weight norm";
    ylabel = "||w_out||";
  } else if (kind == "weight-elements") {
    for (int i = 0; i < 10; ++i) {
      series.push_back(make("w_" + std::to_string(i), "w_" + std::to_string(i)));
    }
    title = "Sampled readout weight elements";
    ylabel = "weight";
  } else if (kind == "node-activity") {
    for (int i = 0; i < 3; ++i) {
      series.push_back(
          make("node_" + std::to_string(i), "node " + std::to_string(i)));
    }
    title = "Sampled reservoir node activity";
    ylabel = "x";
  } else {
    throw std::invalid_argument("unknown plot kind: " + kind);
  }
  write_line_chart_svg(out, title, "step", ylabel, series);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chaotic echo state network benchmark: online FORCE-trained "
               "readouts on Mackey-Glass prediction"};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, compare_opts, signal_opts;
  std::uint64_t seed = 1;
  std::string model_path, run_seeds, compare_seeds;
  long signal_steps = 6000;
  std::string signal_out;

  auto* run = app.add_subcommand("run", "Run one experiment");
  add_common(run, run_opts);
  auto* seed_opt = run->add_option("--seed", seed, "RNG seed");
  run->add_option("--save-model", model_path,
                  "Write the trained model snapshot here");

  auto* sweep = app.add_subcommand("sweep", "Run one method over many seeds");
  add_common(sweep, sweep_opts);
  sweep->add_option("--seeds", run_seeds, "Seed list: 1..10 or 1,2,5")
      ->required();

  auto* compare =
      app.add_subcommand("compare", "Run all three methods over many seeds");
  add_common(compare, compare_opts);
  compare->add_option("--seeds", compare_seeds, "Seed list: 1..10 or 1,2,5")
      ->required();

  auto* signal = app.add_subcommand("signal-dump",
                                    "Dump the Mackey-Glass series as CSV");
  add_common(signal, signal_opts);
  signal->add_option("--steps", signal_steps, "Number of values");
  signal->add_option("--out", signal_out, "Output file (default stdout)");

  std::string plot_kind, plot_in, plot_out, plot_window;
  auto* plot = app.add_subcommand("plot", "Render an SVG chart from a CSV");
  plot->add_option("--kind", plot_kind,
                   "output-vs-target | weight-norm | weight-elements | "
                   "node-activity | mse-bar")
      ->required();
  plot->add_option("--in", plot_in, "Source CSV")->required();
  plot->add_option("--out", plot_out, "Destination SVG")->required();
  plot->add_option("--window", plot_window, "Step window START:END");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(run_opts, seed, seed_opt->count() > 0, model_path);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_opts, run_seeds);
    if (compare->parsed()) return cmd_compare(compare_opts, compare_seeds);
    if (signal->parsed()) {
      return cmd_signal_dump(signal_opts, signal_steps, signal_out);
    }
    if (plot->parsed()) {
      WindowOpt window;
      if (!plot_window.empty()) {
        const auto colon = plot_window.find(':');
        if (colon == std::string::npos) {
          throw std::invalid_argument("--window expects START:END");
        }
        window.start = std::stol(plot_window.substr(0, colon));
        window.end = std::stol(plot_window.substr(colon + 1));
      }
      return cmd_plot(plot_kind, plot_in, plot_out, window);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
