#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "esnforce/harness.hpp"
#include "esnforce/mackey_glass.hpp"

using namespace esnforce;

namespace {

ExperimentConfig small_cfg(Method method, std::uint64_t seed = 1) {
  ExperimentConfig cfg;
  cfg.n_neurons = 30;
  cfg.train_steps = 300;
  cfg.predict_steps = 100;
  cfg.method = method;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("mse examples") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK(mse(a, a) == 0.0);
  CHECK(mse(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 0.0}) ==
        1.0);
  CHECK(mse(a, zeros) == doctest::Approx(14.0 / 3.0));
  CHECK_THROWS_AS(mse(a, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("zero training steps leaves the readout at zero") {
  ExperimentConfig cfg = small_cfg(Method::rls_force);
  cfg.train_steps = 0;
  cfg.predict_steps = 200;
  const RunRecord rec = run_experiment(cfg);
  REQUIRE(rec.steps.size() == 200);
  double f_sq = 0.0;
  for (const auto& s : rec.steps) {
    CHECK(s.z == 0.0);
    f_sq += s.f * s.f;
  }
  REQUIRE(rec.predict_mse.has_value());
  CHECK(*rec.predict_mse == doctest::Approx(f_sq / 200.0));
  // with no training the prediction targets are the raw MGS sequence
  MackeyGlass mgs(cfg.mgs_tau, cfg.mgs_init);
  CHECK(rec.steps.front().f == mgs.next());
}

TEST_CASE("zero prediction horizon yields training metrics only") {
  ExperimentConfig cfg = small_cfg(Method::rls_force);
  cfg.predict_steps = 0;
  const RunRecord rec = run_experiment(cfg);
  CHECK(rec.steps.size() == 300);
  CHECK(!rec.predict_mse.has_value());
  CHECK(std::isfinite(rec.train_mse));
}

TEST_CASE("runs are deterministic") {
  const ExperimentConfig cfg = small_cfg(Method::composite_rls, 42);
  const RunRecord a = run_experiment(cfg);
  const RunRecord b = run_experiment(cfg);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].z == b.steps[i].z);
    CHECK(a.steps[i].w_norm == b.steps[i].w_norm);
  }
  CHECK(a.train_mse == b.train_mse);
  CHECK(a.predict_mse == b.predict_mse);
}

TEST_CASE("trace covers every step once with the right phases") {
  const ExperimentConfig cfg = small_cfg(Method::rls_force);
  const RunRecord rec = run_experiment(cfg);
  REQUIRE(rec.steps.size() == 400);
  for (std::size_t i = 0; i < rec.steps.size(); ++i) {
    CHECK(rec.steps[i].step == static_cast<long>(i) + 1);
    CHECK(rec.steps[i].phase ==
          (rec.steps[i].step <= 300 ? Phase::training : Phase::prediction));
  }
}

TEST_CASE("fixed weights never change and learning freezes at the boundary") {
  const ExperimentConfig cfg = small_cfg(Method::composite_rls, 7);
  EsnModel trained;
  const RunRecord rec = run_experiment(cfg, &trained);
  // W, W_in, W_fb identical to a freshly built model: training never touches them
  const EsnModel fresh = build_esn(cfg, SeededRng(cfg.seed));
  CHECK(trained.w_in == fresh.w_in);
  CHECK(trained.w_fb == fresh.w_fb);
  CHECK(Eigen::MatrixXd(trained.w) == Eigen::MatrixXd(fresh.w));
  CHECK(trained.w_out != fresh.w_out);
  // frozen learner: the weight norm is constant across the prediction phase
  const double norm_at_boundary = rec.steps[299].w_norm;
  for (std::size_t i = 300; i < rec.steps.size(); ++i) {
    CHECK(rec.steps[i].w_norm == norm_at_boundary);
    for (std::size_t j = 0; j < rec.steps[i].w_sample.size(); ++j) {
      CHECK(rec.steps[i].w_sample[j] == rec.steps[299].w_sample[j]);
    }
  }
}

TEST_CASE("training error is small from the beginning") {
  const ExperimentConfig cfg = small_cfg(Method::rls_force, 5);
  const RunRecord rec = run_experiment(cfg);
  // post-update output: |z - f| = |e_prior| / (1 + r'Pr) < |e_prior|
  for (std::size_t i = 1; i < 300; ++i) {
    const auto& s = rec.steps[i];
    CHECK(std::abs(s.z - s.f) <= std::abs(s.e) + 1e-15);
  }
}

TEST_CASE("composite beta=0 reproduces basic RLS bit-for-bit") {
  ExperimentConfig basic = small_cfg(Method::rls_force, 9);
  ExperimentConfig composite = small_cfg(Method::composite_rls, 9);
  composite.composite_gain = 0.0;
  const RunRecord a = run_experiment(basic);
  const RunRecord b = run_experiment(composite);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].f == b.steps[i].f);
    CHECK(a.steps[i].z == b.steps[i].z);
    CHECK(a.steps[i].e == b.steps[i].e);
    CHECK(a.steps[i].w_norm == b.steps[i].w_norm);
  }
  CHECK(a.train_mse == b.train_mse);
  CHECK(a.predict_mse == b.predict_mse);
}

TEST_CASE("seed sweep aggregates and determinism") {
  const ExperimentConfig cfg = small_cfg(Method::rls_force);
  const std::vector<std::uint64_t> one{4};
  const SweepResult single = seed_sweep(cfg, one);
  const RunRecord direct = run_experiment([&] {
    ExperimentConfig c = cfg;
    c.seed = 4;
    return c;
  }());
  CHECK(single.aggregate.train_mse_median == direct.train_mse);
  CHECK(single.aggregate.predict_mse_median == *direct.predict_mse);

  const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  const SweepResult a = seed_sweep(cfg, seeds, /*jobs=*/1);
  const SweepResult b = seed_sweep(cfg, seeds, /*jobs=*/4);
  CHECK(a.aggregate.train_mse_median == b.aggregate.train_mse_median);
  CHECK(a.aggregate.predict_mse_median == b.aggregate.predict_mse_median);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    CHECK(a.runs[i].train_mse == b.runs[i].train_mse);
  }
  CHECK_THROWS_AS(seed_sweep(cfg, std::vector<std::uint64_t>{}),
                  std::invalid_argument);
}

TEST_CASE("convergence step on synthetic norm traces") {
  RunRecord rec;
  auto push = [&rec](long step, double norm) {
    StepTrace t;
    t.step = step;
    t.phase = Phase::training;
    t.w_norm = norm;
    rec.steps.push_back(t);
  };

  SUBCASE("constant trace settles at the first index") {
    for (long k = 1; k <= 400; ++k) push(k, 2.0);
    const auto got = convergence_step(rec, 1e-3);
    REQUIRE(got.has_value());
    CHECK(*got == 1);
  }
  SUBCASE("monotonically growing trace never settles") {
    for (long k = 1; k <= 400; ++k) push(k, 1.0 + 0.01 * k);
    CHECK(!convergence_step(rec, 1e-3).has_value());
  }
  SUBCASE("growth then plateau settles after the growth") {
    for (long k = 1; k <= 200; ++k) push(k, 0.01 * k);
    for (long k = 201; k <= 600; ++k) push(k, 2.0);
    const auto got = convergence_step(rec, 1e-3);
    REQUIRE(got.has_value());
    CHECK(*got > 100);
    CHECK(*got <= 201);
  }
  SUBCASE("rejects nonpositive tolerance") {
    CHECK_THROWS_AS(convergence_step(rec, 0.0), std::invalid_argument);
  }
}

TEST_CASE("run CSV schema") {
  ExperimentConfig cfg = small_cfg(Method::rls_force);
  cfg.train_steps = 5;
  cfg.predict_steps = 2;
  const RunRecord rec = run_experiment(cfg);
  std::ostringstream out;
  write_run_csv(rec, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "step,phase,f,z,e,w_norm,w_0,w_1,w_2,w_3,w_4,w_5,w_6,w_7,w_8,w_9,"
        "node_0,node_1,node_2");
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 7);
}

TEST_CASE("sweep summary CSV schema") {
  ExperimentConfig cfg = small_cfg(Method::composite_lms);
  cfg.train_steps = 50;
  cfg.predict_steps = 10;
  const std::vector<std::uint64_t> seeds{1, 2};
  const SweepResult result = seed_sweep(cfg, seeds);
  std::ostringstream out;
  write_sweep_summary_csv(result.runs, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "seed,method,train_mse,predict_mse,converge_step,diverged");
  std::string row;
  std::getline(in, row);
  CHECK(row.find("composite-lms") != std::string::npos);
}
