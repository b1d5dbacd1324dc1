#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "esnforce/reservoir.hpp"

using namespace esnforce;

namespace {

EsnModel tiny_model(int n, double alpha, bool leak_current = false) {
  EsnModel m;
  m.n = n;
  m.leak_rate = alpha;
  m.leak_uses_current_x = leak_current;
  m.w.resize(n, n);
  m.w_in = Eigen::VectorXd::Zero(n);
  m.w_fb = Eigen::VectorXd::Zero(n);
  m.w_out = Eigen::VectorXd::Zero(n);
  return m;
}

ExperimentConfig benchmark_cfg(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("build_esn matches the construction recipe") {
  const ExperimentConfig cfg = benchmark_cfg(3);
  const EsnModel model = build_esn(cfg, SeededRng(cfg.seed));

  CHECK(model.w.rows() == 100);
  // nonzero count within 5 sigma of Binomial(N^2, p)
  const double mean = 100.0 * 100.0 * 0.1;
  const double sigma = std::sqrt(100.0 * 100.0 * 0.1 * 0.9);
  CHECK(std::abs(model.w.nonZeros() - mean) < 5.0 * sigma);

  for (int col = 0; col < model.w.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(model.w, col); it;
         ++it) {
      CHECK(std::abs(it.value()) <= 0.5 * 2.5);
      CHECK(it.value() != 0.0);
    }
  }
  CHECK(model.w_in.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(model.w_fb.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(model.w_out.norm() == 0.0);
}

TEST_CASE("near-unity connectivity gives a dense matrix") {
  ExperimentConfig cfg;
  cfg.n_neurons = 10;
  cfg.connectivity = 0.999999;
  const EsnModel model = build_esn(cfg, SeededRng(1));
  CHECK(model.w.nonZeros() == 100);
}

TEST_CASE("construction does not depend on substream draw order") {
  const ExperimentConfig cfg = benchmark_cfg(11);
  const EsnModel a = build_esn(cfg, SeededRng(cfg.seed));
  SeededRng pre_consumed(cfg.seed);
  pre_consumed.next_u64();  // root stream state must not matter
  const EsnModel b = build_esn(cfg, pre_consumed);
  CHECK(a.w_in == b.w_in);
  CHECK(a.w_fb == b.w_fb);
  CHECK(Eigen::MatrixXd(a.w) == Eigen::MatrixXd(b.w));
}

TEST_CASE("zero state, zero input stays at zero") {
  const EsnModel model = tiny_model(4, 0.1);
  ReservoirState state(4);
  reservoir_step(model, state, 0.0, 0.0);
  CHECK(state.x.norm() == 0.0);
  CHECK(state.r.norm() == 0.0);
}

TEST_CASE("leak update mixes the pre-update state") {
  const EsnModel model = tiny_model(4, 0.1);
  ReservoirState state(4);
  state.x = Eigen::VectorXd::Ones(4);
  reservoir_step(model, state, 0.0, 0.0);
  // r(k) = 0.9*0 + 0.1*x(k-1), while x itself collapses to tanh(0) = 0
  for (int i = 0; i < 4; ++i) CHECK(state.r[i] == doctest::Approx(0.1));
  CHECK(state.x.norm() == 0.0);
}

TEST_CASE("alpha=1 copies the pre-update state into r") {
  const EsnModel model = tiny_model(3, 1.0);
  ReservoirState state(3);
  state.x << 0.3, -0.2, 0.9;
  state.r << 5.0, 5.0, 5.0;
  const Eigen::VectorXd x_before = state.x;
  reservoir_step(model, state, 0.0, 0.0);
  CHECK(state.r == x_before);
}

TEST_CASE("leak_uses_current_x mixes the post-update state instead") {
  EsnModel model = tiny_model(2, 1.0, /*leak_current=*/true);
  model.w_in << 1.0, -1.0;
  ReservoirState state(2);
  state.x << 0.5, 0.5;
  reservoir_step(model, state, 2.0, 0.0);
  CHECK(state.r[0] == doctest::Approx(std::tanh(2.0)));
  CHECK(state.r[1] == doctest::Approx(std::tanh(-2.0)));
}

TEST_CASE("readout examples") {
  EsnModel model = tiny_model(2, 0.1);
  Eigen::VectorXd r(2);
  r << 1.0, 2.0;
  CHECK(readout(model, r) == 0.0);  // zero weights
  model.w_out << 3.0, -1.0;
  CHECK(readout(model, r) == 1.0);
  CHECK(readout(model, Eigen::VectorXd::Zero(2)) == 0.0);
  CHECK_THROWS_AS(readout(model, Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("reservoir states stay strictly inside (-1, 1)") {
  const ExperimentConfig cfg = benchmark_cfg(21);
  const EsnModel model = build_esn(cfg, SeededRng(cfg.seed));
  ReservoirState state(cfg.n_neurons);
  for (int k = 0; k < 500; ++k) {
    reservoir_step(model, state, std::sin(0.1 * k), 0.5 * std::cos(0.07 * k));
    CHECK(state.x.cwiseAbs().maxCoeff() < 1.0);
    CHECK(state.r.allFinite());
  }
}

TEST_CASE("spectral diagnostic on known spectra") {
  EsnModel model = tiny_model(5, 0.1);
  SUBCASE("zero matrix") {
    CHECK(spectral_diagnostic(model) == 0.0);
  }
  SUBCASE("scaled identity") {
    Eigen::SparseMatrix<double> id(5, 5);
    id.setIdentity();
    model.w = 1.7 * id;
    const auto est = spectral_diagnostic(model);
    REQUIRE(est.has_value());
    CHECK(*est == doctest::Approx(1.7).epsilon(1e-6));
  }
}

TEST_CASE("benchmark reservoir is in the chaotic regime (radius > 1)") {
  const ExperimentConfig cfg = benchmark_cfg(8);
  const EsnModel model = build_esn(cfg, SeededRng(cfg.seed));
  const auto est = spectral_diagnostic(model);
  REQUIRE(est.has_value());
  CHECK(*est > 1.0);

  // dense eigensolver oracle on the same matrix
  Eigen::EigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(model.w), false);
  const double oracle = eig.eigenvalues().cwiseAbs().maxCoeff();
  CHECK(*est == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("model snapshot round-trips bit-exactly") {
  const ExperimentConfig cfg = benchmark_cfg(4);
  EsnModel model = build_esn(cfg, SeededRng(cfg.seed));
  model.w_out = Eigen::VectorXd::Random(cfg.n_neurons);
  std::stringstream buf;
  model_save(model, buf);
  const EsnModel back = model_load(buf);
  CHECK(back.n == model.n);
  CHECK(back.w_in == model.w_in);
  CHECK(back.w_fb == model.w_fb);
  CHECK(back.w_out == model.w_out);
  CHECK(Eigen::MatrixXd(back.w) == Eigen::MatrixXd(model.w));
}

TEST_CASE("snapshot loader rejects junk") {
  std::stringstream buf("not-a-model 9");
  CHECK_THROWS_AS(model_load(buf), std::runtime_error);
}
