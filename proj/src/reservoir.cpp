#include "esnforce/reservoir.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace esnforce {

namespace {

void write_double(std::ostream& out, double d) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  out.write(buf, p - buf);
}

Eigen::VectorXd draw_vector(SeededRng rng, int n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

}  // namespace

EsnModel build_esn(const ExperimentConfig& cfg, const SeededRng& rng) {
  const int n = cfg.n_neurons;
  EsnModel model;
  model.n = n;
  model.connectivity = cfg.connectivity;
  model.chaos_factor = cfg.chaos_factor;
  model.leak_rate = cfg.leak_rate;
  model.leak_uses_current_x = cfg.leak_uses_current_x;

  SeededRng w_rng = rng.substream("w");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(
      static_cast<std::size_t>(cfg.connectivity * n * n * 1.2) + 16);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // two draws per position, so the stream layout is independent of p
      const double gate = w_rng.uniform(0.0, 1.0);
      const double value = w_rng.uniform(-0.5, 0.5) * cfg.chaos_factor;
      if (gate < cfg.connectivity && value != 0.0) {
        triplets.emplace_back(i, j, value);
      }
    }
  }
  model.w.resize(n, n);
  model.w.setFromTriplets(triplets.begin(), triplets.end());
  model.w.makeCompressed();

  model.w_in = draw_vector(rng.substream("w_in"), n, -1.0, 1.0);
  model.w_fb = draw_vector(rng.substream("w_fb"), n, -1.0, 1.0);
  model.w_out = Eigen::VectorXd::Zero(n);
  return model;
}

void reservoir_step(const EsnModel& model, ReservoirState& state, double u,
                    double z_prev) {
  const Eigen::VectorXd pre =
      model.w_in * u + model.w * state.x + model.w_fb * z_prev;
  const Eigen::VectorXd x_new = pre.array().tanh();
  const double alpha = model.leak_rate;
  const Eigen::VectorXd& leak_src = model.leak_uses_current_x ? x_new : state.x;
  state.r = (1.0 - alpha) * state.r + alpha * leak_src;
  state.x = x_new;
  state.z_prev = z_prev;
  ++state.k;
  if (!state.x.allFinite() || !state.r.allFinite()) {
    throw std::runtime_error("reservoir: non-finite state at step " +
                             std::to_string(state.k));
  }
}

double readout(const EsnModel& model, const Eigen::VectorXd& r) {
  if (r.size() != model.w_out.size()) {
    throw std::invalid_argument("readout: activation length mismatch");
  }
  return r.dot(model.w_out);
}

std::optional<double> spectral_diagnostic(const EsnModel& model) {
  if (model.n < 1) return std::nullopt;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(model.n);
  v.normalize();
  // Power iteration with a geometric-mean growth estimate. Averaging the log
  // growth over a long stretch also settles when the dominant eigenvalue is a
  // complex pair, where the plain Rayleigh quotient oscillates forever.
  constexpr int kWarmup = 500;
  constexpr int kMeasure = 4000;
  for (int it = 0; it < kWarmup; ++it) {
    v = model.w * v;
    const double norm = v.norm();
    if (norm == 0.0) return 0.0;
    v /= norm;
  }
  double log_sum = 0.0;
  for (int it = 0; it < kMeasure; ++it) {
    v = model.w * v;
    const double norm = v.norm();
    if (norm == 0.0) return 0.0;
    log_sum += std::log(norm);
    v /= norm;
  }
  const double estimate = std::exp(log_sum / kMeasure);
  if (!std::isfinite(estimate)) return std::nullopt;
  return estimate;
}

void model_save(const EsnModel& model, std::ostream& out) {
  out << "esnforce-model 1\n";
  out << model.n << " ";
  write_double(out, model.connectivity);
  out << " ";
  write_double(out, model.chaos_factor);
  out << " ";
  write_double(out, model.leak_rate);
  out << " " << (model.leak_uses_current_x ? 1 : 0) << "\n";
  out << model.w.nonZeros() << "\n";
  for (int col = 0; col < model.w.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(model.w, col); it;
         ++it) {
      out << it.row() << " " << it.col() << " ";
      write_double(out, it.value());
      out << "\n";
    }
  }
  auto dump = [&out](const Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i) {
      if (i) out << " ";
      write_double(out, v[i]);
    }
    out << "\n";
  };
  dump(model.w_in);
  dump(model.w_fb);
  dump(model.w_out);
}

EsnModel model_load(std::istream& in) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "esnforce-model" || version != 1) {
    throw std::runtime_error("model: unrecognized snapshot header");
  }
  EsnModel model;
  int leak_flag = 0;
  in >> model.n >> model.connectivity >> model.chaos_factor >>
      model.leak_rate >> leak_flag;
  model.leak_uses_current_x = leak_flag != 0;
  if (!in || model.n < 1) throw std::runtime_error("model: bad header fields");
  long nnz = 0;
  in >> nnz;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  for (long t = 0; t < nnz; ++t) {
    int r, c;
    double v;
    in >> r >> c >> v;
    triplets.emplace_back(r, c, v);
  }
  model.w.resize(model.n, model.n);
  model.w.setFromTriplets(triplets.begin(), triplets.end());
  model.w.makeCompressed();
  auto load = [&in, &model](Eigen::VectorXd& v) {
    v.resize(model.n);
    for (int i = 0; i < model.n; ++i) in >> v[i];
  };
  load(model.w_in);
  load(model.w_fb);
  load(model.w_out);
  if (!in) throw std::runtime_error("model: truncated snapshot");
  return model;
}

}  // namespace esnforce
