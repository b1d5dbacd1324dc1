#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <optional>

#include "esnforce/config.hpp"
#include "esnforce/rng.hpp"

namespace esnforce {

/// The network: fixed sparse internal weights, fixed input/feedback vectors,
/// and the single trainable readout vector.
struct EsnModel {
  Eigen::SparseMatrix<double> w;  // N x N, fixed after construction
  Eigen::VectorXd w_in;           // fixed
  Eigen::VectorXd w_fb;           // fixed
  Eigen::VectorXd w_out;          // trainable readout, starts at zero
  int n = 0;
  double connectivity = 0.0;
  double chaos_factor = 0.0;
  double leak_rate = 0.0;
  bool leak_uses_current_x = false;
};

struct ReservoirState {
  Eigen::VectorXd x;  // neuron states, each in (-1, 1)
  Eigen::VectorXd r;  // leaky activations
  double z_prev = 0.0;
  long k = 0;

  explicit ReservoirState(int n)
      : x(Eigen::VectorXd::Zero(n)), r(Eigen::VectorXd::Zero(n)) {}
};

/// Builds the chaotic reservoir: each of the N^2 entries of W is nonzero
/// with probability p, value Uniform[-0.5, 0.5] scaled by g; W_in and W_fb
/// are Uniform[-1, 1]; the readout starts at zero. Substreams "w", "w_in",
/// "w_fb" of `rng` are used, so construction order is irrelevant.
EsnModel build_esn(const ExperimentConfig& cfg, const SeededRng& rng);

/// One update of the reservoir dynamics:
///   x(k) = tanh(W_in u + W x(k-1) + W_fb z_prev)
///   r(k) = (1 - alpha) r(k-1) + alpha x(k-1)
/// The leak mixes in the pre-update state x(k-1); with
/// leak_uses_current_x it mixes in x(k) instead.
/// Throws std::runtime_error (with the step index) on non-finite results.
void reservoir_step(const EsnModel& model, ReservoirState& state, double u,
                    double z_prev);

/// z = r . w_out. Throws std::invalid_argument on length mismatch.
double readout(const EsnModel& model, const Eigen::VectorXd& r);

/// Power-iteration estimate of |lambda_max(W)| to about 1% relative.
/// nullopt when the iteration hits the step cap without settling.
std::optional<double> spectral_diagnostic(const EsnModel& model);

/// Versioned flat text snapshot of the whole model (dimensions, parameters,
/// W triplets, the three fixed vectors and the readout).
void model_save(const EsnModel& model, std::ostream& out);
EsnModel model_load(std::istream& in);

}  // namespace esnforce
