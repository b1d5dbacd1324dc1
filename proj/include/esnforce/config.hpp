#pragma once

#include <cstdint>
#include <string>

namespace esnforce {

enum class Method { rls_force, composite_rls, composite_lms };
enum class CompositeSign { paper, gradient };
enum class AutonomousInput { self_feedback, ground_truth };

std::string to_string(Method m);
std::string to_string(CompositeSign s);
std::string to_string(AutonomousInput a);
Method method_from_string(const std::string& s);
CompositeSign composite_sign_from_string(const std::string& s);
AutonomousInput autonomous_input_from_string(const std::string& s);

/// Every scalar hyperparameter and protocol setting of one experiment run.
/// Defaults are the benchmark parameter set (N=100, p=0.1, a=1, g=2.5,
/// alpha=0.1, beta=3, lambda=0.5, tau=17, f0=1.2, 6000 train steps).
struct ExperimentConfig {
  int n_neurons = 100;
  double connectivity = 0.1;
  double chaos_factor = 2.5;
  double leak_rate = 0.1;
  double rls_init = 1.0;
  double composite_gain = 3.0;
  double filter_const = 0.5;
  CompositeSign composite_sign = CompositeSign::paper;
  double lms_rate = 0.01;
  long train_steps = 6000;
  long predict_steps = 6000;
  int mgs_tau = 17;
  double mgs_init = 1.2;
  long washout_steps = 0;
  bool leak_uses_current_x = false;
  AutonomousInput autonomous_input = AutonomousInput::self_feedback;
  std::uint64_t seed = 1;
  Method method = Method::rls_force;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses line-oriented `key = value` text ('#' starts a comment).
/// Unspecified keys keep their defaults. Unknown keys and out-of-range
/// values throw std::invalid_argument naming the key. Short aliases
/// (N, p, g, alpha, a, beta, lambda, eta, tau, f0) are accepted.
ExperimentConfig config_load(const std::string& text);

/// Applies one `key=value` override to an existing config.
void config_set(ExperimentConfig& cfg, const std::string& key,
                const std::string& value);

/// Validates ranges; throws std::invalid_argument naming the offending key.
/// Returns a warning string ("a <= N/10" guidance violated) or empty.
std::string config_validate(const ExperimentConfig& cfg);

/// Serializes as `key = value` lines; config_load round-trips exactly.
std::string config_serialize(const ExperimentConfig& cfg);

}  // namespace esnforce
