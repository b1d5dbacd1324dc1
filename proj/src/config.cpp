#include "esnforce/config.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace esnforce {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for '" + key + "'");
  }
  if (pos != v.size()) {
    throw std::invalid_argument("config: bad numeric value for '" + key + "'");
  }
  return d;
}

long parse_long(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long n;
  try {
    n = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for '" + key + "'");
  }
  if (pos != v.size()) {
    throw std::invalid_argument("config: bad integer value for '" + key + "'");
  }
  return n;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config: bad boolean value for '" + key + "'");
}

std::string fmt_double(double d) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, p);
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::rls_force: return "rls-force";
    case Method::composite_rls: return "composite-rls";
    case Method::composite_lms: return "composite-lms";
  }
  return "?";
}

std::string to_string(CompositeSign s) {
  return s == CompositeSign::paper ? "paper" : "gradient";
}

std::string to_string(AutonomousInput a) {
  return a == AutonomousInput::self_feedback ? "self-feedback" : "ground-truth";
}

Method method_from_string(const std::string& s) {
  if (s == "rls-force") return Method::rls_force;
  if (s == "composite-rls") return Method::composite_rls;
  if (s == "composite-lms") return Method::composite_lms;
  throw std::invalid_argument(
      "config: unknown method '" + s +
      "' (expected rls-force | composite-rls | composite-lms)");
}

CompositeSign composite_sign_from_string(const std::string& s) {
  if (s == "paper") return CompositeSign::paper;
  if (s == "gradient") return CompositeSign::gradient;
  throw std::invalid_argument("config: unknown composite_sign '" + s +
                              "' (expected paper | gradient)");
}

AutonomousInput autonomous_input_from_string(const std::string& s) {
  if (s == "self-feedback") return AutonomousInput::self_feedback;
  if (s == "ground-truth") return AutonomousInput::ground_truth;
  throw std::invalid_argument("config: unknown autonomous_input '" + s +
                              "' (expected self-feedback | ground-truth)");
}

void config_set(ExperimentConfig& cfg, const std::string& key,
                const std::string& value) {
  if (key == "n_neurons" || key == "N") {
    cfg.n_neurons = static_cast<int>(parse_long(key, value));
  } else if (key == "connectivity" || key == "p") {
    cfg.connectivity = parse_double(key, value);
  } else if (key == "chaos_factor" || key == "g") {
    cfg.chaos_factor = parse_double(key, value);
  } else if (key == "leak_rate" || key == "alpha") {
    cfg.leak_rate = parse_double(key, value);
  } else if (key == "rls_init" || key == "a") {
    cfg.rls_init = parse_double(key, value);
  } else if (key == "composite_gain" || key == "beta") {
    cfg.composite_gain = parse_double(key, value);
  } else if (key == "filter_const" || key == "lambda") {
    cfg.filter_const = parse_double(key, value);
  } else if (key == "composite_sign") {
    cfg.composite_sign = composite_sign_from_string(value);
  } else if (key == "lms_rate" || key == "eta") {
    cfg.lms_rate = parse_double(key, value);
  } else if (key == "train_steps") {
    cfg.train_steps = parse_long(key, value);
  } else if (key == "predict_steps") {
    cfg.predict_steps = parse_long(key, value);
  } else if (key == "mgs_tau" || key == "tau") {
    cfg.mgs_tau = static_cast<int>(parse_long(key, value));
  } else if (key == "mgs_init" || key == "f0") {
    cfg.mgs_init = parse_double(key, value);
  } else if (key == "washout_steps") {
    cfg.washout_steps = parse_long(key, value);
  } else if (key == "leak_uses_current_x") {
    cfg.leak_uses_current_x = parse_bool(key, value);
  } else if (key == "autonomous_input") {
    cfg.autonomous_input = autonomous_input_from_string(value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
  } else if (key == "method") {
    cfg.method = method_from_string(value);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

std::string config_validate(const ExperimentConfig& cfg) {
  auto bad = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument("config: " + key + " " + why);
  };
  if (cfg.n_neurons < 1) bad("n_neurons", "must be >= 1");
  if (!(cfg.connectivity > 0.0 && cfg.connectivity < 1.0)) {
    bad("connectivity", "must be in (0, 1)");
  }
  if (!(cfg.chaos_factor > 0.0)) bad("chaos_factor", "must be > 0");
  if (!(cfg.leak_rate > 0.0 && cfg.leak_rate <= 1.0)) {
    bad("leak_rate", "must be in (0, 1]");
  }
  if (!(cfg.rls_init > 0.0)) bad("rls_init", "must be > 0");
  if (cfg.composite_gain < 0.0) bad("composite_gain", "must be >= 0");
  if (!(cfg.filter_const > 0.0 && cfg.filter_const <= 1.0)) {
    bad("filter_const", "must be in (0, 1]");
  }
  if (!(cfg.lms_rate > 0.0)) bad("lms_rate", "must be > 0");
  if (cfg.train_steps < 0) bad("train_steps", "must be >= 0");
  if (cfg.predict_steps < 0) bad("predict_steps", "must be >= 0");
  if (cfg.mgs_tau < 1) bad("mgs_tau", "must be >= 1");
  if (cfg.washout_steps < 0) bad("washout_steps", "must be >= 0");
  if (cfg.rls_init > cfg.n_neurons / 10.0) {
    return "warning: rls_init a = " + fmt_double(cfg.rls_init) +
           " exceeds n_neurons/10; the RLS initialization wants a << N";
  }
  return "";
}

ExperimentConfig config_load(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    }
    config_set(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  config_validate(cfg);
  return cfg;
}

std::string config_serialize(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "n_neurons = " << cfg.n_neurons << "\n"
      << "connectivity = " << fmt_double(cfg.connectivity) << "\n"
      << "chaos_factor = " << fmt_double(cfg.chaos_factor) << "\n"
      << "leak_rate = " << fmt_double(cfg.leak_rate) << "\n"
      << "rls_init = " << fmt_double(cfg.rls_init) << "\n"
      << "composite_gain = " << fmt_double(cfg.composite_gain) << "\n"
      << "filter_const = " << fmt_double(cfg.filter_const) << "\n"
      << "composite_sign = " << to_string(cfg.composite_sign) << "\n"
      << "lms_rate = " << fmt_double(cfg.lms_rate) << "\n"
      << "train_steps = " << cfg.train_steps << "\n"
      << "predict_steps = " << cfg.predict_steps << "\n"
      << "mgs_tau = " << cfg.mgs_tau << "\n"
      << "mgs_init = " << fmt_double(cfg.mgs_init) << "\n"
      << "washout_steps = " << cfg.washout_steps << "\n"
      << "leak_uses_current_x = " << (cfg.leak_uses_current_x ? "true" : "false")
      << "\n"
      << "autonomous_input = " << to_string(cfg.autonomous_input) << "\n"
      << "seed = " << cfg.seed << "\n"
      << "method = " << to_string(cfg.method) << "\n";
  return out.str();
}

}  // namespace esnforce
