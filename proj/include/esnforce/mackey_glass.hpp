#pragma once

#include <cstddef>
#include <vector>

namespace esnforce {

/// Abstract sequential target-signal producer.
class SignalSource {
 public:
  virtual ~SignalSource() = default;
  virtual double next() = 0;
  virtual void reset() = 0;
};

/// Discrete Mackey-Glass recurrence
///   f(k+1) = f(k) + (1/10) [ 0.2 f(k-tau) / (1 + f(k-tau)^10) - 0.1 f(k) ]
/// with constant pre-history f(k) = f0 for k <= 0.
class MackeyGlass final : public SignalSource {
 public:
  /// Throws std::invalid_argument if tau < 1.
  MackeyGlass(int tau, double f0);

  /// Current value f(k).
  [[nodiscard]] double value() const { return history_[head_]; }
  [[nodiscard]] long step_index() const { return k_; }

  /// Advances to f(k+1) and returns it. Throws std::runtime_error on a
  /// non-finite intermediate (unreachable for the benchmark parameters).
  double step();

  /// First call returns f(0), then f(1), f(2), ...
  double next() override;
  void reset() override;

 private:
  int tau_;
  double f0_;
  // ring buffer of f(k-tau) .. f(k); head_ points at f(k)
  std::vector<double> history_;
  std::size_t head_ = 0;
  long k_ = 0;
  bool emitted_initial_ = false;
};

}  // namespace esnforce
