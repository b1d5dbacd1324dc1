#include "esnforce/mackey_glass.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace esnforce {

MackeyGlass::MackeyGlass(int tau, double f0) : tau_(tau), f0_(f0) {
  if (tau < 1) {
    throw std::invalid_argument("mackey-glass: tau must be >= 1");
  }
  history_.assign(static_cast<std::size_t>(tau) + 1, f0);
  head_ = history_.size() - 1;
}

double MackeyGlass::step() {
  // head_+1 (mod size) holds the oldest entry, f(k-tau)
  const std::size_t tail = (head_ + 1) % history_.size();
  const double f_now = history_[head_];
  const double f_delayed = history_[tail];
  const double p10 = std::pow(f_delayed, 10.0);
  const double f_next =
      f_now + 0.1 * (0.2 * f_delayed / (1.0 + p10) - 0.1 * f_now);
  if (!std::isfinite(f_next)) {
    throw std::runtime_error("mackey-glass: non-finite value at step " +
                             std::to_string(k_ + 1));
  }
  head_ = tail;
  history_[head_] = f_next;
  ++k_;
  return f_next;
}

double MackeyGlass::next() {
  if (!emitted_initial_) {
    emitted_initial_ = true;
    return f0_;
  }
  return step();
}

void MackeyGlass::reset() {
  history_.assign(history_.size(), f0_);
  head_ = history_.size() - 1;
  k_ = 0;
  emitted_initial_ = false;
}

}  // namespace esnforce
