#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace esnforce {

/// Deterministic xoshiro256++ generator with named substreams.
///
/// Substreams are derived from the root seed and a stream name only, so the
/// order in which substreams are created (or consumed) has no effect on any
/// other substream. Identical seed and name give a bit-identical sequence on
/// every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  /// Derives an independent generator keyed by (root seed, name).
  [[nodiscard]] SeededRng substream(std::string_view name) const;

  std::uint64_t next_u64();

  /// Uniform double in [lo, hi). Throws std::invalid_argument if lo >= hi.
  double uniform(double lo, double hi);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }

 private:
  SeededRng(std::uint64_t seed, std::uint64_t stream_key);

  std::uint64_t seed_;
  std::uint64_t state_[4];
};

/// Draws `count` uniform values in [lo, hi) from `rng`.
std::vector<double> rng_uniform(SeededRng& rng, double lo, double hi,
                                std::size_t count);

}  // namespace esnforce
