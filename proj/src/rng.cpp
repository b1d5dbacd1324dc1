#include "esnforce/rng.hpp"

#include <stdexcept>

namespace esnforce {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) : SeededRng(seed, 0) {}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_key)
    : seed_(seed) {
  std::uint64_t sm = seed ^ stream_key;
  for (auto& s : state_) s = splitmix64(sm);
}

SeededRng SeededRng::substream(std::string_view name) const {
  // Keyed by the root seed only, never by current generator state.
  return SeededRng(seed_, fnv1a(name));
}

std::uint64_t SeededRng::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double SeededRng::uniform(double lo, double hi) {
  if (!(lo < hi)) {
    throw std::invalid_argument("uniform: lo must be < hi");
  }
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

std::vector<double> rng_uniform(SeededRng& rng, double lo, double hi,
                                std::size_t count) {
  if (!(lo < hi)) {
    throw std::invalid_argument("rng_uniform: lo must be < hi");
  }
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(rng.uniform(lo, hi));
  return out;
}

}  // namespace esnforce
