// Deterministic random number generation.
//
// Every stochastic component of the pipeline (sampling, negative generation,
// parameter init, dropout) draws from an Rng derived from one top-level seed
// via named or indexed sub-streams, so runs are reproducible bit-for-bit on
// a given platform and independent of thread scheduling.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace tkge {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Two-value mixer used to derive sub-stream seeds.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  return splitmix64(s);
}

}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next_u64() { return detail::splitmix64(state_); }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t next_below(std::uint64_t n) {
    // Multiply-shift; bias is negligible for n << 2^64 and the result is
    // deterministic, which is what the pipeline contracts require.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via Box-Muller; the spare value is discarded so the
  // state stays a single 64-bit word.
  double normal() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  bool coin() { return (next_u64() & 1ull) != 0; }

  // Named sub-stream derived from this generator's seed (not its state):
  // stream("init") is the same no matter how much the parent has been used.
  Rng stream(std::string_view name) const {
    return Rng(detail::mix(seed_, detail::fnv1a64(name)));
  }

  // Indexed sub-stream, for per-item generators (one per positive, per
  // worker, per step) that must not depend on iteration order.
  Rng stream(std::uint64_t index) const {
    return Rng(detail::mix(seed_, 0x5851f42d4c957f2dull + index));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace tkge
