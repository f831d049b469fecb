// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random number streams for reproducible Monte Carlo runs.
// Every simulation trial draws from its own stream derived from
// (master seed, path of indices), so results do not depend on scheduling
// or thread count.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hashbeam {

/// SplitMix64 finalizer; bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream key for (master seed, path of indices). Used to give every
/// (candidate, trial, ...) its own independent generator.
constexpr std::uint64_t derive_key(std::uint64_t master,
                                   std::initializer_list<std::uint64_t> path) {
  std::uint64_t k = mix64(master + 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t id : path) {
    k = mix64(k ^ (id + 0x9e3779b97f4a7c15ULL + (k << 6)));
  }
  return k;
}

/// xoshiro256++ generator. Not a std engine on purpose: the output sequence
/// is fully specified here, so seeded runs are stable across platforms and
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    // SplitMix64 seeding, as recommended for the xoshiro family.
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += 0x9e3779b97f4a7c15ULL;
      word = mix64(s);
    }
  }

  static Rng derived(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_key(master, path));
  }

  std::uint64_t next_u64() {
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

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Consumes exactly two 64-bit words per
  /// draw, which keeps per-trial stream consumption deterministic.
  double gaussian() {
    const double u = uniform_open();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
  }

  /// Unbiased uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

/// Partial Fisher-Yates: after the call, pool[0..count) holds a uniform
/// random `count`-subset of the pool (order random); the tail is the rest.
template <typename T>
void partial_shuffle(std::vector<T>& pool, int count, Rng& rng) {
  if (count < 0 || static_cast<std::size_t>(count) > pool.size()) {
    throw std::invalid_argument("partial_shuffle: count out of range");
  }
  for (int i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
}

}  // namespace hashbeam
