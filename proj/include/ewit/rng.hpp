// rng.hpp - portable counter-based generator.
//
// Stream (key, counter): output_i = splitmix64_mix(key + i * 0x9E3779B97F4A7C15)
// for i = 1, 2, ... where key = splitmix64_mix(seed) ^ splitmix64_mix(~stream).
// splitmix64_mix is the finalizer of Steele, Lea & Flood's SplitMix64:
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z =  z ^ (z >> 31)
// Uniform doubles take the top 53 bits. Normals use Box-Muller (cosine branch
// only, no cached second value). Exponentials use -log(1 - u).

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ewit {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(splitmix64_mix(seed) ^ splitmix64_mix(~stream)) {}

  std::uint64_t next_u64() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential() { return -std::log(1.0 - uniform()); }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ewit
