#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace gazecone {

// Counter-based draws built on the SplitMix64 finalizer. Every draw is a pure
// function of (seed, key...), so frames can be generated in any order or in
// parallel and still match bit for bit across platforms.
class SplitMixStream {
 public:
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  explicit SplitMixStream(std::uint64_t seed) : seed_(mix(seed)) {}

  std::uint64_t bits(std::initializer_list<std::uint64_t> key) const {
    std::uint64_t h = seed_;
    for (std::uint64_t k : key) h = mix(h ^ mix(k));
    return h;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform(std::initializer_list<std::uint64_t> key) const {
    return static_cast<double>(bits(key) >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller on two keyed uniforms.
  double normal(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const {
    const double u1 = 1.0 - uniform({a, b, c, d, 0});  // (0, 1]
    const double u2 = uniform({a, b, c, d, 1});
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace gazecone
