#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace steptx {

// Splittable counter-style generator. A stream is fully determined by its
// key parts (e.g. base seed, trial, purpose tag, source index), so trials
// can run in any order or concurrently and still reproduce bit-identical
// draws. Sequences are the splitmix64 orbit of the derived key.
class CounterRng {
 public:
  explicit CounterRng(std::initializer_list<std::uint64_t> key_parts) {
    std::uint64_t acc = 0x243F6A8885A308D3ull;  // arbitrary non-zero start
    for (std::uint64_t part : key_parts) {
      acc = scramble(acc + scramble(part + kGamma));
    }
    state_ = acc;
  }

  std::uint64_t next_u64() { return scramble(state_ += kGamma); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the partner draw is cached.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, n); rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Derive a 64-bit seed for a child stream.
  static std::uint64_t derive(std::initializer_list<std::uint64_t> parts) {
    CounterRng r(parts);
    return r.next_u64();
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t scramble(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Stream tags keep draws for different purposes statistically unrelated
// even under the same (seed, trial) pair.
namespace rng_tag {
inline constexpr std::uint64_t target_noise = 1;
inline constexpr std::uint64_t source_noise = 2;
inline constexpr std::uint64_t discrepancy = 3;
inline constexpr std::uint64_t permutation = 4;
}  // namespace rng_tag

}  // namespace steptx
