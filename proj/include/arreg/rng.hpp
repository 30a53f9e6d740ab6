#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace arreg {

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seeded generator. Every random stream in the library is derived from one
/// 64-bit seed by hashing an operation label (and optionally an index) into
/// the stream id, so independent trials are reproducible in any order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static Rng derive(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) {
    return Rng(splitmix64(seed ^ fnv1a64(label)) ^ splitmix64(index + 0x632be59bd9b4e019ull));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// k distinct values from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace arreg
