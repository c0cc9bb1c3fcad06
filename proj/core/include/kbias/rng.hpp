#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kbias {

/// Name recorded in output metadata. Bump the suffix whenever the draw
/// sequence produced for a given seed changes.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64/v1";

/// SplitMix64 finalizer: a bijective 64-bit avalanche function.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of replica/sample `index` under `master`:
///   mix(master, index) = splitmix64(master ^ splitmix64(index)).
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

/// Random source with portable conversions. std::mt19937_64 output is fixed
/// by the standard; the std distributions are not, so the conversions to
/// doubles and bounded integers are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kbias
