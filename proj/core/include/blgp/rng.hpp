#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace blgp {

/// Seeded generator that can be split into independent streams by label, so
/// each component of a run draws from its own reproducible stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Child generator whose seed depends only on this seed and the label.
  Rng split(std::string_view label) const;

  std::mt19937_64& engine() noexcept { return engine_; }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace blgp
