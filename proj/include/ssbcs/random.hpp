#pragma once

#include "ssbcs/rational.hpp"

#include <cstdint>
#include <random>

namespace ssbcs {

/// splitmix64 finalizer; used to derive independent streams from one seed.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded source with exact, platform-independent draws. Standard library
/// distributions are avoided because their output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// True with probability p, exactly; one draw regardless of p.
  bool bernoulli(const Rational& p);
  /// Uniform double in [0, 1), 53 bits.
  double unit();

 private:
  std::mt19937_64 eng_;
};

}  // namespace ssbcs
