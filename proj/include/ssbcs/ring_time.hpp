#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssbcs {

/// Tick count on the clock ring [[tau_max]] = {0, ..., tau_max - 1}.
using Tick = std::uint64_t;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Modular clock algebra over a fixed modulus.
///
/// Every clock-valued quantity in the protocol (hardware counters, adjustable
/// clocks, offsets, schedule deltas) lives on this ring. Operands must already
/// be reduced; an out-of-range operand is a configuration error rather than
/// something to silently fold back.
class Ring {
 public:
  explicit Ring(Tick modulus);

  Tick modulus() const noexcept { return modulus_; }

  Tick add(Tick a, Tick b) const;
  Tick sub(Tick a, Tick b) const;
  /// min(a - b, b - a), always in [0, modulus / 2].
  Tick dist(Tick a, Tick b) const;

  /// Reduces an arbitrary signed integer onto the ring.
  Tick wrap(std::int64_t v) const noexcept;
  /// Representative of a - b in (-modulus/2, modulus/2].
  std::int64_t signed_diff(Tick a, Tick b) const;

  bool contains(Tick v) const noexcept { return v < modulus_; }
  void check(Tick v) const;

 private:
  Tick modulus_;
};

Tick wrap_add(Tick a, Tick b, Tick tau_max);
Tick wrap_sub(Tick a, Tick b, Tick tau_max);
Tick ring_dist(Tick a, Tick b, Tick tau_max);

/// Orders a multiset along the ring: the largest gap between neighbouring
/// values is cut and the remaining arc is listed from its start. Among gaps of
/// equal size the cut producing the smallest arc-start value wins.
std::vector<Tick> circ_sort(std::span<const Tick> values, Tick tau_max);

/// Lower-middle element of circ_sort(values); always a member of the input.
Tick ring_med(std::span<const Tick> values, Tick tau_max);

/// Offsets of circ-sorted values from the first one (non-decreasing).
std::vector<Tick> unwrap_from_start(std::span<const Tick> sorted, Tick tau_max);

}  // namespace ssbcs
