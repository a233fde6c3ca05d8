#include "ssbcs/ring_time.hpp"

#include <algorithm>
#include <array>

namespace ssbcs {

Ring::Ring(Tick modulus) : modulus_(modulus) {
  if (modulus < 2) {
    throw ConfigError("ring modulus must be at least 2, got " + std::to_string(modulus));
  }
}

void Ring::check(Tick v) const {
  if (v >= modulus_) {
    throw ConfigError("clock value " + std::to_string(v) + " outside ring of size " +
                      std::to_string(modulus_));
  }
}

Tick Ring::add(Tick a, Tick b) const {
  check(a);
  check(b);
  Tick s = a + b;
  return s >= modulus_ ? s - modulus_ : s;
}

Tick Ring::sub(Tick a, Tick b) const {
  check(a);
  check(b);
  return a >= b ? a - b : a + (modulus_ - b);
}

Tick Ring::dist(Tick a, Tick b) const {
  Tick d = sub(a, b);
  return std::min(d, modulus_ - d);
}

Tick Ring::wrap(std::int64_t v) const noexcept {
  auto m = static_cast<std::int64_t>(modulus_);
  auto r = v % m;
  if (r < 0) r += m;
  return static_cast<Tick>(r);
}

std::int64_t Ring::signed_diff(Tick a, Tick b) const {
  auto d = static_cast<std::int64_t>(sub(a, b));
  auto m = static_cast<std::int64_t>(modulus_);
  return 2 * d > m ? d - m : d;
}

Tick wrap_add(Tick a, Tick b, Tick tau_max) { return Ring(tau_max).add(a, b); }
Tick wrap_sub(Tick a, Tick b, Tick tau_max) { return Ring(tau_max).sub(a, b); }
Tick ring_dist(Tick a, Tick b, Tick tau_max) { return Ring(tau_max).dist(a, b); }

namespace {

// Sorts in place and rotates so the arc after the largest gap comes first.
void circ_sort_inplace(std::span<Tick> v, Tick tau_max) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  // Gap before position k runs from v[k-1] to v[k]; the gap before 0 wraps.
  std::size_t best = 0;
  Tick best_gap = v[0] + tau_max - v[n - 1];
  for (std::size_t k = 1; k < n; ++k) {
    Tick gap = v[k] - v[k - 1];
    // Strictly larger only: v is ascending, so on ties the earlier start wins.
    if (gap > best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(best), v.end());
}

void check_all(std::span<const Tick> values, Tick tau_max) {
  if (tau_max < 2) throw ConfigError("ring modulus must be at least 2");
  for (Tick v : values) {
    if (v >= tau_max) {
      throw ConfigError("clock value " + std::to_string(v) + " outside ring of size " +
                        std::to_string(tau_max));
    }
  }
}

}  // namespace

std::vector<Tick> circ_sort(std::span<const Tick> values, Tick tau_max) {
  if (values.empty()) throw UsageError("circ_sort of an empty multiset");
  check_all(values, tau_max);
  std::vector<Tick> out(values.begin(), values.end());
  circ_sort_inplace(out, tau_max);
  return out;
}

Tick ring_med(std::span<const Tick> values, Tick tau_max) {
  if (values.empty()) throw UsageError("ring_med of an empty multiset");
  check_all(values, tau_max);
  const std::size_t n = values.size();
  if (n <= 16) {
    std::array<Tick, 16> buf{};
    std::copy(values.begin(), values.end(), buf.begin());
    std::span<Tick> s(buf.data(), n);
    circ_sort_inplace(s, tau_max);
    return s[(n - 1) / 2];
  }
  std::vector<Tick> buf(values.begin(), values.end());
  circ_sort_inplace(buf, tau_max);
  return buf[(n - 1) / 2];
}

std::vector<Tick> unwrap_from_start(std::span<const Tick> sorted, Tick tau_max) {
  std::vector<Tick> out;
  out.reserve(sorted.size());
  if (sorted.empty()) return out;
  Ring r(tau_max);
  for (Tick v : sorted) out.push_back(r.sub(v, sorted.front()));
  return out;
}

}  // namespace ssbcs
