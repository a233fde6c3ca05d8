#include "ssbcs/random.hpp"

#include "ssbcs/ring_time.hpp"

#include <limits>

namespace ssbcs {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw UsageError("Rng::below(0)");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = eng_();
    if (r >= threshold) return r % n;
  }
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw UsageError("Rng::between with hi < lo");
  auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(eng_());
  return lo + static_cast<std::int64_t>(below(span + 1));
}

bool Rng::bernoulli(const Rational& p) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(p);
  const cpp_int den = boost::multiprecision::denominator(p);
  if (den > cpp_int(std::numeric_limits<std::uint64_t>::max())) {
    throw ConfigError("probability denominator exceeds 64 bits: " + to_string(p));
  }
  std::uint64_t u = below(den.convert_to<std::uint64_t>());
  if (num <= 0) return false;
  return cpp_int(u) < num;
}

double Rng::unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

}  // namespace ssbcs
