#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace ssbcs {

/// Exact rational used for drift rates, precision bounds and probabilities.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "0.005", "-3", "1/200" or "2.5e-3" without going through binary
/// floating point.
Rational parse_rational(std::string_view text);

/// Exact decimal rendering of a double's shortest round-trip form.
Rational rational_from_double(double v);

std::int64_t floor_to_int(const Rational& r);
std::int64_t ceil_to_int(const Rational& r);
double to_double(const Rational& r);
std::string to_string(const Rational& r);

Rational pow(const Rational& base, unsigned exponent);

}  // namespace ssbcs
