#pragma once

#include <cstdint>

namespace ssbcs {

/// One-sided Clopper-Pearson bounds at confidence 1 - alpha.
double clopper_pearson_lower(std::uint64_t successes, std::uint64_t trials, double alpha);
double clopper_pearson_upper(std::uint64_t successes, std::uint64_t trials, double alpha);

}  // namespace ssbcs
