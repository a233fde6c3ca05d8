#include "ssbcs/stats.hpp"

#include "ssbcs/ring_time.hpp"

#include <boost/math/special_functions/beta.hpp>

namespace ssbcs {

double clopper_pearson_lower(std::uint64_t k, std::uint64_t n, double alpha) {
  if (n == 0) throw UsageError("no trials");
  if (k > n) throw UsageError("more successes than trials");
  if (!(alpha > 0 && alpha < 1)) throw UsageError("alpha must lie in (0, 1)");
  if (k == 0) return 0.0;
  return boost::math::ibeta_inv(static_cast<double>(k), static_cast<double>(n - k + 1), alpha);
}

double clopper_pearson_upper(std::uint64_t k, std::uint64_t n, double alpha) {
  if (n == 0) throw UsageError("no trials");
  if (k > n) throw UsageError("more successes than trials");
  if (!(alpha > 0 && alpha < 1)) throw UsageError("alpha must lie in (0, 1)");
  if (k == n) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(k + 1), static_cast<double>(n - k), 1 - alpha);
}

}  // namespace ssbcs
