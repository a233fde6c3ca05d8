#pragma once

#include "ssbcs/sysconfig.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace ssbcs {

using SimTime = std::int64_t;

/// Clock readings of the monitored nodes at one instant.
struct SyncSample {
  SimTime t = 0;
  std::vector<Tick> clocks;
};

struct SyncVerdict {
  bool ok = true;
  std::uint64_t eq1_violations = 0;
  std::uint64_t eq2_violations = 0;
  Tick max_spread = 0;
  std::optional<SimTime> first_violation;
};

/// Max pairwise ring distance.
Tick clock_spread(std::span<const Tick> clocks, Tick tau_max);

/// Checks precision at every sample and rate accuracy for every sample pair
/// at most T_max ticks apart, over samples with t in [t1, t2].
SyncVerdict sync_check(std::span<const SyncSample> samples, SimTime t1, SimTime t2,
                       const SystemConfig& cfg);

/// Incremental form of sync_check. It keeps the start of the current streak:
/// both conditions hold for every sample pair inside [streak_start, last t].
class SyncMonitor {
 public:
  SyncMonitor(const SystemConfig& cfg, int nodes);

  void observe(SimTime t, std::span<const Tick> clocks);

  SimTime streak_start() const { return streak_start_; }
  std::uint64_t eq1_violations() const { return eq1_violations_; }
  std::uint64_t eq2_violations() const { return eq2_violations_; }
  std::uint64_t samples() const { return samples_; }
  Tick last_spread() const { return last_spread_; }
  Tick max_spread_in_streak() const { return spread_max_.empty() ? 0 : spread_max_.front().second; }
  std::optional<SimTime> last_violation() const { return last_violation_; }

 private:
  struct Point {
    SimTime t;
    __int128 a;
    __int128 b;
  };
  struct Track {
    bool seen = false;
    Tick last = 0;
    __int128 unwrapped = 0;  // ticks
    std::deque<Point> buf;
    std::deque<Point> min_a;
    std::deque<Point> max_b;
  };

  void restart(SimTime after);
  void drop_through(SimTime t);

  Tick tau_;
  std::int64_t T_H_;
  Tick eps0_floor_;
  __int128 scale_;     // b * e_d
  __int128 rho_term_;  // a * e_d
  __int128 thr_;       // b * e_n * T_H
  SimTime delta_;
  std::vector<Track> tracks_;
  SimTime streak_start_ = 0;
  std::uint64_t eq1_violations_ = 0;
  std::uint64_t eq2_violations_ = 0;
  std::uint64_t samples_ = 0;
  Tick last_spread_ = 0;
  std::deque<std::pair<SimTime, Tick>> spread_max_;  // decreasing spreads
  std::optional<SimTime> last_violation_;
};

}  // namespace ssbcs
