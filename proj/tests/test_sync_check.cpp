#include "ssbcs/random.hpp"
#include "ssbcs/stats.hpp"
#include "ssbcs/sync_check.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ssbcs;

namespace {

SystemConfig reference() { return SystemConfig::make(SystemParams{}); }

}  // namespace

TEST(SyncCheck, SingleNodeIsSynchronized) {
  auto cfg = reference();
  std::vector<SyncSample> s;
  for (int k = 0; k < 50; ++k) s.push_back({k * 1000, {static_cast<Tick>(k % cfg.derived.tau_max)}});
  auto v = sync_check(s, 0, 49000, cfg);
  EXPECT_TRUE(v.ok);
  EXPECT_EQ(v.max_spread, 0u);
}

TEST(SyncCheck, PrecisionBoundary) {
  auto cfg = reference();
  const Tick e = static_cast<Tick>(floor_to_int(cfg.derived.eps0));
  auto run = [&](Tick offset) {
    std::vector<SyncSample> s;
    for (int k = 0; k < 20; ++k) {
      const Tick a = static_cast<Tick>(k) % cfg.derived.tau_max;
      s.push_back({k * 1000, {a, wrap_add(a, offset, cfg.derived.tau_max)}});
    }
    return sync_check(s, 0, 19000, cfg);
  };
  EXPECT_TRUE(run(e).ok);
  auto bad = run(e + 1);
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.eq1_violations, 20u);
  EXPECT_EQ(bad.first_violation, 0);
}

TEST(SyncCheck, RateBoundary) {
  // One node runs a fraction fast relative to real time.
  auto cfg = reference();
  std::vector<SyncSample> s;
  for (int k = 0; k <= 400; ++k) {
    const Tick h = static_cast<Tick>((k * 11 / 10) % static_cast<int>(cfg.derived.tau_max));
    s.push_back({static_cast<SimTime>(k) * 1000, {h}});
  }
  auto v = sync_check(s, 0, 400000, cfg);
  EXPECT_FALSE(v.ok);
  EXPECT_GT(v.eq2_violations, 0u);
  EXPECT_EQ(v.eq1_violations, 0u);
}

TEST(SyncCheck, Errors) {
  auto cfg = reference();
  std::vector<SyncSample> s{{0, {1, 2}}, {1000, {1}}};
  EXPECT_THROW(sync_check(s, 0, 1000, cfg), UsageError);
  EXPECT_THROW(sync_check(s, 5, 1, cfg), UsageError);
}

TEST(SyncMonitorProperty, StreakIsLongestValidSuffix) {
  auto cfg = reference();
  const Tick tau = cfg.derived.tau_max;
  Rng rng(61);
  for (int run = 0; run < 16; ++run) {
    SyncMonitor mon(cfg, 3);
    std::vector<SyncSample> all;
    std::vector<Tick> c{rng.below(tau), rng.below(tau), rng.below(tau)};
    if (run % 2) c = {100, 105, 110};
    for (int k = 0; k < 220; ++k) {
      const SimTime t = static_cast<SimTime>(k) * 5000;
      for (auto& x : c) {
        std::int64_t step = 5 + static_cast<std::int64_t>(rng.below(3)) - 1;
        if (rng.below(40) == 0) step += static_cast<std::int64_t>(rng.below(81)) - 40;
        x = Ring(tau).wrap(static_cast<std::int64_t>(x) + step);
      }
      if (rng.below(30) == 0) c[1] = c[0];
      if (rng.below(30) == 0) c[2] = c[0];
      all.push_back({t, c});
      mon.observe(t, c);
      const SimTime start = mon.streak_start();
      if (start <= t) {
        ASSERT_TRUE(sync_check(all, start, t, cfg).ok) << run << " " << k;
      }
      // the sample just before the streak must break it
      const SyncSample* prev = nullptr;
      for (const auto& s : all)
        if (s.t < start) prev = &s;
      if (prev) ASSERT_FALSE(sync_check(all, prev->t, t, cfg).ok) << run << " " << k;
    }
  }
}

TEST(Stats, ClopperPearsonClosedForms) {
  const double a = 0.01;
  EXPECT_EQ(clopper_pearson_lower(0, 50, a), 0.0);
  EXPECT_NEAR(clopper_pearson_lower(50, 50, a), std::pow(a, 1.0 / 50), 1e-12);
  EXPECT_NEAR(clopper_pearson_upper(0, 50, a), 1 - std::pow(a, 1.0 / 50), 1e-12);
  EXPECT_EQ(clopper_pearson_upper(50, 50, a), 1.0);
  const double lo = clopper_pearson_lower(30, 100, a), hi = clopper_pearson_upper(30, 100, a);
  EXPECT_LT(lo, 0.3);
  EXPECT_GT(hi, 0.3);
  EXPECT_THROW(clopper_pearson_lower(5, 4, a), UsageError);
  EXPECT_THROW(clopper_pearson_lower(1, 4, 0.0), UsageError);
}
