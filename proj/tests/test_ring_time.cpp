#include "oracles.hpp"
#include "ssbcs/ring_time.hpp"
#include "ssbcs/random.hpp"

#include <gtest/gtest.h>

using namespace ssbcs;

TEST(RingTime, WrapAddExamples) {
  EXPECT_EQ(wrap_add(90, 20, 100), 10u);
  EXPECT_EQ(wrap_add(0, 0, 100), 0u);
  EXPECT_EQ(wrap_add(999, 1, 1000), 0u);
}

TEST(RingTime, WrapSubExamples) {
  EXPECT_EQ(wrap_sub(10, 90, 100), 20u);
  EXPECT_EQ(wrap_sub(5, 5, 100), 0u);
  EXPECT_EQ(wrap_sub(0, 1, 1000), 999u);
}

TEST(RingTime, DistExamples) {
  EXPECT_EQ(ring_dist(95, 5, 100), 10u);
  EXPECT_EQ(ring_dist(5, 5, 100), 0u);
  EXPECT_EQ(ring_dist(0, 50, 100), 50u);
}

TEST(RingTime, CircSortExamples) {
  std::vector<Tick> a{98, 2, 4}, b{7, 7, 7}, c{0, 25, 50, 75};
  EXPECT_EQ(circ_sort(a, 100), (std::vector<Tick>{98, 2, 4}));
  EXPECT_EQ(circ_sort(b, 100), (std::vector<Tick>{7, 7, 7}));
  EXPECT_EQ(circ_sort(c, 100), (std::vector<Tick>{0, 25, 50, 75}));
}

TEST(RingTime, MedianExamples) {
  std::vector<Tick> a{10, 12, 14}, b{98, 2, 4}, c{1, 3, 5, 7};
  EXPECT_EQ(ring_med(a, 100), 12u);
  EXPECT_EQ(ring_med(b, 100), 2u);
  EXPECT_EQ(ring_med(c, 100), 3u);
}

TEST(RingTime, Errors) {
  std::vector<Tick> empty;
  EXPECT_THROW(ring_med(empty, 100), UsageError);
  EXPECT_THROW(circ_sort(empty, 100), UsageError);
  EXPECT_THROW(wrap_add(100, 1, 100), ConfigError);
  EXPECT_THROW(wrap_sub(1, 100, 100), ConfigError);
  EXPECT_THROW(Ring(1), ConfigError);
  std::vector<Tick> bad{1, 200};
  EXPECT_THROW(ring_med(bad, 100), ConfigError);
}

TEST(RingTime, SignedDiffAndWrap) {
  Ring r(100);
  EXPECT_EQ(r.signed_diff(5, 95), 10);
  EXPECT_EQ(r.signed_diff(95, 5), -10);
  EXPECT_EQ(r.signed_diff(50, 0), 50);
  EXPECT_EQ(r.wrap(-1), 99u);
  EXPECT_EQ(r.wrap(250), 50u);
}

TEST(RingTimeProperty, AddSubInverseExhaustive) {
  for (Tick tau = 2; tau <= 64; ++tau) {
    for (Tick a = 0; a < tau; ++a) {
      for (Tick b = 0; b < tau; ++b) ASSERT_EQ(wrap_sub(wrap_add(a, b, tau), b, tau), a);
    }
  }
}

TEST(RingTimeProperty, TriangleInequalityExhaustive) {
  for (Tick tau = 2; tau <= 32; ++tau) {
    for (Tick a = 0; a < tau; ++a)
      for (Tick b = 0; b < tau; ++b)
        for (Tick c = 0; c < tau; ++c)
          ASSERT_LE(ring_dist(a, c, tau), ring_dist(a, b, tau) + ring_dist(b, c, tau));
  }
}

TEST(RingTimeProperty, MedianIsMemberAndOrderFree) {
  Rng rng(11);
  for (int trial = 0; trial < 20000; ++trial) {
    const Tick tau = 2 + rng.below(500);
    std::vector<Tick> v(1 + rng.below(9));
    for (auto& x : v) x = rng.below(tau);
    const Tick m = ring_med(v, tau);
    ASSERT_NE(std::find(v.begin(), v.end(), m), v.end());
    std::reverse(v.begin(), v.end());
    ASSERT_EQ(ring_med(v, tau), m);
  }
}

TEST(RingTimeProperty, RotationEquivarianceWithUniqueGap) {
  Rng rng(12);
  int checked = 0;
  while (checked < 20000) {
    const Tick tau = 3 + rng.below(300);
    std::vector<Tick> v(2 + rng.below(7));
    for (auto& x : v) x = rng.below(tau);
    // keep only inputs whose largest gap is unique
    auto s = v;
    std::sort(s.begin(), s.end());
    std::vector<Tick> gaps;
    for (std::size_t k = 0; k < s.size(); ++k) gaps.push_back(k == 0 ? s[0] + tau - s.back() : s[k] - s[k - 1]);
    const Tick g = *std::max_element(gaps.begin(), gaps.end());
    if (std::count(gaps.begin(), gaps.end(), g) != 1) continue;
    const Tick k = rng.below(tau);
    std::vector<Tick> rot;
    for (Tick x : v) rot.push_back(wrap_add(x, k, tau));
    ASSERT_EQ(ring_med(rot, tau), wrap_add(ring_med(v, tau), k, tau));
    ASSERT_EQ(ring_med(v, tau), oracle::med(v, tau));
    ++checked;
  }
}

TEST(RingTimeProperty, CircSortArcExcludesLargestGap) {
  Rng rng(13);
  for (int trial = 0; trial < 20000; ++trial) {
    const Tick tau = 2 + rng.below(400);
    std::vector<Tick> v(1 + rng.below(8));
    for (auto& x : v) x = rng.below(tau);
    auto s = circ_sort(v, tau);
    ASSERT_EQ(s.size(), v.size());
    // the wrap gap from last back to first is at least every inner gap
    const Tick outer = s.size() == 1 ? tau : wrap_sub(s.front(), s.back(), tau);
    const Tick outer_gap = outer == 0 ? tau : outer;
    for (std::size_t k = 1; k < s.size(); ++k) {
      ASSERT_LE(wrap_sub(s[k], s[k - 1], tau), outer_gap);
    }
    auto u = unwrap_from_start(s, tau);
    ASSERT_TRUE(std::is_sorted(u.begin(), u.end()));
  }
}
