#include "ssbcs/adversary.hpp"
#include "ssbcs/harness.hpp"
#include "ssbcs/simnet.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

using namespace ssbcs;
using json = nlohmann::json;

namespace {

std::vector<json> parse(const std::string& trace) {
  std::vector<json> out;
  std::istringstream in(trace);
  std::string line;
  while (std::getline(in, line)) out.push_back(json::parse(line));
  return out;
}

ScenarioConfig scenario(const std::string& adversary, InitialState init, std::uint64_t windows) {
  ScenarioConfig sc;
  sc.adversary = adversary;
  sc.init = init;
  sc.horizon_windows = windows;
  sc.stop_on_stabilize = false;
  return sc;
}

std::string trace_of(const ScenarioConfig& sc, std::uint64_t seed) {
  std::ostringstream os;
  run_once(sc, seed, &os);
  return os.str();
}

// Asks for periods, delays and skews outside the model bounds.
class Unruly : public Adversary {
 public:
  explicit Unruly(const SystemConfig& cfg) : cfg_(cfg) {}
  std::string name() const override { return "Unruly"; }
  SimTime tick_period(int node, std::uint64_t) override { return node % 2 ? 1 : 10 * cfg_.params.T_H; }
  SimTime delay(const DelayQuery& q) override { return q.uplink ? -5 : 100 * cfg_.params.d_max; }
  SimTime sig_skew(int, int, std::uint64_t) override { return 100 * cfg_.derived.eps_rnd + 1; }

 private:
  SystemConfig cfg_;
};

}  // namespace

TEST(EventQueue, TieOrderIgnoresInsertionOrder) {
  std::vector<std::tuple<int, int>> keys;
  for (int node = 0; node < 3; ++node)
    for (int rank = 0; rank < 3; ++rank) keys.emplace_back(node, rank);
  std::vector<std::tuple<int, int>> expected = keys;
  std::sort(expected.begin(), expected.end());
  std::vector<std::size_t> perm(keys.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    for (std::size_t k = perm.size(); k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
    EventQueue<int> q;
    for (auto idx : perm) q.push(50, std::get<0>(keys[idx]), std::get<1>(keys[idx]), 0);
    q.push(49, 9, 9, 0);
    std::vector<std::tuple<int, int>> got;
    EXPECT_EQ(q.pop().t, 49);
    while (!q.empty()) {
      auto it = q.pop();
      got.emplace_back(it.node, it.rank);
    }
    ASSERT_EQ(got, expected);
  }
}

TEST(EventQueue, SameKeyKeepsInsertionOrder) {
  EventQueue<int> q;
  for (int v = 0; v < 10; ++v) q.push(7, 1, 1, v);
  for (int v = 0; v < 10; ++v) EXPECT_EQ(q.pop().payload, v);
}

TEST(EventQueue, PastEventIsInternalFault) {
  EventQueue<int> q;
  q.push(10, 0, 0, 0);
  q.pop();
  EXPECT_THROW(q.push(9, 0, 0, 0), InternalFault);
}

TEST(HardwareClock, TicksFollowPeriods) {
  HardwareClock c(95, 0, 100, [](std::uint64_t k) { return static_cast<SimTime>(k % 2 ? 990 : 1010); });
  EXPECT_EQ(c.tick_time(0), 0);
  EXPECT_EQ(c.tick_time(1), 1010);
  EXPECT_EQ(c.tick_time(2), 2000);
  EXPECT_EQ(c.index_at(1999), 1u);
  EXPECT_EQ(c.index_at(2000), 2u);
  EXPECT_EQ(c.value_at(0), 95u);
  EXPECT_EQ(c.value_of_index(5), 0u);
  c.trim(50000);
  EXPECT_EQ(c.index_at(60000), 60u);
}

TEST(Simnet, SameSeedSameTrace) {
  for (const auto& adv : adversary_names()) {
    auto sc = scenario(adv, InitialState::Random, 40);
    const auto a = trace_of(sc, 17);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, trace_of(sc, 17)) << adv;
    EXPECT_NE(a, trace_of(sc, 18)) << adv;
  }
}

TEST(Simnet, BoundsAreEnforced) {
  const auto cfg = SystemConfig::make(SystemParams{});
  WorldOptions o;
  o.faults.faulty_mes = {3};
  o.faults.faulty_planes = {2};
  World w(cfg, std::make_unique<Unruly>(cfg), o);
  w.run_until(30 * w.window_length());
  const auto& s = w.stats();
  const auto& P = cfg.params;
  EXPECT_GT(s.clamps, 0u);
  EXPECT_GE(Rational(s.min_period), (1 - P.rho) * P.T_H);
  EXPECT_LE(Rational(s.max_period), (1 + P.rho) * P.T_H);
  EXPECT_GE(s.min_delay, P.d_min);
  EXPECT_LE(s.max_delay, P.d_max);
  EXPECT_LE(s.max_skew, cfg.derived.eps_rnd);
}

TEST(Simnet, FaultBudgetChecked) {
  const auto cfg = SystemConfig::make(SystemParams{});
  WorldOptions o;
  o.faults.faulty_mes = {2, 3};
  EXPECT_THROW(World(cfg, make_adversary("Silent", cfg, 1), o), UsageError);
}

TEST(Simnet, RoundLivenessAndIsolation) {
  auto sc = scenario("RandomNoise", InitialState::Random, 300);
  const auto cfg = sc.system();
  const auto faults = sc.fault_assignment();
  const auto lines = parse(trace_of(sc, 5));
  const Rational gap_limit = Rational(cfg.derived.T + cfg.params.T0 + 1) * (1 + cfg.params.rho) * cfg.params.T_H;
  std::map<int, std::int64_t> last_sig;
  std::map<std::tuple<int, std::uint64_t, int>, int> cols;
  std::uint64_t offslot = 0;
  for (const auto& j : lines) {
    const std::string ev = j["ev"];
    if (ev == "sig") {
      const int p = j["plane"];
      const std::int64_t t = j["t"];
      if (last_sig.count(p)) ASSERT_LE(Rational(t - last_sig[p]), gap_limit);
      last_sig[p] = t;
    } else if (ev == "up_recv" && j["ok"].get<bool>()) {
      const int p = j["plane"];
      ASSERT_FALSE(faults.plane_faulty(p));
      const auto key = std::make_tuple(p, j["round"].get<std::uint64_t>(), j["mes"].get<int>());
      ASSERT_LE(++cols[key], 1);
    } else if (ev == "offslot_drop") {
      ++offslot;
    } else if (ev == "sig_arrive" && j["fake"].get<bool>()) {
      ASSERT_TRUE(faults.plane_faulty(j["plane"].get<int>()));
    }
  }
  EXPECT_EQ(last_sig.size(), 2u);
  EXPECT_GT(offslot, 0u);
  EXPECT_FALSE(cols.empty());
}

TEST(Simnet, FakeRoundsOnlyFromFaultyPlanes) {
  const auto cfg = SystemConfig::make(SystemParams{});
  WorldOptions o;
  o.faults.faulty_mes = {3};
  o.faults.faulty_planes = {2};
  World w(cfg, make_adversary("Silent", cfg, 1), o);
  w.run_until(w.window_length());
  const SimTime t = w.now() + 10;
  EXPECT_FALSE(w.fake_round(0, 0, t, t + 5, 11));
  EXPECT_FALSE(w.fake_round(2, 3, t, t + 5, 11));
  EXPECT_TRUE(w.fake_round(2, 0, t, t + 5, 11));
}

TEST(Simnet, SkewAnchors) {
  // MaxSkew uses no skew on even planes and the full bound on odd planes.
  auto sc = scenario("MaxSkew", InitialState::Synchronized, 20);
  const auto cfg = sc.system();
  const auto lines = parse(trace_of(sc, 3));
  std::map<std::uint64_t, std::pair<int, std::int64_t>> sig;
  int checked = 0;
  for (const auto& j : lines) {
    const std::string ev = j["ev"];
    if (ev == "sig") sig[j["round"].get<std::uint64_t>()] = {j["plane"].get<int>(), j["t"].get<std::int64_t>()};
    if (ev == "sig_arrive" && !j["fake"].get<bool>()) {
      const auto& [p, t] = sig.at(j["round"].get<std::uint64_t>());
      const std::int64_t skew = j["t"].get<std::int64_t>() - t;
      ASSERT_EQ(skew, p % 2 ? cfg.derived.eps_rnd : 0);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Simnet, ZeroSkewSharesAnchor) {
  auto sc = scenario("Silent", InitialState::Synchronized, 10);
  sc.params.eps_rnd = 0;
  const auto lines = parse(trace_of(sc, 4));
  std::map<std::uint64_t, std::int64_t> sig;
  for (const auto& j : lines) {
    const std::string ev = j["ev"];
    if (ev == "sig") sig[j["round"].get<std::uint64_t>()] = j["t"].get<std::int64_t>();
    if (ev == "sig_arrive") ASSERT_EQ(j["t"].get<std::int64_t>(), sig.at(j["round"].get<std::uint64_t>()));
  }
}

TEST(Simnet, MaxSkewRelativeDrift) {
  // Hardware counters of MWS 0 (fast) and MWS 1 (slow), unwrapped.
  auto sc = scenario("MaxSkew", InitialState::Synchronized, 0);
  const auto cfg = sc.system();
  WorldOptions o;
  o.seed = 9;
  o.init = InitialState::Synchronized;
  o.faults = sc.fault_assignment();
  World w(cfg, make_adversary("MaxSkew", cfg, 9), o);
  const Tick tau = cfg.derived.tau_max;
  const int a = w.mws_node(0), b = w.mws_node(1);
  Tick last_a = w.hardware(a), last_b = w.hardware(b);
  std::int64_t run_a = 0, run_b = 0;
  const SimTime step = 50 * cfg.params.T_H;
  for (SimTime t = step; t <= 4000 * step; t += step) {
    w.run_until(t);
    const Tick ha = w.hardware(a), hb = w.hardware(b);
    run_a += wrap_sub(ha, last_a, tau);
    run_b += wrap_sub(hb, last_b, tau);
    last_a = ha;
    last_b = hb;
  }
  const double rho = to_double(cfg.params.rho);
  const double rate = static_cast<double>(run_a - run_b) / static_cast<double>(run_a);
  EXPECT_NEAR(rate, 2 * rho / (1 + rho), 1e-4);
}

TEST(Simnet, SplitBrainSplitsStableCondition) {
  std::uint64_t split = 0;
  for (std::uint64_t seed = 1; seed <= 100 && split == 0; ++seed) {
    ScenarioConfig sc;
    sc.adversary = "SplitBrain";
    split += run_once(sc, seed).stats.e_stb_split_windows;
  }
  EXPECT_GT(split, 0u);
}

TEST(Simnet, SilentWithoutFaultsDropsNothing) {
  ScenarioConfig sc = scenario("Silent", InitialState::Random, 100);
  sc.params.f0 = 0;
  sc.params.f1 = 0;
  auto r = run_once(sc, 12);
  EXPECT_EQ(r.stats.offslot_dropped, 0u);
  EXPECT_EQ(r.stats.clamps, 0u);
  EXPECT_GT(r.stats.uplinks_accepted, 0u);
}
