#pragma once

#include "ssbcs/adversary.hpp"
#include "ssbcs/simnet.hpp"
#include "ssbcs/sysconfig.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ssbcs {

struct ScenarioConfig {
  SystemParams params;
  std::optional<TTSchedule> schedule;  // default_schedule when absent
  std::string adversary = "Silent";
  AdversaryOptions adversary_options;
  InitialState init = InitialState::Random;
  // Absent: the last f0 MES and the last f1 planes are faulty.
  std::optional<std::vector<int>> faulty_mes;
  std::optional<std::vector<int>> faulty_planes;
  InitialOverrides overrides;
  std::uint64_t horizon_windows = 10000;
  std::optional<std::uint64_t> confirm_windows;  // default g0 + 1
  bool stop_on_stabilize = true;
  std::vector<std::uint64_t> seeds;
  std::uint64_t seed_count = 0;  // used when seeds is empty
  std::uint64_t base_seed = 1;

  SystemConfig system() const;
  FaultAssignment fault_assignment() const;
  std::vector<std::uint64_t> seed_list() const;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::string adversary;
  std::optional<std::uint64_t> stabilization_window;
  SimTime stabilization_time = 0;
  std::uint64_t windows_run = 0;
  Tick max_precision_after_stb = 0;
  std::uint64_t eq1_violations = 0;
  std::uint64_t eq2_violations = 0;
  std::uint64_t resync_point_count = 0;
  std::optional<SimTime> first_resync_point;
  std::uint64_t tmax_intervals = 0;              // whole T_max intervals simulated
  std::uint64_t tmax_intervals_with_resync = 0;  // of those, holding a resync point
  std::uint64_t attempts = 0;  // stabilization attempts of (g0+1) T_max each
  EngineStats stats;
};

/// Definition-based audit: toss times with a head at some honest MWS while
/// another honest MWS shows grand_life 0 in its first window since then.
std::vector<SimTime> resync_points(const std::vector<CoinRecord>& log, const std::vector<int>& honest_mws);

RunResult run_once(const ScenarioConfig& sc, std::uint64_t seed, std::ostream* trace = nullptr);

struct StatsSummary {
  std::string adversary;
  std::uint64_t runs = 0;
  std::uint64_t stabilized = 0;
  bool all_stabilized = false;
  bool complete = true;
  std::uint64_t attempts = 0;
  double attempt_freq = 0;
  double attempt_freq_lcb = 0;
  double q1_bound = 0;
  bool q1_ok = false;
  double mean_stab_windows = 0;
  double mean_stab_limit = 0;  // (2/q1 + g0) * 1.2
  bool mean_ok = false;
  std::uint64_t max_stab_window = 0;
  std::uint64_t median_stab_window = 0;
  std::uint64_t resync_windows = 0;  // T_max intervals holding a resync point
  std::uint64_t resync_intervals = 0;
  double resync_freq = 0;
  double resync_freq_lcb = 0;
  double lemma1_bound = 0;
  Tick worst_precision = 0;
};

/// Pure function of the multiset of results.
StatsSummary summarize(const std::vector<RunResult>& results, const SystemConfig& cfg, double alpha = 0.01);

std::vector<RunResult> run_monte_carlo(const ScenarioConfig& sc, const std::vector<std::uint64_t>& seeds);

struct Lemma1Result {
  std::uint64_t intervals = 0;
  std::uint64_t hits = 0;
  double freq = 0;
  double lcb = 0;
  double bound = 0;
  bool ok = false;
};

/// Coin-only model: the honest MWS toss once per T ticks with random phases
/// and the interval length is T_max.
Lemma1Result lemma1_coin_model(const SystemConfig& cfg, int honest_mws, std::uint64_t intervals,
                               std::uint64_t seed, double alpha = 0.01);

std::string to_json(const RunResult& r);
std::string to_json(const StatsSummary& s);
std::string to_json(const Lemma1Result& r);
std::string to_table(const std::vector<RunResult>& rs);
std::string to_table(const StatsSummary& s);

}  // namespace ssbcs
