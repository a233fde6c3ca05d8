#include "ssbcs/harness.hpp"

#include "ssbcs/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace ssbcs {

SystemConfig ScenarioConfig::system() const {
  return schedule ? SystemConfig::make(params, *schedule) : SystemConfig::make(params);
}

FaultAssignment ScenarioConfig::fault_assignment() const {
  FaultAssignment f;
  if (faulty_mes) {
    f.faulty_mes = *faulty_mes;
  } else {
    for (int i = params.n0 - params.f0; i < params.n0; ++i) f.faulty_mes.push_back(i);
  }
  if (faulty_planes) {
    f.faulty_planes = *faulty_planes;
  } else {
    for (int p = params.n1 - params.f1; p < params.n1; ++p) f.faulty_planes.push_back(p);
  }
  return f;
}

std::vector<std::uint64_t> ScenarioConfig::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k < seed_count; ++k) out.push_back(base_seed + k);
  return out;
}

std::vector<SimTime> resync_points(const std::vector<CoinRecord>& log, const std::vector<int>& honest_mws) {
  std::map<int, std::vector<const CoinRecord*>> by;
  for (int s : honest_mws) by[s];
  for (const auto& r : log) {
    auto it = by.find(r.mws);
    if (it != by.end()) it->second.push_back(&r);
  }
  for (auto& [s, v] : by) {
    std::stable_sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->window_begin < b->window_begin; });
  }
  std::vector<SimTime> out;
  for (const auto& [s, v] : by) {
    for (const CoinRecord* r : v) {
      if (!r->head) continue;
      const SimTime t = r->toss_time;
      bool hit = false;
      for (const auto& [s2, v2] : by) {
        if (s2 == s) continue;
        auto it = std::lower_bound(v2.begin(), v2.end(), t,
                                   [](const CoinRecord* a, SimTime x) { return a->window_begin < x; });
        if (it != v2.end() && (*it)->grand_life == 0) {
          hit = true;
          break;
        }
      }
      if (hit) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

SimTime tmax_time(const SystemConfig& cfg) { return floor_to_int(cfg.derived.T_max * cfg.params.T_H); }

// Counts intervals [k L, (k+1) L) inside [0, end) that hold at least one point.
std::pair<std::uint64_t, std::uint64_t> interval_hits(const std::vector<SimTime>& pts, SimTime L, SimTime begin,
                                                      SimTime end) {
  if (L <= 0 || end <= begin) return {0, 0};
  const auto n = static_cast<std::uint64_t>((end - begin) / L);
  std::uint64_t hits = 0;
  std::int64_t last = -1;
  for (SimTime t : pts) {
    if (t < begin) continue;
    const auto k = static_cast<std::int64_t>((t - begin) / L);
    if (static_cast<std::uint64_t>(k) >= n) break;
    if (k != last) {
      ++hits;
      last = k;
    }
  }
  return {hits, n};
}

}  // namespace

RunResult run_once(const ScenarioConfig& sc, std::uint64_t seed, std::ostream* trace) {
  const SystemConfig cfg = sc.system();
  WorldOptions o;
  o.seed = seed;
  o.init = sc.init;
  o.faults = sc.fault_assignment();
  o.trace = trace;
  o.overrides = sc.overrides;
  auto adv = make_adversary(sc.adversary, cfg, derive_seed(seed, 2), sc.adversary_options);
  World w(cfg, std::move(adv), o);

  const SimTime W = w.window_length();
  const std::uint64_t confirm = sc.confirm_windows.value_or(static_cast<std::uint64_t>(cfg.derived.g0) + 1);
  RunResult r;
  r.seed = seed;
  r.adversary = sc.adversary;
  for (std::uint64_t k = 1; k <= sc.horizon_windows; ++k) {
    w.run_until(static_cast<SimTime>(k) * W);
    r.windows_run = k;
    if (!r.stabilization_window) {
      const SimTime s = w.monitor().streak_start();
      const auto c = static_cast<std::uint64_t>((s + W - 1) / W);
      if (k >= c + confirm) {
        r.stabilization_window = c;
        r.stabilization_time = static_cast<SimTime>(c) * W;
        if (sc.stop_on_stabilize) break;
      }
    }
  }

  const auto& mon = w.monitor();
  r.eq1_violations = mon.eq1_violations();
  r.eq2_violations = mon.eq2_violations();
  if (r.stabilization_window) r.max_precision_after_stb = mon.max_spread_in_streak();
  r.stats = w.stats();

  std::vector<int> honest;
  for (int p = 0; p < cfg.params.n1; ++p) {
    if (!o.faults.plane_faulty(p)) honest.push_back(p);
  }
  const auto pts = resync_points(w.coin_log(), honest);
  r.resync_point_count = pts.size();
  if (!pts.empty()) r.first_resync_point = pts.front();
  auto [hits, n] = interval_hits(pts, tmax_time(cfg), 0, w.now());
  r.tmax_intervals = n;
  r.tmax_intervals_with_resync = hits;

  const SimTime L = static_cast<SimTime>(cfg.derived.g0 + 1) * tmax_time(cfg);
  if (r.stabilization_window) {
    r.attempts = std::max<std::uint64_t>(1, static_cast<std::uint64_t>((r.stabilization_time + L - 1) / L));
  } else {
    const SimTime end = static_cast<SimTime>(r.windows_run) * W;
    r.attempts = static_cast<std::uint64_t>(end / L);
  }

  w.trace()
      .line("result", w.now())
      .f("seed", seed)
      .f("stb_window", r.stabilization_window ? static_cast<std::int64_t>(*r.stabilization_window) : -1)
      .f("windows", r.windows_run)
      .f("precision", static_cast<std::uint64_t>(r.max_precision_after_stb))
      .f("eq1", r.eq1_violations)
      .f("eq2", r.eq2_violations)
      .f("resync", r.resync_point_count)
      .f("events", r.stats.events);
  return r;
}

std::vector<RunResult> run_monte_carlo(const ScenarioConfig& sc, const std::vector<std::uint64_t>& seeds) {
  std::vector<RunResult> out;
  out.reserve(seeds.size());
  for (auto s : seeds) out.push_back(run_once(sc, s));
  return out;
}

StatsSummary summarize(const std::vector<RunResult>& results, const SystemConfig& cfg, double alpha) {
  StatsSummary s;
  s.runs = results.size();
  s.q1_bound = to_double(cfg.derived.q1_bound);
  s.lemma1_bound = to_double(cfg.derived.lemma1_bound);
  const double g0 = cfg.derived.g0;
  s.mean_stab_limit = (2.0 / s.q1_bound + g0) * 1.2;
  if (!results.empty()) s.adversary = results.front().adversary;

  std::vector<std::uint64_t> wins;
  std::uint64_t sum = 0;
  for (const auto& r : results) {
    s.attempts += r.attempts;
    s.resync_windows += r.tmax_intervals_with_resync;
    s.resync_intervals += r.tmax_intervals;
    s.worst_precision = std::max(s.worst_precision, r.max_precision_after_stb);
    if (r.stabilization_window) {
      ++s.stabilized;
      wins.push_back(*r.stabilization_window);
      sum += *r.stabilization_window;
    }
  }
  s.all_stabilized = s.runs > 0 && s.stabilized == s.runs;
  if (s.attempts > 0) {
    s.attempt_freq = static_cast<double>(s.stabilized) / static_cast<double>(s.attempts);
    s.attempt_freq_lcb = clopper_pearson_lower(s.stabilized, s.attempts, alpha);
  }
  if (s.resync_intervals > 0) {
    s.resync_freq = static_cast<double>(s.resync_windows) / static_cast<double>(s.resync_intervals);
    s.resync_freq_lcb = clopper_pearson_lower(s.resync_windows, s.resync_intervals, alpha);
  }
  s.q1_ok = s.attempts > 0 && s.attempt_freq_lcb >= s.q1_bound;
  if (!wins.empty()) {
    std::sort(wins.begin(), wins.end());
    s.mean_stab_windows = static_cast<double>(sum) / static_cast<double>(wins.size());
    s.max_stab_window = wins.back();
    s.median_stab_window = wins[(wins.size() - 1) / 2];
  }
  s.mean_ok = s.all_stabilized && s.mean_stab_windows <= s.mean_stab_limit;
  return s;
}

Lemma1Result lemma1_coin_model(const SystemConfig& cfg, int honest_mws, std::uint64_t intervals,
                               std::uint64_t seed, double alpha) {
  if (honest_mws < 2) throw UsageError("the coin model needs at least two honest MWS");
  if (intervals == 0) throw UsageError("the coin model needs at least one interval");
  const auto& d = cfg.derived;
  Rng rng(seed);
  const SimTime hi = floor_to_int((1 + cfg.params.rho) * Rational(cfg.params.T_H));
  const SimTime period = static_cast<SimTime>(d.T) * hi;  // slowest honest SIG spacing
  const SimTime L = tmax_time(cfg);
  const SimTime lead = static_cast<SimTime>(cfg.schedule.mc_recv.end - cfg.schedule.mc_recv.begin) * hi;
  const SimTime burn = static_cast<SimTime>(d.g0 + 2) * period;
  const SimTime end = burn + static_cast<SimTime>(intervals) * L + 2 * period;

  std::vector<CoinRecord> log;
  std::vector<int> ids;
  for (int s = 0; s < honest_mws; ++s) {
    ids.push_back(s);
    SimTime t = static_cast<SimTime>(rng.below(static_cast<std::uint64_t>(period)));
    int gl = static_cast<int>(rng.below(static_cast<std::uint64_t>(d.g0) + 1));
    for (; t < end; t += period) {
      const bool head = rng.bernoulli(d.q0);
      if (head) gl = d.g0;
      log.push_back(CoinRecord{s, t - lead, t, head, gl, false, Branch::Fta});
      if (gl > 0) --gl;
    }
  }
  const auto pts = resync_points(log, ids);
  Lemma1Result out;
  auto [hits, n] = interval_hits(pts, L, burn, burn + static_cast<SimTime>(intervals) * L);
  out.intervals = n;
  out.hits = hits;
  out.freq = static_cast<double>(hits) / static_cast<double>(n);
  out.lcb = clopper_pearson_lower(hits, n, alpha);
  out.bound = to_double(d.lemma1_bound);
  out.ok = out.lcb >= out.bound;
  return out;
}

std::string to_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["adversary"] = r.adversary;
  j["stabilization_window"] = r.stabilization_window ? nlohmann::ordered_json(*r.stabilization_window) : nullptr;
  j["windows_run"] = r.windows_run;
  j["max_precision_after_stb"] = r.max_precision_after_stb;
  j["eq1_violations"] = r.eq1_violations;
  j["eq2_violations"] = r.eq2_violations;
  j["resync_point_count"] = r.resync_point_count;
  j["first_resync_point"] = r.first_resync_point ? nlohmann::ordered_json(*r.first_resync_point) : nullptr;
  j["attempts"] = r.attempts;
  j["events"] = r.stats.events;
  j["clamps"] = r.stats.clamps;
  j["offslot_dropped"] = r.stats.offslot_dropped;
  j["e_stb_split_windows"] = r.stats.e_stb_split_windows;
  return j.dump();
}

std::string to_json(const StatsSummary& s) {
  nlohmann::ordered_json j;
  j["adversary"] = s.adversary;
  j["runs"] = s.runs;
  j["stabilized"] = s.stabilized;
  j["all_stabilized"] = s.all_stabilized;
  j["complete"] = s.complete;
  j["attempts"] = s.attempts;
  j["attempt_freq"] = s.attempt_freq;
  j["attempt_freq_lcb"] = s.attempt_freq_lcb;
  j["q1_bound"] = s.q1_bound;
  j["q1_ok"] = s.q1_ok;
  j["mean_stab_windows"] = s.mean_stab_windows;
  j["mean_stab_limit"] = s.mean_stab_limit;
  j["mean_ok"] = s.mean_ok;
  j["median_stab_window"] = s.median_stab_window;
  j["max_stab_window"] = s.max_stab_window;
  j["worst_precision"] = s.worst_precision;
  j["resync_freq"] = s.resync_freq;
  j["resync_freq_lcb"] = s.resync_freq_lcb;
  j["lemma1_bound"] = s.lemma1_bound;
  return j.dump();
}

std::string to_json(const Lemma1Result& r) {
  nlohmann::ordered_json j;
  j["intervals"] = r.intervals;
  j["hits"] = r.hits;
  j["freq"] = r.freq;
  j["lcb"] = r.lcb;
  j["bound"] = r.bound;
  j["ok"] = r.ok;
  return j.dump();
}

std::string to_table(const std::vector<RunResult>& rs) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "seed" << std::setw(13) << "adversary" << std::setw(8) << "stb_w"
     << std::setw(9) << "windows" << std::setw(10) << "precision" << std::setw(8) << "resync" << "events\n";
  for (const auto& r : rs) {
    os << std::setw(10) << r.seed << std::setw(13) << r.adversary << std::setw(8)
       << (r.stabilization_window ? std::to_string(*r.stabilization_window) : "-") << std::setw(9) << r.windows_run
       << std::setw(10) << r.max_precision_after_stb << std::setw(8) << r.resync_point_count << r.stats.events
       << "\n";
  }
  return os.str();
}

std::string to_table(const StatsSummary& s) {
  std::ostringstream os;
  os << "adversary            " << s.adversary << "\n"
     << "runs                 " << s.runs << "\n"
     << "stabilized           " << s.stabilized << (s.all_stabilized ? " (all)" : "") << "\n"
     << "attempts             " << s.attempts << "\n"
     << "attempt freq         " << s.attempt_freq << " (99% lower " << s.attempt_freq_lcb << ")\n"
     << "q1 bound             " << s.q1_bound << (s.q1_ok ? "  ok" : "  BELOW") << "\n"
     << "mean stb windows     " << s.mean_stab_windows << " (limit " << s.mean_stab_limit << ")"
     << (s.mean_ok ? "  ok" : "  OVER") << "\n"
     << "median / max window  " << s.median_stab_window << " / " << s.max_stab_window << "\n"
     << "worst precision      " << s.worst_precision << "\n"
     << "resync freq / T_max  " << s.resync_freq << " (99% lower " << s.resync_freq_lcb << ", Lemma bound "
     << s.lemma1_bound << ")\n";
  return os.str();
}

}  // namespace ssbcs
