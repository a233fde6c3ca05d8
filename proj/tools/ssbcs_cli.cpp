#include "ssbcs/harness.hpp"
#include "ssbcs/scenario_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ssbcs;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string format = "jsonl";
  int verbose = 0;
  bool lenient = false;
  std::string adversary;
  std::string init;
};

ScenarioConfig load(const Common& c) {
  ScenarioConfig sc = load_scenario(c.config, !c.lenient);
  if (!c.adversary.empty()) sc.adversary = c.adversary;
  if (c.init == "random") sc.init = InitialState::Random;
  if (c.init == "synchronized") sc.init = InitialState::Synchronized;
  return sc;
}

void print_derived(const SystemConfig& cfg, std::ostream& os) {
  const auto& d = cfg.derived;
  const auto& s = cfg.schedule;
  os << "d_max_ticks " << d.d_max_ticks << "\n"
     << "eps0 " << to_string(d.eps0) << " (" << to_double(d.eps0) << ")\n"
     << "eps1 " << d.eps1 << "\neps2 " << d.eps2 << "\n"
     << "T " << d.T << "\ntau_max " << d.tau_max << "\n"
     << "c0 " << d.c0 << "\nk0 " << d.k0 << "\ng0 " << d.g0 << "\n"
     << "q0 " << to_string(d.q0) << "\np0 " << to_string(d.p0) << "\n"
     << "q1_bound " << to_double(d.q1_bound) << "\n"
     << "lemma1_bound " << to_double(d.lemma1_bound) << "\n"
     << "T_max " << to_string(d.T_max) << "\n"
     << "schedule vc_send [" << s.vc_send.begin << "," << s.vc_send.end << "] mc_recv [" << s.mc_recv.begin << ","
     << s.mc_recv.end << "] c_send [" << s.c_send.begin << "," << s.c_send.end << "] c_recv [" << s.c_recv.begin
     << "," << s.c_recv.end << "]\n";
  for (const auto& w : d.warnings) os << "warning: " << w << "\n";
}

std::ostream& sink(const Common& c, const std::string& name, std::ofstream& file) {
  if (c.out.empty()) return std::cout;
  std::filesystem::create_directories(c.out);
  file.open(std::filesystem::path(c.out) / name, std::ios::binary);
  if (!file) throw UsageError("cannot write into " + c.out);
  return file;
}

int cmd_validate(const Common& c) {
  ScenarioConfig sc = load(c);
  SystemConfig cfg = sc.system();
  std::cout << "ok\n";
  print_derived(cfg, std::cout);
  return 0;
}

int cmd_run(const Common& c, std::uint64_t seed, std::optional<std::uint64_t> horizon) {
  ScenarioConfig sc = load(c);
  if (horizon) sc.horizon_windows = *horizon;
  if (c.verbose) print_derived(sc.system(), std::cerr);
  RunResult r;
  if (!c.out.empty()) {
    std::ofstream tf;
    std::ostream& t = sink(c, "trace_" + std::to_string(seed) + ".jsonl", tf);
    r = run_once(sc, seed, &t);
    std::ofstream rf;
    sink(c, "result_" + std::to_string(seed) + ".json", rf) << to_json(r) << "\n";
  } else {
    r = run_once(sc, seed);
  }
  if (c.format == "table") {
    std::cout << to_table(std::vector<RunResult>{r});
  } else {
    std::cout << to_json(r) << "\n";
  }
  return 0;
}

int cmd_campaign(const Common& c, std::optional<std::uint64_t> seeds, std::optional<std::uint64_t> horizon) {
  ScenarioConfig sc = load(c);
  if (horizon) sc.horizon_windows = *horizon;
  if (seeds) {
    sc.seeds.clear();
    sc.seed_count = *seeds;
  }
  auto list = sc.seed_list();
  if (list.size() < 30) std::cerr << "note: fewer than 30 seeds; bounds are weak\n";
  const SystemConfig cfg = sc.system();
  std::vector<RunResult> rs;
  std::ofstream rf;
  std::ostream& recs = sink(c, "runs.jsonl", rf);
  for (auto s : list) {
    rs.push_back(run_once(sc, s));
    if (c.format == "jsonl" || !c.out.empty()) recs << to_json(rs.back()) << "\n";
    if (c.verbose) std::cerr << "seed " << s << " done\n";
  }
  StatsSummary sum = summarize(rs, cfg);
  if (c.format == "table") {
    std::cout << to_table(rs) << "\n" << to_table(sum);
  } else {
    std::cout << to_json(sum) << "\n";
  }
  if (!c.out.empty()) {
    std::ofstream sf(std::filesystem::path(c.out) / "summary.json");
    sf << to_json(sum) << "\n";
  }
  return sum.complete ? 0 : 1;
}

int cmd_lemma1(const Common& c, std::uint64_t windows, std::uint64_t seed) {
  ScenarioConfig sc = load(c);
  const SystemConfig cfg = sc.system();
  const int honest = cfg.params.n1 - static_cast<int>(sc.fault_assignment().faulty_planes.size());
  Lemma1Result r = lemma1_coin_model(cfg, honest, windows, seed);
  if (c.format == "table") {
    std::cout << "intervals " << r.intervals << "\nhits " << r.hits << "\nfreq " << r.freq << "\nlower99 " << r.lcb
              << "\nbound " << r.bound << "\n" << (r.ok ? "ok" : "BELOW BOUND") << "\n";
  } else {
    std::cout << to_json(r) << "\n";
  }
  return r.ok ? 0 : 1;
}

int cmd_replay(const Common& c, const std::string& trace_path) {
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw UsageError("cannot read trace " + trace_path);
  std::stringstream old;
  old << in.rdbuf();
  const std::string before = old.str();
  // The first line carries the seed.
  const auto key = std::string("\"seed\":");
  const auto pos = before.find(key);
  if (pos == std::string::npos) throw UsageError("trace has no seed");
  const std::uint64_t seed = std::stoull(before.substr(pos + key.size()));
  ScenarioConfig sc = load(c);
  std::ostringstream now;
  run_once(sc, seed, &now);
  const std::string after = now.str();
  if (after == before) {
    std::cout << "identical\n";
    return 0;
  }
  std::istringstream a(before), b(after);
  std::string la, lb;
  std::size_t line = 0;
  while (true) {
    ++line;
    const bool ga = static_cast<bool>(std::getline(a, la));
    const bool gb = static_cast<bool>(std::getline(b, lb));
    if (!ga || !gb || la != lb) {
      std::cout << "first difference at line " << line << "\n- " << (ga ? la : "<end>") << "\n+ "
                << (gb ? lb : "<end>") << "\n";
      break;
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-dimensional self-stabilizing Byzantine clock synchronization simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("-c,--config", c.config, "scenario JSON (default: $SSBCS_CONFIG or the reference scenario)");
  app.add_option("-o,--out", c.out, "output directory");
  app.add_option("--format", c.format, "jsonl or table")->check(CLI::IsMember({"jsonl", "table"}));
  app.add_flag("-v,--verbose", c.verbose, "more diagnostics on stderr");
  app.add_flag("--lenient", c.lenient, "ignore unknown config keys");
  app.add_option("--adversary", c.adversary, "override the adversary strategy")
      ->check(CLI::IsMember(adversary_names()));
  app.add_option("--init", c.init, "override the initial state")->check(CLI::IsMember({"random", "synchronized"}));

  auto* validate = app.add_subcommand("validate", "check a configuration and print derived constants");

  std::uint64_t seed = 1;
  std::optional<std::uint64_t> horizon;
  auto* run = app.add_subcommand("run", "simulate one seed");
  run->add_option("-s,--seed", seed, "seed");
  run->add_option("--horizon", horizon, "maximum windows");

  std::optional<std::uint64_t> seeds;
  auto* campaign = app.add_subcommand("campaign", "Monte Carlo over many seeds");
  campaign->add_option("--seeds", seeds, "number of seeds, counting from run.base_seed");
  campaign->add_option("--horizon", horizon, "maximum windows");

  std::uint64_t windows = 100000;
  auto* lemma1 = app.add_subcommand("lemma1", "coin-only check of the resynchronization-point bound");
  lemma1->add_option("--windows", windows, "T_max intervals to simulate");
  lemma1->add_option("-s,--seed", seed, "seed");

  std::string trace_path;
  auto* replay = app.add_subcommand("replay", "re-run the seed recorded in a trace and diff");
  replay->add_option("trace", trace_path, "trace file")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*validate) return cmd_validate(c);
    if (*run) return cmd_run(c, seed, horizon);
    if (*campaign) return cmd_campaign(c, seeds, horizon);
    if (*lemma1) return cmd_lemma1(c, windows, seed);
    if (*replay) return cmd_replay(c, trace_path);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration:\n" << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
