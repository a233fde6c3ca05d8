#include "ssbcs/scenario_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ssbcs {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed, bool strict) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  if (!strict) return;
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) throw ConfigError("unknown key " + where + "." + it.key());
  }
}

Rational rational_of(const json& v, const std::string& key) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  throw ConfigError(key + " must be a number or a fraction string");
}

template <class T>
T int_of(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key + " must be an integer");
  if constexpr (std::is_unsigned_v<T>) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(key + " must be non-negative");
  }
  return v.get<T>();
}

Slot slot_of(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(key + " must be [begin, end]");
  return Slot{int_of<Tick>(v[0], key), int_of<Tick>(v[1], key)};
}

template <class T>
std::vector<T> list_of(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key + " must be a list");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(int_of<T>(e, key));
  return out;
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& text, bool strict) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config", {"system", "schedule", "adversary", "initial_state", "run"}, strict);
  ScenarioConfig sc;

  if (root.contains("system")) {
    const json& s = root["system"];
    check_keys(s, "system",
               {"n0", "n1", "f0", "f1", "tau_max", "T_H", "rho", "d_max", "d_min", "T0", "a0", "eps0", "eps1",
                "eps2", "eps_rnd", "q0", "p0"},
               strict);
    auto& p = sc.params;
    if (s.contains("n0")) p.n0 = int_of<int>(s["n0"], "n0");
    if (s.contains("n1")) p.n1 = int_of<int>(s["n1"], "n1");
    if (s.contains("f0")) p.f0 = int_of<int>(s["f0"], "f0");
    if (s.contains("f1")) p.f1 = int_of<int>(s["f1"], "f1");
    if (s.contains("tau_max")) p.tau_max = int_of<Tick>(s["tau_max"], "tau_max");
    if (s.contains("T_H")) p.T_H = int_of<std::int64_t>(s["T_H"], "T_H");
    if (s.contains("rho")) p.rho = rational_of(s["rho"], "rho");
    if (s.contains("d_max")) p.d_max = int_of<std::int64_t>(s["d_max"], "d_max");
    if (s.contains("d_min")) p.d_min = int_of<std::int64_t>(s["d_min"], "d_min");
    if (s.contains("T0")) p.T0 = int_of<Tick>(s["T0"], "T0");
    if (s.contains("a0")) p.a0 = int_of<int>(s["a0"], "a0");
    if (s.contains("eps0")) p.eps0 = rational_of(s["eps0"], "eps0");
    if (s.contains("eps1")) p.eps1 = int_of<Tick>(s["eps1"], "eps1");
    if (s.contains("eps2")) p.eps2 = int_of<Tick>(s["eps2"], "eps2");
    if (s.contains("eps_rnd")) p.eps_rnd = int_of<std::int64_t>(s["eps_rnd"], "eps_rnd");
    if (s.contains("q0")) p.q0 = rational_of(s["q0"], "q0");
    if (s.contains("p0")) p.p0 = rational_of(s["p0"], "p0");
  }

  if (root.contains("schedule")) {
    const json& s = root["schedule"];
    check_keys(s, "schedule", {"vc_send", "mc_recv", "c_send", "c_recv"}, strict);
    TTSchedule t = default_schedule(sc.params);
    if (s.contains("vc_send")) t.vc_send = slot_of(s["vc_send"], "vc_send");
    if (s.contains("mc_recv")) t.mc_recv = slot_of(s["mc_recv"], "mc_recv");
    if (s.contains("c_send")) t.c_send = slot_of(s["c_send"], "c_send");
    if (s.contains("c_recv")) t.c_recv = slot_of(s["c_recv"], "c_recv");
    sc.schedule = t;
  }

  if (root.contains("adversary")) {
    const json& a = root["adversary"];
    check_keys(a, "adversary", {"name", "bias_scale", "noise_gap", "faulty_mes", "faulty_planes"}, strict);
    if (a.contains("name")) {
      if (!a["name"].is_string()) throw ConfigError("adversary.name must be a string");
      sc.adversary = a["name"].get<std::string>();
      const auto names = adversary_names();
      if (std::find(names.begin(), names.end(), sc.adversary) == names.end())
        throw ConfigError("unknown adversary " + sc.adversary);
    }
    if (a.contains("bias_scale")) sc.adversary_options.bias_scale = rational_of(a["bias_scale"], "bias_scale");
    if (a.contains("noise_gap")) sc.adversary_options.noise_gap = int_of<Tick>(a["noise_gap"], "noise_gap");
    if (a.contains("faulty_mes")) sc.faulty_mes = list_of<int>(a["faulty_mes"], "faulty_mes");
    if (a.contains("faulty_planes")) sc.faulty_planes = list_of<int>(a["faulty_planes"], "faulty_planes");
  }

  if (root.contains("initial_state")) {
    const json& i = root["initial_state"];
    check_keys(i, "initial_state", {"policy", "clock_values", "tick_phase"}, strict);
    if (i.contains("policy")) {
      const auto s = i["policy"].is_string() ? i["policy"].get<std::string>() : std::string();
      if (s == "random") {
        sc.init = InitialState::Random;
      } else if (s == "synchronized") {
        sc.init = InitialState::Synchronized;
      } else {
        throw ConfigError("initial_state.policy must be \"random\" or \"synchronized\"");
      }
    }
    if (i.contains("clock_values")) sc.overrides.clock_values = list_of<Tick>(i["clock_values"], "clock_values");
    if (i.contains("tick_phase")) sc.overrides.tick_phase = list_of<SimTime>(i["tick_phase"], "tick_phase");
  }

  if (root.contains("run")) {
    const json& r = root["run"];
    check_keys(r, "run", {"horizon_windows", "confirm_windows", "stop_on_stabilize", "seeds", "seed_count", "base_seed"},
               strict);
    if (r.contains("horizon_windows")) sc.horizon_windows = int_of<std::uint64_t>(r["horizon_windows"], "horizon_windows");
    if (r.contains("confirm_windows")) sc.confirm_windows = int_of<std::uint64_t>(r["confirm_windows"], "confirm_windows");
    if (r.contains("stop_on_stabilize")) {
      if (!r["stop_on_stabilize"].is_boolean()) throw ConfigError("stop_on_stabilize must be a boolean");
      sc.stop_on_stabilize = r["stop_on_stabilize"].get<bool>();
    }
    if (r.contains("seeds")) sc.seeds = list_of<std::uint64_t>(r["seeds"], "seeds");
    if (r.contains("seed_count")) sc.seed_count = int_of<std::uint64_t>(r["seed_count"], "seed_count");
    if (r.contains("base_seed")) sc.base_seed = int_of<std::uint64_t>(r["base_seed"], "base_seed");
  }

  if (sc.init == InitialState::Synchronized && sc.overrides.clock_values)
    throw ConfigError("clock_values cannot be combined with a synchronized start");
  return sc;
}

std::string scenario_to_json(const ScenarioConfig& sc) {
  ojson root;
  const auto& p = sc.params;
  ojson s;
  s["n0"] = p.n0;
  s["n1"] = p.n1;
  s["f0"] = p.f0;
  s["f1"] = p.f1;
  if (p.tau_max) s["tau_max"] = *p.tau_max;
  s["T_H"] = p.T_H;
  s["rho"] = to_string(p.rho);
  s["d_max"] = p.d_max;
  s["d_min"] = p.d_min;
  s["T0"] = p.T0;
  s["a0"] = p.a0;
  if (p.eps0) s["eps0"] = to_string(*p.eps0);
  if (p.eps1) s["eps1"] = *p.eps1;
  if (p.eps2) s["eps2"] = *p.eps2;
  if (p.eps_rnd) s["eps_rnd"] = *p.eps_rnd;
  if (p.q0) s["q0"] = to_string(*p.q0);
  if (p.p0) s["p0"] = to_string(*p.p0);
  root["system"] = s;
  if (sc.schedule) {
    auto slot = [](const Slot& x) { return ojson::array({x.begin, x.end}); };
    root["schedule"] = ojson{{"vc_send", slot(sc.schedule->vc_send)},
                             {"mc_recv", slot(sc.schedule->mc_recv)},
                             {"c_send", slot(sc.schedule->c_send)},
                             {"c_recv", slot(sc.schedule->c_recv)}};
  }
  ojson a;
  a["name"] = sc.adversary;
  a["bias_scale"] = to_string(sc.adversary_options.bias_scale);
  a["noise_gap"] = sc.adversary_options.noise_gap;
  if (sc.faulty_mes) a["faulty_mes"] = *sc.faulty_mes;
  if (sc.faulty_planes) a["faulty_planes"] = *sc.faulty_planes;
  root["adversary"] = a;
  ojson i;
  i["policy"] = sc.init == InitialState::Random ? "random" : "synchronized";
  if (sc.overrides.clock_values) i["clock_values"] = *sc.overrides.clock_values;
  if (sc.overrides.tick_phase) i["tick_phase"] = *sc.overrides.tick_phase;
  root["initial_state"] = i;
  ojson r;
  r["horizon_windows"] = sc.horizon_windows;
  if (sc.confirm_windows) r["confirm_windows"] = *sc.confirm_windows;
  r["stop_on_stabilize"] = sc.stop_on_stabilize;
  if (!sc.seeds.empty()) r["seeds"] = sc.seeds;
  r["seed_count"] = sc.seed_count;
  r["base_seed"] = sc.base_seed;
  root["run"] = r;
  return root.dump(2);
}

ScenarioConfig load_scenario(const std::string& path, bool strict) {
  std::string p = path;
  if (p.empty()) {
    if (const char* env = std::getenv("SSBCS_CONFIG"); env && *env) p = env;
  }
  if (p.empty()) return ScenarioConfig{};
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read config file " + p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str(), strict);
}

}  // namespace ssbcs
