#include "ssbcs/ftcore.hpp"
#include "ssbcs/harness.hpp"
#include "ssbcs/ring_time.hpp"
#include "ssbcs/scenario_io.hpp"

#include <json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ssbcs;
using json = nlohmann::json;

namespace {

// Rows are planes, columns are MES; None marks a missing entry.
ClockMatrix to_matrix(const std::vector<std::vector<Entry>>& rows) {
  if (rows.empty() || rows.front().empty()) throw UsageError("matrix must be non-empty");
  const int n1 = static_cast<int>(rows.size());
  const int n0 = static_cast<int>(rows.front().size());
  ClockMatrix C(n1, n0);
  for (int p = 0; p < n1; ++p) {
    if (static_cast<int>(rows[static_cast<std::size_t>(p)].size()) != n0) throw UsageError("ragged matrix");
    for (int i = 0; i < n0; ++i) C.at(p, i) = rows[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)];
  }
  return C;
}

FtParams ft_params(int f0, int f1, Tick tau_max, Tick eps1, Tick eps2, int n0, int n1) {
  FtParams fp;
  fp.n0 = n0;
  fp.n1 = n1;
  fp.f0 = f0;
  fp.f1 = f1;
  fp.tau_max = tau_max;
  fp.eps1 = eps1;
  fp.eps2 = eps2;
  return fp;
}

std::string derive_json(const std::string& text, bool strict) {
  const SystemConfig cfg = scenario_from_json(text, strict).system();
  const auto& d = cfg.derived;
  json j;
  j["d_max_ticks"] = d.d_max_ticks;
  j["eps0"] = to_double(d.eps0);
  j["eps0_exact"] = to_string(d.eps0);
  j["eps1"] = d.eps1;
  j["eps2"] = d.eps2;
  j["T"] = d.T;
  j["tau_max"] = d.tau_max;
  j["eps_rnd"] = d.eps_rnd;
  j["c0"] = d.c0;
  j["k0"] = d.k0;
  j["g0"] = d.g0;
  j["q0"] = to_string(d.q0);
  j["p0"] = to_string(d.p0);
  j["q1_bound"] = to_double(d.q1_bound);
  j["lemma1_bound"] = to_double(d.lemma1_bound);
  j["T_max"] = to_string(d.T_max);
  j["warnings"] = d.warnings;
  return j.dump();
}

std::vector<std::string> validate_list(const std::string& text, bool strict) {
  const ScenarioConfig sc = scenario_from_json(text, strict);
  try {
    const TTSchedule sched = sc.schedule ? *sc.schedule : default_schedule(sc.params);
    return validate(sc.params, sched).errors;
  } catch (const ConfigError& e) {
    return {e.what()};
  }
}

}  // namespace

PYBIND11_MODULE(_ssbcs, m) {
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  m.def("wrap_add", &wrap_add, py::arg("a"), py::arg("b"), py::arg("tau_max"));
  m.def("wrap_sub", &wrap_sub, py::arg("a"), py::arg("b"), py::arg("tau_max"));
  m.def("ring_dist", &ring_dist, py::arg("a"), py::arg("b"), py::arg("tau_max"));
  m.def(
      "circ_sort", [](const std::vector<Tick>& v, Tick tau) { return circ_sort(v, tau); }, py::arg("values"),
      py::arg("tau_max"));
  m.def(
      "ring_med", [](const std::vector<Tick>& v, Tick tau) { return ring_med(v, tau); }, py::arg("values"),
      py::arg("tau_max"));

  m.def(
      "fta_values", [](const std::vector<Tick>& v, int f0, Tick tau) { return fta_values(v, f0, tau); },
      py::arg("medians"), py::arg("f0"), py::arg("tau_max"));
  m.def(
      "fta",
      [](const std::vector<std::vector<Entry>>& rows, int f0, int f1, Tick tau) {
        const auto C = to_matrix(rows);
        return try_fta(C, ft_params(f0, f1, tau, 0, 0, C.cols(), C.rows()));
      },
      py::arg("matrix"), py::arg("f0"), py::arg("f1"), py::arg("tau_max"));
  m.def(
      "check_stb",
      [](const std::vector<std::vector<Entry>>& rows, const std::vector<int>& p_acma, int f0, int f1, Tick tau,
         Tick eps1) {
        const auto C = to_matrix(rows);
        return check_stb(C, p_acma, ft_params(f0, f1, tau, eps1, 0, C.cols(), C.rows()));
      },
      py::arg("matrix"), py::arg("p_acma"), py::arg("f0"), py::arg("f1"), py::arg("tau_max"), py::arg("eps1"));
  m.def(
      "check_weak",
      [](const std::vector<std::vector<Entry>>& rows, int f0, int f1, Tick tau, Tick eps2) {
        const auto C = to_matrix(rows);
        return check_weak(C, ft_params(f0, f1, tau, 0, eps2, C.cols(), C.rows()));
      },
      py::arg("matrix"), py::arg("f0"), py::arg("f1"), py::arg("tau_max"), py::arg("eps2"));

  m.def("derive", &derive_json, py::arg("config"), py::arg("strict") = true);
  m.def("validate", &validate_list, py::arg("config"), py::arg("strict") = true);
  m.def(
      "run",
      [](const std::string& text, std::uint64_t seed, bool trace) {
        const auto sc = scenario_from_json(text);
        std::ostringstream os;
        RunResult r;
        {
          py::gil_scoped_release nogil;
          r = run_once(sc, seed, trace ? &os : nullptr);
        }
        return py::make_tuple(to_json(r), os.str());
      },
      py::arg("config"), py::arg("seed"), py::arg("trace") = false);
  m.def(
      "campaign",
      [](const std::string& text, std::vector<std::uint64_t> seeds) {
        const auto sc = scenario_from_json(text);
        if (seeds.empty()) seeds = sc.seed_list();
        StatsSummary s;
        {
          py::gil_scoped_release nogil;
          s = summarize(run_monte_carlo(sc, seeds), sc.system());
        }
        return to_json(s);
      },
      py::arg("config"), py::arg("seeds"));
  m.def(
      "lemma1",
      [](const std::string& text, int honest, std::uint64_t intervals, std::uint64_t seed) {
        const auto cfg = scenario_from_json(text).system();
        py::gil_scoped_release nogil;
        return to_json(lemma1_coin_model(cfg, honest, intervals, seed));
      },
      py::arg("config"), py::arg("honest_mws"), py::arg("intervals"), py::arg("seed"));
}
