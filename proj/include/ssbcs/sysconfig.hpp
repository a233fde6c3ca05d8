#pragma once

#include "ssbcs/rational.hpp"
#include "ssbcs/ring_time.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ssbcs {

/// Static inputs. Times in simulated units are integers; T_H is the nominal
/// tick length in those units.
struct SystemParams {
  int n0 = 4;
  int n1 = 3;
  int f0 = 1;
  int f1 = 1;
  std::optional<Tick> tau_max;  // default 16 T
  std::int64_t T_H = 1000;
  Rational rho{1, 200};
  std::int64_t d_max = 10000;
  std::int64_t d_min = 1;
  Tick T0 = 200;
  int a0 = 3;
  std::optional<Rational> eps0;
  std::optional<Tick> eps1;
  std::optional<Tick> eps2;
  std::optional<std::int64_t> eps_rnd;  // default d_max
  std::optional<Rational> q0;
  std::optional<Rational> p0;
};

struct Slot {
  Tick begin = 0;
  Tick end = 0;
};

/// Slot offsets in ticks from the local round anchor.
struct TTSchedule {
  Slot vc_send;
  Slot mc_recv;
  Slot c_send;
  Slot c_recv;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
  std::string to_string() const;
};

struct DerivedParams {
  std::int64_t d_max_ticks = 0;
  std::int64_t rnd_ticks = 0;
  Rational eps0;
  Tick eps1 = 0;
  Tick eps2 = 0;
  Tick T = 0;
  Tick tau_max = 0;
  std::int64_t eps_rnd = 0;
  // 0 when f0 = 0: a single round already agrees exactly.
  std::int64_t c0 = 0;
  int k0 = 1;
  int g0 = 1;
  Rational q0;
  Rational p0;
  Rational q1_bound;
  Rational lemma1_bound;  // 2 q0 (1 - q0)^g0
  Rational T_max;         // ticks
  Rational stb_exp_windows;
  Tick delta_tt0 = 0;
  Tick delta_tt1 = 0;
  Tick delta_tt2 = 0;
  Tick delta_tt3 = 0;
  Tick acc_m_threshold = 0;
  Tick acc_h_threshold = 0;
  Tick weak_width = 0;
  std::vector<std::string> warnings;
};

/// Ticks needed to cover a span of simulated time at the fastest clock rate.
std::int64_t ticks_covering(std::int64_t sim_time, std::int64_t T_H, const Rational& rho);

Rational default_eps0(const SystemParams& p);
TTSchedule default_schedule(const SystemParams& p);

ValidationReport validate(const SystemParams& p, const TTSchedule& sched);
DerivedParams derive(const SystemParams& p, const TTSchedule& sched);

/// Parameters, schedule and derived constants bundled; immutable once built.
struct SystemConfig {
  SystemParams params;
  TTSchedule schedule;
  DerivedParams derived;

  static SystemConfig make(const SystemParams& p);
  static SystemConfig make(const SystemParams& p, const TTSchedule& sched);

  Ring ring() const { return Ring(derived.tau_max); }
};

}  // namespace ssbcs
