#include "ssbcs/sysconfig.hpp"

#include <sstream>

namespace ssbcs {

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& e : errors) os << "error: " << e << "\n";
  for (const auto& w : warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::int64_t ticks_covering(std::int64_t sim_time, std::int64_t T_H, const Rational& rho) {
  return ceil_to_int(Rational(sim_time) / ((1 - rho) * T_H));
}

Rational default_eps0(const SystemParams& p) {
  return 3 * (1 + p.rho) * ticks_covering(p.d_max, p.T_H, p.rho);
}

TTSchedule default_schedule(const SystemParams& p) {
  if (p.T_H < 1 || p.rho < 0 || p.rho >= 1 || p.d_max < 1) {
    throw ConfigError("cannot build a default schedule from invalid T_H, rho or d_max");
  }
  const std::int64_t dmt = ticks_covering(p.d_max, p.T_H, p.rho);
  const std::int64_t rnd = ticks_covering(p.eps_rnd.value_or(p.d_max), p.T_H, p.rho);
  const Rational eps0 = p.eps0.value_or(default_eps0(p));
  // The first send waits past the largest in-sync clock correction so an
  // adjustment at end(C_send) cannot land the MWS clock before its SIG tick.
  const auto g = static_cast<Tick>(ceil_to_int(2 * eps0) + 1);
  const auto drift = ceil_to_int(2 * p.rho * Rational(p.T0) / (1 - p.rho));
  const auto w = static_cast<Tick>(dmt + rnd + drift + 2);
  TTSchedule s;
  s.vc_send = {g, g};
  s.mc_recv = {g, g + w};
  s.c_send = {g + w, g + w};
  s.c_recv = {g + w, g + 2 * w};
  return s;
}

namespace {

bool in_unit(const Rational& r) { return r >= 0 && r <= 1; }

// Fills as much of `d` as the inputs allow, appending to `rep`.
void compute(const SystemParams& p, const TTSchedule& s, DerivedParams& d, ValidationReport& rep) {
  auto err = [&](std::string m) { rep.errors.push_back(std::move(m)); };
  auto warn = [&](std::string m) { rep.warnings.push_back(std::move(m)); };

  if (p.n0 < 1 || p.n1 < 1) err("n0 and n1 must be positive");
  if (p.f0 < 0 || p.f1 < 0) err("f0 and f1 must be non-negative");
  if (p.n0 <= 3 * p.f0) {
    err("n0 > 3*f0 violated (n0=" + std::to_string(p.n0) + ", f0=" + std::to_string(p.f0) + ")");
  }
  if (p.n1 <= 2 * p.f1) {
    err("n1 > 2*f1 violated (n1=" + std::to_string(p.n1) + ", f1=" + std::to_string(p.f1) + ")");
  }
  if (p.n0 > 16) err("n0 > 16 is not supported by the column enumeration");
  if (p.n1 > 8) err("n1 > 8 is not supported by the plane enumeration");
  if (p.T_H < 1) err("T_H must be at least 1 time unit");
  if (p.rho < 0 || p.rho >= 1) err("rho must lie in [0, 1)");
  if (p.d_max <= 0) err("d_max must be positive");
  if (p.d_min < 1 || p.d_min > p.d_max) err("d_min must lie in [1, d_max]");
  if (p.T0 < 1) err("T0 must be positive");
  if (p.a0 < 1) err("a0 must be at least 1");
  if (p.eps_rnd && *p.eps_rnd < 0) err("eps_rnd must be non-negative");
  if (p.q0 && !in_unit(*p.q0)) err("q0 must lie in [0, 1]");
  if (p.p0 && !in_unit(*p.p0)) err("p0 must lie in [0, 1]");
  if (!rep.ok()) return;

  d.d_max_ticks = ticks_covering(p.d_max, p.T_H, p.rho);
  d.eps_rnd = p.eps_rnd.value_or(p.d_max);
  d.rnd_ticks = ticks_covering(d.eps_rnd, p.T_H, p.rho);
  d.eps0 = p.eps0.value_or(default_eps0(p));
  if (d.eps0 <= 0) {
    err("eps0 must be positive");
    return;
  }

  // eps1 >= 2 eps0 + 4 rho T + 2 d_max_ticks with T = T0 + eps2 and, by
  // default, eps2 = 2 eps1: iterate to the least integer fixed point.
  auto eps1_need = [&](Tick e1) {
    Tick e2 = p.eps2.value_or(2 * e1);
    Rational T = Rational(p.T0 + e2);
    return ceil_to_int(2 * d.eps0 + 4 * p.rho * T + 2 * d.d_max_ticks);
  };
  if (p.eps1) {
    d.eps1 = *p.eps1;
  } else {
    Tick e1 = static_cast<Tick>(ceil_to_int(2 * d.eps0 + 2 * d.d_max_ticks));
    bool converged = false;
    for (int it = 0; it < 100000; ++it) {
      auto need = static_cast<Tick>(eps1_need(e1));
      if (e1 >= need) {
        converged = true;
        break;
      }
      e1 = need;
    }
    if (!converged) {
      err("default eps1 does not converge (rho too large for eps2 = 2*eps1)");
      return;
    }
    d.eps1 = e1;
  }
  d.eps2 = p.eps2.value_or(2 * d.eps1);
  if (Rational(d.eps1) < d.eps0) err("eps1 >= eps0 violated");
  if (d.eps2 < d.eps1) err("eps2 >= eps1 violated");
  d.T = p.T0 + d.eps2;
  d.tau_max = p.tau_max.value_or(16 * d.T);
  if (d.tau_max < 4 * d.T) {
    err("tau_max >= 4*T violated (tau_max=" + std::to_string(d.tau_max) +
        ", T=" + std::to_string(d.T) + ")");
  } else if (d.tau_max % d.T != 0) {
    warn("tau_max is not a multiple of T; SIG ticks are irregular at the wrap");
  }

  if (p.f0 == 0) {
    d.c0 = 0;
    d.k0 = 1;
  } else {
    d.c0 = (p.n0 - 2 * p.f0 - 1) / p.f0 + 1;
    if (d.c0 < 2) {
      err("c0 < 2: approximate agreement cannot contract");
      return;
    }
    Rational ratio = (2 * Rational(d.eps2) + 8 * p.rho * (1 + p.rho) * d.T) / d.eps0;
    if (ratio <= 1) {
      warn("eps0 >= 2*eps2 + 8*rho*(1+rho)*T; k0 set to 1");
      d.k0 = 1;
    } else {
      int k = 1;
      Rational c = d.c0;
      while (c < ratio) {
        c *= d.c0;
        ++k;
      }
      d.k0 = k;
    }
  }
  d.g0 = p.a0 + d.k0;
  d.q0 = p.q0.value_or(Rational(1, 2 * d.g0 + 1));
  d.p0 = p.p0.value_or(1 - Rational(1, d.g0 + 1));
  const auto g0 = static_cast<unsigned>(d.g0);
  d.q1_bound = d.q0 * pow(1 - d.q0, 2 * g0) * pow(d.p0, g0) * (1 - d.p0) / 2;
  d.lemma1_bound = 2 * d.q0 * pow(1 - d.q0, g0);
  d.T_max = 2 * Rational(d.T) * (1 + p.rho);
  if (d.q1_bound > 0) {
    d.stb_exp_windows = 2 / d.q1_bound + 4;
  } else {
    warn("q1_bound is 0; no stabilization guarantee");
  }

  // Schedule.
  const Slot* slots[] = {&s.vc_send, &s.mc_recv, &s.c_send, &s.c_recv};
  const char* names[] = {"TT_VC_send", "TT_MC_recv", "TT_C_send", "TT_C_recv"};
  for (int k = 0; k < 4; ++k) {
    if (slots[k]->begin > slots[k]->end) err(std::string(names[k]) + " begins after it ends");
  }
  if (s.vc_send.end > s.mc_recv.begin || s.mc_recv.end > s.c_send.begin ||
      s.c_send.end > s.c_recv.begin) {
    err("TT slots are out of order");
  }
  if (s.c_recv.end > p.T0) err("end(TT_C_recv) exceeds T0");
  const auto dmt = static_cast<Tick>(d.d_max_ticks);
  if (s.mc_recv.end - s.vc_send.begin <= dmt || s.c_recv.end - s.c_send.begin <= dmt) {
    err("a receive slot closes within d_max ticks of its send slot");
  } else {
    auto drift = static_cast<Tick>(ceil_to_int(2 * p.rho * Rational(p.T0) / (1 - p.rho)));
    Tick guard = dmt + static_cast<Tick>(d.rnd_ticks) + drift + 1;
    if (s.mc_recv.end - s.vc_send.begin < guard || s.c_recv.end - s.c_send.begin < guard) {
      warn("receive slots do not cover d_max plus round-start skew; late messages will be lost");
    }
  }
  if (!rep.ok()) return;

  Ring r(d.tau_max);
  auto w = [&](Tick v) { return r.wrap(static_cast<std::int64_t>(v)); };
  d.delta_tt0 = r.sub(w(s.c_send.end), w(s.c_recv.begin));
  d.delta_tt1 = r.sub(w(s.c_send.end), w(s.vc_send.begin));
  d.delta_tt2 = r.sub(w(s.c_recv.end), w(s.c_send.end));
  d.delta_tt3 = r.sub(w(s.c_send.end), w(s.mc_recv.end));

  d.acc_m_threshold = static_cast<Tick>(floor_to_int(2 * d.eps0));
  Rational h_bound = (2 * d.eps0 + 2 * p.rho * d.T + d.d_max_ticks) / ((1 - p.rho) * (1 - p.rho));
  d.acc_h_threshold = static_cast<Tick>(ceil_to_int(h_bound));
  d.weak_width = 2 * (d.eps2 / 2);
  if (3 * d.eps2 >= d.tau_max) err("eps2 must stay below tau_max/3");
  d.warnings = rep.warnings;
}

}  // namespace

ValidationReport validate(const SystemParams& p, const TTSchedule& sched) {
  ValidationReport rep;
  DerivedParams d;
  compute(p, sched, d, rep);
  return rep;
}

DerivedParams derive(const SystemParams& p, const TTSchedule& sched) {
  ValidationReport rep;
  DerivedParams d;
  compute(p, sched, d, rep);
  if (!rep.ok()) throw ConfigError("invalid configuration:\n" + rep.to_string());
  return d;
}

SystemConfig SystemConfig::make(const SystemParams& p) { return make(p, default_schedule(p)); }

SystemConfig SystemConfig::make(const SystemParams& p, const TTSchedule& sched) {
  SystemConfig c;
  c.params = p;
  c.schedule = sched;
  c.derived = derive(p, sched);
  return c;
}

}  // namespace ssbcs
