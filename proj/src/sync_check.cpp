#include "ssbcs/sync_check.hpp"

#include <algorithm>

namespace ssbcs {

Tick clock_spread(std::span<const Tick> clocks, Tick tau_max) {
  Ring r(tau_max);
  Tick worst = 0;
  for (std::size_t i = 0; i < clocks.size(); ++i) {
    for (std::size_t j = i + 1; j < clocks.size(); ++j) worst = std::max(worst, r.dist(clocks[i], clocks[j]));
  }
  return worst;
}

namespace {

SimTime delta_of(const SystemConfig& cfg) {
  return floor_to_int(cfg.derived.T_max * cfg.params.T_H);
}

}  // namespace

SyncVerdict sync_check(std::span<const SyncSample> samples, SimTime t1, SimTime t2,
                       const SystemConfig& cfg) {
  SyncVerdict v;
  if (t1 > t2) throw UsageError("sync_check needs t1 <= t2");
  const Ring r = cfg.ring();
  const Rational eps0 = cfg.derived.eps0;
  const Rational rho = cfg.params.rho;
  const std::int64_t T_H = cfg.params.T_H;
  const SimTime delta = delta_of(cfg);

  std::vector<const SyncSample*> in;
  for (const auto& s : samples) {
    if (s.t >= t1 && s.t <= t2) in.push_back(&s);
  }
  std::stable_sort(in.begin(), in.end(), [](auto* a, auto* b) { return a->t < b->t; });
  if (in.empty()) return v;
  const std::size_t nodes = in.front()->clocks.size();

  auto flag = [&](SimTime t) {
    v.ok = false;
    if (!v.first_violation || t < *v.first_violation) v.first_violation = t;
  };

  for (auto* s : in) {
    if (s->clocks.size() != nodes) throw UsageError("samples disagree on node count");
    Tick sp = clock_spread(s->clocks, r.modulus());
    v.max_spread = std::max(v.max_spread, sp);
    if (Rational(sp) > eps0) {
      ++v.eq1_violations;
      flag(s->t);
    }
  }

  for (std::size_t n = 0; n < nodes; ++n) {
    std::vector<std::int64_t> u(in.size(), 0);
    for (std::size_t k = 1; k < in.size(); ++k) {
      u[k] = u[k - 1] + r.signed_diff(in[k]->clocks[n], in[k - 1]->clocks[n]);
    }
    for (std::size_t j = 0; j < in.size(); ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        SimTime el = in[j]->t - in[i]->t;
        if (el > delta) continue;
        Rational dev = Rational(u[j] - u[i]) * T_H - el;
        if (dev < 0) dev = -dev;
        if (dev > rho * el + eps0 * T_H) {
          ++v.eq2_violations;
          flag(in[j]->t);
        }
      }
    }
  }
  return v;
}

SyncMonitor::SyncMonitor(const SystemConfig& cfg, int nodes)
    : tau_(cfg.derived.tau_max),
      T_H_(cfg.params.T_H),
      eps0_floor_(static_cast<Tick>(floor_to_int(cfg.derived.eps0))),
      delta_(delta_of(cfg)),
      tracks_(static_cast<std::size_t>(nodes)) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const auto a = numerator(cfg.params.rho).convert_to<long long>();
  const auto b = denominator(cfg.params.rho).convert_to<long long>();
  const auto en = numerator(cfg.derived.eps0).convert_to<long long>();
  const auto ed = denominator(cfg.derived.eps0).convert_to<long long>();
  scale_ = static_cast<__int128>(b) * ed;
  rho_term_ = static_cast<__int128>(a) * ed;
  thr_ = static_cast<__int128>(b) * en * T_H_;
}

void SyncMonitor::restart(SimTime after) {
  streak_start_ = after + 1;
  spread_max_.clear();
  for (auto& tr : tracks_) {
    tr.buf.clear();
    tr.min_a.clear();
    tr.max_b.clear();
  }
}

void SyncMonitor::drop_through(SimTime t) {
  streak_start_ = t + 1;
  while (!spread_max_.empty() && spread_max_.front().first <= t) spread_max_.pop_front();
  for (auto& tr : tracks_) {
    while (!tr.buf.empty() && tr.buf.front().t <= t) tr.buf.pop_front();
    while (!tr.min_a.empty() && tr.min_a.front().t <= t) tr.min_a.pop_front();
    while (!tr.max_b.empty() && tr.max_b.front().t <= t) tr.max_b.pop_front();
  }
}

void SyncMonitor::observe(SimTime t, std::span<const Tick> clocks) {
  if (clocks.size() != tracks_.size()) throw UsageError("monitor node count mismatch");
  ++samples_;
  const Ring r(tau_);
  for (std::size_t n = 0; n < clocks.size(); ++n) {
    auto& tr = tracks_[n];
    if (tr.seen) tr.unwrapped += r.signed_diff(clocks[n], tr.last);
    tr.last = clocks[n];
    tr.seen = true;
  }

  last_spread_ = clock_spread(clocks, tau_);
  if (last_spread_ > eps0_floor_) {
    ++eq1_violations_;
    last_violation_ = t;
    restart(t);
    return;
  }
  while (!spread_max_.empty() && spread_max_.back().second <= last_spread_) spread_max_.pop_back();
  spread_max_.emplace_back(t, last_spread_);

  for (auto& tr : tracks_) {
    const __int128 v = tr.unwrapped * T_H_ - t;
    const Point pt{t, scale_ * v - rho_term_ * t, scale_ * v + rho_term_ * t};
    const SimTime horizon = t - delta_;
    while (!tr.buf.empty() && tr.buf.front().t < horizon) tr.buf.pop_front();
    while (!tr.min_a.empty() && tr.min_a.front().t < horizon) tr.min_a.pop_front();
    while (!tr.max_b.empty() && tr.max_b.front().t < horizon) tr.max_b.pop_front();

    const bool bad = (!tr.min_a.empty() && pt.a - tr.min_a.front().a > thr_) ||
                     (!tr.max_b.empty() && tr.max_b.front().b - pt.b > thr_);
    if (bad) {
      ++eq2_violations_;
      last_violation_ = t;
      SimTime latest = tr.buf.front().t;
      for (auto it = tr.buf.rbegin(); it != tr.buf.rend(); ++it) {
        if (pt.a - it->a > thr_ || it->b - pt.b > thr_) {
          latest = it->t;
          break;
        }
      }
      drop_through(latest);
    }

    tr.buf.push_back(pt);
    while (!tr.min_a.empty() && tr.min_a.back().a >= pt.a) tr.min_a.pop_back();
    tr.min_a.push_back(pt);
    while (!tr.max_b.empty() && tr.max_b.back().b <= pt.b) tr.max_b.pop_back();
    tr.max_b.push_back(pt);
  }
}

}  // namespace ssbcs
