#include "ssbcs/simnet.hpp"

#include "ssbcs/adversary.hpp"

#include <algorithm>

namespace ssbcs {

HardwareClock::HardwareClock(Tick h0, SimTime tick0_time, Tick tau_max, PeriodFn period)
    : h0_(h0 % tau_max), tau_(tau_max), period_(std::move(period)) {
  times_.push_back(tick0_time);
}

void HardwareClock::extend_to(std::uint64_t k) {
  while (base_ + times_.size() <= k) {
    const std::uint64_t last = base_ + times_.size() - 1;
    const SimTime p = period_(last);
    if (p <= 0) throw InternalFault("non-positive tick period");
    times_.push_back(times_.back() + p);
  }
}

SimTime HardwareClock::tick_time(std::uint64_t k) {
  if (k < base_) throw InternalFault("tick already trimmed");
  extend_to(k);
  return times_[k - base_];
}

std::uint64_t HardwareClock::index_at(SimTime t) {
  if (t < times_.front()) throw InternalFault("clock queried before its retained history");
  while (times_.back() <= t) extend_to(base_ + times_.size());
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return base_ + static_cast<std::uint64_t>(it - times_.begin()) - 1;
}

void HardwareClock::trim(SimTime t) {
  const std::uint64_t k = index_at(t);
  const std::uint64_t drop = k - base_;
  times_.erase(times_.begin(), times_.begin() + static_cast<std::ptrdiff_t>(drop));
  base_ = k;
}

bool FaultAssignment::mes_faulty(int i) const {
  return std::find(faulty_mes.begin(), faulty_mes.end(), i) != faulty_mes.end();
}

bool FaultAssignment::plane_faulty(int p) const {
  return std::find(faulty_planes.begin(), faulty_planes.end(), p) != faulty_planes.end();
}

namespace {

std::vector<int> monitored_of(const SystemConfig& cfg, const FaultAssignment& f) {
  std::vector<int> out;
  for (int i = 0; i < cfg.params.n0; ++i) {
    if (!f.mes_faulty(i)) out.push_back(i);
  }
  for (int p = 0; p < cfg.params.n1; ++p) {
    if (!f.plane_faulty(p)) out.push_back(cfg.params.n0 + p);
  }
  return out;
}

const FaultAssignment& checked(const SystemConfig& cfg, const FaultAssignment& f) {
  auto check = [](const std::vector<int>& v, int n, int budget, const char* what) {
    std::vector<int> s = v;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw UsageError(std::string("duplicate faulty ") + what);
    for (int x : s) {
      if (x < 0 || x >= n) throw UsageError(std::string("faulty ") + what + " id out of range");
    }
    if (static_cast<int>(s.size()) > budget)
      throw UsageError(std::string("more faulty ") + what + " than the fault budget");
  };
  check(f.faulty_mes, cfg.params.n0, cfg.params.f0, "MES");
  check(f.faulty_planes, cfg.params.n1, cfg.params.f1, "planes");
  return f;
}

}  // namespace

int World::rank_of(Kind k) {
  switch (k) {
    case Kind::TickAction: return 0;
    case Kind::SigArrive: return 1;
    case Kind::MsgUp: return 2;
    case Kind::MsgDown: return 2;
    case Kind::CRecvOpen: return 3;
    case Kind::VcSend: return 4;
    case Kind::OffslotAttempt: return 4;
    case Kind::McRecvEnd: return 5;
    case Kind::CSendBegin: return 6;
    case Kind::CSendEnd: return 7;
    case Kind::CRecvEnd: return 8;
    case Kind::Timer: return 9;
    case Kind::Sample: return 10;
  }
  return 11;
}

World::World(const SystemConfig& cfg, std::unique_ptr<Adversary> adversary, WorldOptions opts)
    : cfg_(cfg),
      adv_(std::move(adversary)),
      opts_(std::move(opts)),
      trace_(opts_.trace),
      monitored_(monitored_of(cfg_, checked(cfg_, opts_.faults))),
      monitor_(cfg_, static_cast<int>(monitored_.size())) {
  if (!adv_) throw UsageError("world needs an adversary");
  const Rational th(cfg_.params.T_H);
  period_lo_ = ceil_to_int((1 - cfg_.params.rho) * th);
  period_hi_ = floor_to_int((1 + cfg_.params.rho) * th);
  if (period_lo_ < 1) period_lo_ = 1;
  init_state();
}

World::~World() = default;

SimTime World::period_for(int node, std::uint64_t k) {
  SimTime p = adv_->tick_period(node, k);
  if (p < period_lo_ || p > period_hi_) {
    ++stats_.clamps;
    trace_.line("clamp", now_).f("what", "period").f("node", node).f("asked", static_cast<std::int64_t>(p));
    p = std::clamp(p, period_lo_, period_hi_);
  }
  stats_.min_period = std::min(stats_.min_period, p);
  stats_.max_period = std::max(stats_.max_period, p);
  return p;
}

SimTime World::draw_delay(bool up, int from, int to, int plane) {
  SimTime d = adv_->delay(DelayQuery{up, from, to, plane, now_});
  if (d < cfg_.params.d_min || d > cfg_.params.d_max) {
    ++stats_.clamps;
    trace_.line("clamp", now_).f("what", "delay").f("node", from).f("asked", static_cast<std::int64_t>(d));
    d = std::clamp<SimTime>(d, cfg_.params.d_min, cfg_.params.d_max);
  }
  stats_.min_delay = std::min(stats_.min_delay, d);
  stats_.max_delay = std::max(stats_.max_delay, d);
  return d;
}

void World::push(SimTime t, int node, Kind k, Ev e) {
  e.kind = k;
  queue_.push(t, node, rank_of(k), e);
}

Tick World::hardware(int node) { return hw(node).value_at(now_); }

Tick World::clock(int node) {
  const Tick tau = cfg_.derived.tau_max;
  const Tick h = hardware(node);
  if (node < cfg_.params.n0) return clock_value(h, mes_[static_cast<std::size_t>(node)].clock_offset, tau);
  return clock_value(h, mws_[static_cast<std::size_t>(node - cfg_.params.n0)].state.clock_offset, tau);
}

void World::init_state() {
  const auto& P = cfg_.params;
  const auto& D = cfg_.derived;
  const Ring r = cfg_.ring();
  const Tick tau = D.tau_max;
  Rng init(derive_seed(opts_.seed, 1));
  const int nodes = node_count();

  const auto& ov = opts_.overrides;
  if (ov.clock_values && static_cast<int>(ov.clock_values->size()) != nodes)
    throw UsageError("clock_values override needs one value per node");
  if (ov.tick_phase && static_cast<int>(ov.tick_phase->size()) != nodes)
    throw UsageError("tick_phase override needs one value per node");

  clocks_.clear();
  clocks_.reserve(static_cast<std::size_t>(nodes));
  for (int n = 0; n < nodes; ++n) {
    const Tick h0 = init.below(tau);
    SimTime phase = static_cast<SimTime>(init.below(static_cast<std::uint64_t>(period_lo_)));
    if (ov.tick_phase) phase = (*ov.tick_phase)[static_cast<std::size_t>(n)];
    if (phase < 0) throw UsageError("tick phase must be non-negative");
    clocks_.emplace_back(h0, -phase, tau, [this, n](std::uint64_t k) { return period_for(n, k); });
  }

  // Clock value everybody starts from in a synchronized start: just after a
  // completed round.
  const Tick periods = tau / D.T;
  const Tick k_round = init.below(periods);
  const Tick c0 = r.wrap(k_round * D.T + cfg_.schedule.c_recv.end + 1);
  const Tick m_last = r.wrap(k_round * D.T + cfg_.schedule.c_send.end);
  const bool sync = opts_.init == InitialState::Synchronized;

  auto offset_for = [&](int n) -> Tick {
    const Tick h = hw(n).value_at(0);
    if (ov.clock_values) return r.sub((*ov.clock_values)[static_cast<std::size_t>(n)] % tau, h);
    if (sync) return r.sub(c0, h);
    return init.below(tau);
  };

  mes_.clear();
  for (int i = 0; i < P.n0; ++i) {
    MesState s = MesState::make(P.n1);
    s.clock_offset = offset_for(i);
    for (int p = 0; p < P.n1; ++p) {
      const auto k = static_cast<std::size_t>(p);
      if (sync) {
        s.m_rec[k] = m_last;
        s.h_rec[k] = r.sub(m_last, s.clock_offset);
        s.prev_m[k] = r.sub(m_last, D.T % tau);
        s.prev_h[k] = r.sub(*s.h_rec[k], D.T % tau);
        s.acc[k] = P.a0;
      } else {
        s.m_rec[k] = init.below(tau);
        s.h_rec[k] = init.below(tau);
        s.prev_m[k] = init.below(tau);
        s.prev_h[k] = init.below(tau);
        s.acc[k] = static_cast<int>(init.below(static_cast<std::uint64_t>(P.a0) + 1));
      }
      s.c_tilde[k] = r.sub(*s.m_rec[k], *s.h_rec[k]);
    }
    mes_.push_back(std::move(s));
  }

  mws_.clear();
  for (int p = 0; p < P.n1; ++p) {
    MwsNode m;
    m.state = MwsState::make(cfg_);
    m.rng = Rng(derive_seed(opts_.seed, 100 + static_cast<std::uint64_t>(p)));
    m.state.clock_offset = offset_for(mws_node(p));
    if (sync) {
      m.state.tau_idl = tau;
      m.state.grand_life = 0;
      m.state.c_tilde_old = m.state.clock_offset;
    } else {
      m.state.grand_life = static_cast<int>(init.below(static_cast<std::uint64_t>(D.g0) + 1));
      m.state.b_coin = init.below(2) == 1;
      m.state.tau_idl = init.below(tau + 1);
      m.state.c_tilde_old = init.below(tau);
      m.state.c_new = init.below(tau);
    }
    m.got_col.assign(static_cast<std::size_t>(P.n0), false);
    mws_.push_back(std::move(m));
  }

  ces_.assign(static_cast<std::size_t>(P.n0), std::vector<CesRound>(static_cast<std::size_t>(P.n1)));

  trace_.line("init", 0)
      .f("seed", opts_.seed)
      .f("sync", sync)
      .f("adversary", adv_->name())
      .f("faulty_mes", opts_.faults.faulty_mes)
      .f("faulty_planes", opts_.faults.faulty_planes);

  for (int p = 0; p < P.n1; ++p) {
    if (!opts_.faults.plane_faulty(p)) plan_sig(p);
  }
  push(0, node_count() + 1, Kind::Sample, Ev{});
  adv_->on_start(*this);
}

void World::plan_sig(int p) {
  auto& m = mws_[static_cast<std::size_t>(p)];
  ++m.sig_gen;
  const int node = mws_node(p);
  auto& clk = hw(node);
  const Tick tau = cfg_.derived.tau_max;
  MwsState probe;
  probe.tau_idl = m.state.tau_idl;
  std::uint64_t k = clk.index_at(now_) + 1;
  const std::uint64_t limit = 2 * (cfg_.derived.T + cfg_.params.T0) + 4;
  for (std::uint64_t j = 0; j < limit; ++j, ++k) {
    const Tick h = clk.value_of_index(k);
    if (mws_on_tick(probe, clock_value(h, m.state.clock_offset, tau), h, cfg_)) {
      m.walk_tau_idl = probe.tau_idl;
      Ev e;
      e.plane = p;
      e.gen = m.sig_gen;
      push(clk.tick_time(k), node, Kind::TickAction, e);
      return;
    }
  }
  throw InternalFault("MWS never emits a SIG");
}

void World::run_until(SimTime t_end) {
  while (!queue_.empty() && queue_.top().t <= t_end) {
    auto it = queue_.pop();
    now_ = it.t;
    ++stats_.events;
    dispatch(it.payload);
  }
  now_ = std::max(now_, t_end);
}

void World::dispatch(const Ev& e) {
  switch (e.kind) {
    case Kind::TickAction: {
      auto& m = mws_[static_cast<std::size_t>(e.plane)];
      if (e.gen != m.sig_gen) return;
      m.state.tau_idl = m.walk_tau_idl;
      on_sig(e.plane);
      plan_sig(e.plane);
      return;
    }
    case Kind::SigArrive: on_sig_arrive(e); return;
    case Kind::MsgUp: on_msg_up(e); return;
    case Kind::MsgDown: on_msg_down(e); return;
    case Kind::VcSend: on_vc_send(e); return;
    case Kind::CRecvOpen: {
      auto& c = ces_[static_cast<std::size_t>(e.mes)][static_cast<std::size_t>(e.plane)];
      if (e.gen != c.gen || !c.active || !c.held) return;
      const Tick v = *c.held;
      c.held.reset();
      accept_down(e.mes, e.plane, v);
      return;
    }
    case Kind::McRecvEnd: on_mc_recv_end(e); return;
    case Kind::CSendBegin: on_c_send_begin(e); return;
    case Kind::CSendEnd: on_c_send_end(e); return;
    case Kind::CRecvEnd: on_c_recv_end(e); return;
    case Kind::Timer: adv_->on_timer(*this, e.aux); return;
    case Kind::Sample: on_sample(); return;
    case Kind::OffslotAttempt:
      ++stats_.offslot_dropped;
      trace_.line("offslot_drop", now_).f("mes", e.mes).f("plane", e.plane);
      return;
  }
}

void World::on_sig(int p) {
  auto& m = mws_[static_cast<std::size_t>(p)];
  const int node = mws_node(p);
  auto& clk = hw(node);
  const auto& S = cfg_.schedule;
  if (m.in_round) ++stats_.rounds_cut;
  const std::uint64_t round = ++next_round_;
  m.round = round;
  ++m.gen;
  m.in_round = true;
  m.collecting = true;
  std::fill(m.got_col.begin(), m.got_col.end(), false);
  mws_begin_round(m.state);
  ++stats_.sigs;

  const std::uint64_t k = clk.index_at(now_);
  m.window_begin = clk.tick_time(k + S.mc_recv.begin);
  Ev e;
  e.plane = p;
  e.round = round;
  e.gen = m.gen;
  push(clk.tick_time(k + S.mc_recv.end), node, Kind::McRecvEnd, e);
  push(clk.tick_time(k + S.c_send.begin), node, Kind::CSendBegin, e);
  push(clk.tick_time(k + S.c_send.end), node, Kind::CSendEnd, e);

  trace_.line("sig", now_).f("plane", p).f("round", round).f("c", clock(node)).f("h", clk.value_of_index(k));

  for (int i = 0; i < cfg_.params.n0; ++i) {
    SimTime skew = adv_->sig_skew(i, p, round);
    if (skew < 0 || skew > cfg_.derived.eps_rnd) {
      ++stats_.clamps;
      trace_.line("clamp", now_).f("what", "skew").f("node", i).f("asked", static_cast<std::int64_t>(skew));
      skew = std::clamp<SimTime>(skew, 0, cfg_.derived.eps_rnd);
    }
    stats_.max_skew = std::max(stats_.max_skew, skew);
    Ev a;
    a.plane = p;
    a.mes = i;
    a.round = round;
    push(now_ + skew, i, Kind::SigArrive, a);
  }
  adv_->on_honest_sig(*this, p, now_);
}

void World::on_sig_arrive(const Ev& e) {
  const int i = e.mes, p = e.plane;
  auto& c = ces_[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
  const auto& S = cfg_.schedule;
  if (c.active) ++stats_.rounds_cut;
  ++c.gen;
  c.round = e.round;
  c.active = true;
  c.got_frame = false;
  c.held.reset();
  auto& clk = hw(i);
  const std::uint64_t k = clk.index_at(now_);
  c.anchor_tick = k;
  c.vc_send = std::max(now_, clk.tick_time(k + S.vc_send.begin));
  c.recv_open = std::max(now_, clk.tick_time(k + S.c_recv.begin));
  c.recv_close = std::max(now_, clk.tick_time(k + S.c_recv.end));
  trace_.line("sig_arrive", now_).f("mes", i).f("plane", p).f("round", e.round).f("fake", e.aux == 1);
  Ev v;
  v.plane = p;
  v.mes = i;
  v.round = e.round;
  v.gen = c.gen;
  push(c.vc_send, i, Kind::VcSend, v);
  push(c.recv_close, i, Kind::CRecvEnd, v);
}

void World::on_vc_send(const Ev& e) {
  const int i = e.mes, p = e.plane;
  auto& c = ces_[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
  if (e.gen != c.gen || !c.active) return;
  const bool plane_bad = opts_.faults.plane_faulty(p);
  TTMessageUp msg;
  if (!opts_.faults.mes_faulty(i)) {
    msg = mes_on_begin_vc_send(mes_[static_cast<std::size_t>(i)], i, p, hardware(i), cfg_);
    if (plane_bad) {
      trace_.line("up_send", now_).f("mes", i).f("plane", p).f("round", c.round).f("to_faulty", true);
      adv_->on_uplink_to_faulty_plane(*this, p, msg);
      return;
    }
  } else {
    if (plane_bad) return;
    auto payload = adv_->faulty_mes_payload(*this, i, p);
    if (!payload) return;
    msg = std::move(*payload);
    msg.sender = i;
  }
  const SimTime d = draw_delay(true, i, mws_node(p), p);
  const std::uint64_t id = next_msg_++;
  trace_.line("up_send", now_)
      .f("mes", i)
      .f("plane", p)
      .f("round", c.round)
      .f("d", static_cast<std::int64_t>(d))
      .f("c", msg.c_vec)
      .f("a", msg.a_vec)
      .f("m", msg.m_vec);
  in_flight_.emplace(id, std::move(msg));
  Ev u;
  u.plane = p;
  u.mes = i;
  u.round = c.round;
  u.aux = id;
  push(now_ + d, mws_node(p), Kind::MsgUp, u);
}

void World::on_msg_up(const Ev& e) {
  auto it = in_flight_.find(e.aux);
  if (it == in_flight_.end()) throw InternalFault("uplink frame lost");
  TTMessageUp msg = std::move(it->second);
  in_flight_.erase(it);
  auto& m = mws_[static_cast<std::size_t>(e.plane)];
  const auto col = static_cast<std::size_t>(e.mes);
  const bool ok = m.collecting && e.round == m.round && !m.got_col[col];
  if (ok) {
    m.got_col[col] = true;
    mws_on_up_msg(m.state, msg, cfg_);
    ++stats_.uplinks_accepted;
  } else {
    ++stats_.uplinks_dropped;
  }
  trace_.line("up_recv", now_).f("mes", e.mes).f("plane", e.plane).f("round", e.round).f("ok", ok);
}

void World::on_mc_recv_end(const Ev& e) {
  auto& m = mws_[static_cast<std::size_t>(e.plane)];
  if (e.gen != m.gen) return;
  m.collecting = false;
  const int node = mws_node(e.plane);
  WindowDecision dec = mws_on_end_mc_recv(m.state, m.rng, hardware(node), cfg_);
  coins_.push_back(CoinRecord{e.plane, m.window_begin, now_, dec.coin, dec.grand_life_before, dec.e_stb,
                              dec.branch});

  const SimTime W = window_length();
  const auto w = static_cast<std::uint64_t>(now_ / W);
  auto& slot = stb_by_window_[w];
  if (slot.first >= 0) {
    (dec.e_stb ? slot.first : slot.second) += 1;
    if (slot.first > 0 && slot.second > 0) {
      ++stats_.e_stb_split_windows;
      slot = {-1, -1};
    }
  }
  while (!stb_by_window_.empty() && stb_by_window_.begin()->first + 2 < w) stb_by_window_.erase(stb_by_window_.begin());

  trace_.line("decide", now_)
      .f("plane", e.plane)
      .f("round", e.round)
      .f("coin", dec.coin)
      .f("gl", dec.grand_life_before)
      .f("stb", dec.e_stb)
      .f("weak", dec.c_weak)
      .f("branch", to_string(dec.branch))
      .f("fallback", dec.fta_fallback)
      .f("c_new", static_cast<std::uint64_t>(dec.c_new));
}

void World::on_c_send_begin(const Ev& e) {
  auto& m = mws_[static_cast<std::size_t>(e.plane)];
  if (e.gen != m.gen) return;
  auto down = mws_on_begin_c_send(m.state, e.plane);
  if (!down) return;
  trace_.line("down_send", now_).f("plane", e.plane).f("round", e.round).f("value", static_cast<std::uint64_t>(down->payload));
  for (int i = 0; i < cfg_.params.n0; ++i) {
    const SimTime d = draw_delay(false, mws_node(e.plane), i, e.plane);
    Ev x;
    x.plane = e.plane;
    x.mes = i;
    x.round = e.round;
    x.aux = down->payload;
    push(now_ + d, i, Kind::MsgDown, x);
  }
}

void World::on_c_send_end(const Ev& e) {
  auto& m = mws_[static_cast<std::size_t>(e.plane)];
  if (e.gen != m.gen) return;
  const int node = mws_node(e.plane);
  const Tick before = clock(node);
  mws_on_end_c_send(m.state, hardware(node), cfg_);
  m.in_round = false;
  trace_.line("adjust", now_).f("node", node).f("from", static_cast<std::uint64_t>(before)).f("to", static_cast<std::uint64_t>(clock(node)));
  observe();
  plan_sig(e.plane);
}

void World::on_msg_down(const Ev& e) {
  const int i = e.mes, p = e.plane;
  if (opts_.faults.mes_faulty(i)) return;
  auto& c = ces_[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
  const Tick v = static_cast<Tick>(e.aux);
  const char* what = "dropped";
  if (c.active && c.round == e.round && !c.got_frame) {
    if (now_ < c.recv_open) {
      c.held = v;
      c.got_frame = true;
      what = "held";
      Ev o;
      o.plane = p;
      o.mes = i;
      o.round = e.round;
      o.gen = c.gen;
      push(c.recv_open, i, Kind::CRecvOpen, o);
    } else if (now_ <= c.recv_close) {
      c.got_frame = true;
      what = "accepted";
      accept_down(i, p, v);
    }
  }
  if (what[0] == 'd') ++stats_.downlinks_dropped;
  trace_.line("down_recv", now_).f("mes", i).f("plane", p).f("round", e.round).f("value", static_cast<std::uint64_t>(v)).f("what", what);
}

void World::accept_down(int i, int p, Tick m) {
  ++stats_.downlinks_accepted;
  mes_on_clock_msg(mes_[static_cast<std::size_t>(i)], p, m, hardware(i), cfg_);
}

void World::on_c_recv_end(const Ev& e) {
  const int i = e.mes;
  auto& c = ces_[static_cast<std::size_t>(i)][static_cast<std::size_t>(e.plane)];
  if (e.gen != c.gen || !c.active) return;
  c.active = false;
  c.held.reset();
  if (opts_.faults.mes_faulty(i)) return;
  const Tick before = clock(i);
  mes_on_end_c_recv(mes_[static_cast<std::size_t>(i)], hardware(i), cfg_);
  trace_.line("adjust", now_).f("node", i).f("from", static_cast<std::uint64_t>(before)).f("to", static_cast<std::uint64_t>(clock(i)));
  observe();
}

void World::observe() {
  scratch_.clear();
  for (int n : monitored_) scratch_.push_back(clock(n));
  monitor_.observe(now_, scratch_);
  if (opts_.keep_samples) samples_.push_back(SyncSample{now_, scratch_});
}

void World::on_sample() {
  observe();
  for (auto& c : clocks_) c.trim(now_);
  push(now_ + cfg_.params.T_H, node_count() + 1, Kind::Sample, Ev{});
}

void World::schedule_timer(SimTime at, std::uint64_t tag) {
  Ev e;
  e.aux = tag;
  push(std::max(at, now_), cfg_.params.n0 + cfg_.params.n1, Kind::Timer, e);
}

bool World::fake_round(int plane, int mes, SimTime sig_at, SimTime msg_at, Tick value) {
  if (!opts_.faults.plane_faulty(plane)) return false;
  if (mes < 0 || mes >= cfg_.params.n0 || opts_.faults.mes_faulty(mes)) return false;
  if (sig_at < now_ || msg_at < sig_at) return false;
  const std::uint64_t round = ++next_round_;
  Ev s;
  s.plane = plane;
  s.mes = mes;
  s.round = round;
  s.aux = 1;
  push(sig_at, mes, Kind::SigArrive, s);
  Ev d;
  d.plane = plane;
  d.mes = mes;
  d.round = round;
  d.aux = value % cfg_.derived.tau_max;
  push(msg_at, mes, Kind::MsgDown, d);
  return true;
}

bool World::attempt_send(int mes, int plane, SimTime at) {
  if (!opts_.faults.mes_faulty(mes) || at < now_) return false;
  if (plane < 0 || plane >= cfg_.params.n1) return false;
  Ev e;
  e.plane = plane;
  e.mes = mes;
  push(at, mes, Kind::OffslotAttempt, e);
  return true;
}

bool World::ces_round_open(int mes, int plane) const {
  return ces_[static_cast<std::size_t>(mes)][static_cast<std::size_t>(plane)].active;
}

std::optional<SimTime> World::ces_vc_send_time(int mes, int plane) const {
  const auto& c = ces_[static_cast<std::size_t>(mes)][static_cast<std::size_t>(plane)];
  if (!c.active) return std::nullopt;
  return c.vc_send;
}

std::optional<SimTime> World::ces_recv_window_open(int mes, int plane) const {
  const auto& c = ces_[static_cast<std::size_t>(mes)][static_cast<std::size_t>(plane)];
  if (!c.active) return std::nullopt;
  return c.recv_open;
}

}  // namespace ssbcs
