#include "ssbcs/protocol.hpp"

namespace ssbcs {

MesState MesState::make(int n1) {
  MesState s;
  const auto n = static_cast<std::size_t>(n1);
  s.m_rec.assign(n, std::nullopt);
  s.h_rec.assign(n, std::nullopt);
  s.c_tilde.assign(n, std::nullopt);
  s.prev_m.assign(n, std::nullopt);
  s.prev_h.assign(n, std::nullopt);
  s.acc.assign(n, 0);
  return s;
}

MwsState MwsState::make(const SystemConfig& cfg) {
  MwsState s;
  const int n0 = cfg.params.n0, n1 = cfg.params.n1;
  s.tau_idl = cfg.derived.tau_max;
  s.C_mat = ClockMatrix(n1, n0);
  s.M_mat = MsgMatrix(n1, n0);
  s.A_mat = AccMatrix(n1, n0, 0);
  return s;
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Fta: return "fta";
    case Branch::Weak: return "weak";
    case Branch::Keep: return "keep";
    case Branch::RftFta: return "rft_fta";
    case Branch::RftPick: return "rft_pick";
  }
  return "?";
}

Tick clock_value(Tick h, Tick offset, Tick tau_max) { return Ring(tau_max).add(h, offset); }

void mes_on_clock_msg(MesState& s, int p, Tick m, Tick h_now, const SystemConfig& cfg) {
  const Ring r = cfg.ring();
  const auto k = static_cast<std::size_t>(p);
  const Tick h = r.add(h_now, cfg.derived.delta_tt0);
  const Tick mm = m % r.modulus();
  s.prev_m[k] = s.m_rec[k];
  s.prev_h[k] = s.h_rec[k];
  if (s.prev_m[k] && s.prev_h[k]) {
    bool ok = accuracy_check(mm, *s.prev_m[k], h, *s.prev_h[k], FtParams::from(cfg));
    s.acc[k] = update_acc_counter(std::clamp(s.acc[k], 0, cfg.params.a0), ok, cfg.params.a0);
  } else {
    s.acc[k] = 0;
  }
  s.m_rec[k] = mm;
  s.h_rec[k] = h;
  s.c_tilde[k] = r.sub(mm, h);
}

TTMessageUp mes_on_begin_vc_send(const MesState& s, int sender, int /*p*/, Tick h_now,
                                 const SystemConfig& cfg) {
  const Ring r = cfg.ring();
  TTMessageUp msg;
  msg.sender = sender;
  const Tick shift = r.add(h_now, cfg.derived.delta_tt1);
  for (std::size_t q = 0; q < s.c_tilde.size(); ++q) {
    msg.c_vec.push_back(s.c_tilde[q] ? Entry(r.add(*s.c_tilde[q], shift)) : std::nullopt);
  }
  msg.a_vec = s.acc;
  msg.m_vec = s.m_rec;
  return msg;
}

void mes_on_end_c_recv(MesState& s, Tick h_now, const SystemConfig& cfg) {
  const Ring r = cfg.ring();
  const Tick d2 = cfg.derived.delta_tt2;
  // c_tilde + H(now) already estimates the plane clock at this instant; the
  // projection is taken relative to end(C_send) so that adding delta_tt2
  // lands back on it.
  std::vector<Tick> proj;
  for (const auto& c : s.c_tilde) {
    if (c) proj.push_back(r.sub(r.add(*c, h_now), d2));
  }
  if (proj.empty()) return;
  const Tick c_now = r.add(ring_med(proj, r.modulus()), d2);
  s.clock_offset = r.sub(c_now, h_now);
}

bool mws_on_tick(MwsState& s, Tick c_now, Tick h_now, const SystemConfig& cfg) {
  const Ring r = cfg.ring();
  const Tick sentinel = r.modulus();
  if (s.tau_idl == sentinel && c_now % cfg.derived.T == 0) {
    s.tau_idl = r.add(h_now, cfg.params.T0 % sentinel);
    return true;
  }
  if (s.tau_idl != sentinel && r.sub(s.tau_idl, h_now) > cfg.params.T0) s.tau_idl = sentinel;
  return false;
}

void mws_begin_round(MwsState& s) {
  s.C_mat.fill(std::nullopt);
  s.M_mat.fill(std::nullopt);
  s.A_mat.fill(0);
  s.have_new = false;
  s.latched = false;
}

void mws_on_up_msg(MwsState& s, const TTMessageUp& msg, const SystemConfig& cfg) {
  const Ring r = cfg.ring();
  const int n1 = cfg.params.n1;
  if (msg.sender < 0 || msg.sender >= cfg.params.n0) return;
  auto reduce = [&](const Entry& e) -> Entry {
    if (!e) return std::nullopt;
    return *e % r.modulus();
  };
  for (int q = 0; q < n1; ++q) {
    const auto k = static_cast<std::size_t>(q);
    s.C_mat.at(q, msg.sender) = k < msg.c_vec.size() ? reduce(msg.c_vec[k]) : std::nullopt;
    s.M_mat.at(q, msg.sender) = k < msg.m_vec.size() ? reduce(msg.m_vec[k]) : std::nullopt;
    s.A_mat.at(q, msg.sender) = k < msg.a_vec.size() ? std::clamp(msg.a_vec[k], 0, cfg.params.a0) : 0;
  }
}

WindowDecision mws_on_end_mc_recv(MwsState& s, Rng& rng, Tick h_now, const SystemConfig& cfg) {
  const Ring r = cfg.ring();
  const auto& d = cfg.derived;
  const FtParams fp = FtParams::from(cfg);
  WindowDecision out;
  const Tick keep = r.add(clock_value(h_now, s.clock_offset, r.modulus()), d.delta_tt3);

  s.b_coin = rng.bernoulli(d.q0);
  out.coin = s.b_coin;
  if (s.b_coin) s.grand_life = d.g0;
  out.grand_life_before = s.grand_life;

  FilterResult filt = filters(s.M_mat, s.A_mat, fp);
  out.e_stb = check_stb(s.C_mat, filt.p_acma, fp);
  out.c_weak = check_weak(s.C_mat, fp);

  auto fta_or_keep = [&]() {
    if (auto v = try_fta(s.C_mat, fp)) return *v;
    out.fta_fallback = true;
    return keep;
  };

  if (s.grand_life > 0) {
    --s.grand_life;
    if (!s.b_coin || out.e_stb) {
      out.branch = Branch::Fta;
      out.c_new = fta_or_keep();
    } else if (out.c_weak) {
      out.branch = Branch::Weak;
      out.c_new = *out.c_weak;
    } else {
      out.branch = Branch::Keep;
      out.c_new = keep;
    }
  } else if (out.e_stb) {
    out.branch = Branch::Fta;
    out.c_new = fta_or_keep();
  } else {
    const Tick pre = r.add(r.add(h_now, d.delta_tt3), s.c_tilde_old);
    bool fta_branch = false;
    auto v = rft(s.C_mat, pre, d.p0, rng, fp, &fta_branch);
    out.branch = fta_branch ? Branch::RftFta : Branch::RftPick;
    if (v) {
      out.c_new = *v;
    } else {
      out.fta_fallback = true;
      out.c_new = keep;
    }
  }
  out.grand_life_after = s.grand_life;
  s.c_new = out.c_new;
  s.have_new = true;
  return out;
}

std::optional<TTMessageDown> mws_on_begin_c_send(MwsState& s, int plane) {
  if (!s.have_new) return std::nullopt;
  s.latched = true;
  return TTMessageDown{plane, s.c_new};
}

void mws_on_end_c_send(MwsState& s, Tick h_now, const SystemConfig& cfg) {
  const Ring r = cfg.ring();
  const Tick c_now = clock_value(h_now, s.clock_offset, r.modulus());
  s.c_tilde_old = r.sub(c_now, h_now);
  if (s.have_new) s.clock_offset = r.sub(s.c_new, h_now);
  s.tau_idl = r.modulus();
  s.have_new = false;
  s.latched = false;
}

}  // namespace ssbcs
