#include "ssbcs/adversary.hpp"

#include "ssbcs/simnet.hpp"

#include <algorithm>

namespace ssbcs {

namespace {

std::uint64_t hash3(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(seed ^ mix64(a * 0x9e3779b97f4a7c15ULL + mix64(b + 0x632be59bd9b4e019ULL)));
}

std::int64_t pick(std::uint64_t h, std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  return lo + static_cast<std::int64_t>(h % static_cast<std::uint64_t>(hi - lo + 1));
}

class Base : public Adversary {
 public:
  Base(const SystemConfig& cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed), rng_(derive_seed(seed, 7)) {
    const Rational th(cfg.params.T_H);
    lo_ = std::max<SimTime>(1, ceil_to_int((1 - cfg.params.rho) * th));
    hi_ = floor_to_int((1 + cfg.params.rho) * th);
  }

  SimTime tick_period(int node, std::uint64_t) override {
    return pick(hash3(seed_, 1, static_cast<std::uint64_t>(node)), lo_, hi_);
  }
  SimTime delay(const DelayQuery&) override { return rng_.between(cfg_.params.d_min, cfg_.params.d_max); }
  SimTime sig_skew(int, int, std::uint64_t) override { return rng_.between(0, cfg_.derived.eps_rnd); }

 protected:
  // What an honest MES would put on plane p right now, borrowed from the
  // first honest MES.
  std::optional<TTMessageUp> honest_like(World& w, int plane) const {
    for (int j = 0; j < cfg_.params.n0; ++j) {
      if (w.faults().mes_faulty(j)) continue;
      return mes_on_begin_vc_send(w.mes_state(j), j, plane, w.hardware(j), cfg_);
    }
    return std::nullopt;
  }

  SystemConfig cfg_;
  std::uint64_t seed_;
  Rng rng_;
  SimTime lo_ = 0;
  SimTime hi_ = 0;
};

class Silent : public Base {
 public:
  using Base::Base;
  std::string name() const override { return "Silent"; }
};

class RandomNoise : public Base {
 public:
  RandomNoise(const SystemConfig& cfg, std::uint64_t seed, Tick gap) : Base(cfg, seed), gap_(gap) {
    if (gap_ == 0) gap_ = std::max<Tick>(1, cfg.derived.T / 3);
  }
  std::string name() const override { return "RandomNoise"; }

  SimTime tick_period(int node, std::uint64_t k) override {
    return pick(hash3(seed_, static_cast<std::uint64_t>(node) + 2, k), lo_, hi_);
  }

  std::optional<TTMessageUp> faulty_mes_payload(World&, int mes, int) override {
    const Tick tau = cfg_.derived.tau_max;
    TTMessageUp m;
    m.sender = mes;
    for (int q = 0; q < cfg_.params.n1; ++q) {
      auto val = [&]() -> Entry {
        if (rng_.below(5) == 0) return std::nullopt;
        return rng_.below(tau);
      };
      m.c_vec.push_back(val());
      m.m_vec.push_back(val());
      m.a_vec.push_back(static_cast<int>(rng_.between(-1, cfg_.params.a0 + 1)));
    }
    return m;
  }

  void on_start(World& w) override { w.schedule_timer(next_gap(), 0); }

  void on_timer(World& w, std::uint64_t) override {
    const Tick tau = cfg_.derived.tau_max;
    const SimTime now = w.now();
    for (int p : w.faults().faulty_planes) {
      for (int i = 0; i < cfg_.params.n0; ++i) {
        if (w.faults().mes_faulty(i) || rng_.below(2) == 0) continue;
        const SimTime lag = rng_.between(0, cfg_.params.d_max) +
                            static_cast<SimTime>(cfg_.schedule.c_recv.begin) * cfg_.params.T_H;
        w.fake_round(p, i, now, now + lag, rng_.below(tau));
      }
    }
    for (int i : w.faults().faulty_mes) {
      const int p = static_cast<int>(rng_.below(static_cast<std::uint64_t>(cfg_.params.n1)));
      w.attempt_send(i, p, now + rng_.between(0, cfg_.params.T_H * 4));
    }
    w.schedule_timer(now + next_gap(), 0);
  }

 private:
  SimTime next_gap() {
    const SimTime mean = static_cast<SimTime>(gap_) * cfg_.params.T_H;
    return rng_.between(1, 2 * mean);
  }
  Tick gap_;
};

/// Bounds everywhere: even nodes tick fast, odd nodes slow, every message
/// takes d_max, odd planes start their rounds eps_rnd late.
class MaxSkew : public Base {
 public:
  using Base::Base;
  std::string name() const override { return "MaxSkew"; }

  SimTime tick_period(int node, std::uint64_t) override { return node % 2 == 0 ? lo_ : hi_; }
  SimTime delay(const DelayQuery&) override { return cfg_.params.d_max; }
  SimTime sig_skew(int, int plane, std::uint64_t) override { return plane % 2 == 0 ? 0 : cfg_.derived.eps_rnd; }

  std::optional<TTMessageUp> faulty_mes_payload(World& w, int mes, int plane) override {
    auto m = honest_like(w, plane);
    if (!m) return m;
    m->sender = mes;
    const Ring r = cfg_.ring();
    const Tick push = cfg_.derived.eps1 > 0 ? cfg_.derived.eps1 - 1 : 0;
    for (auto& c : m->c_vec) {
      if (c) c = r.add(*c, push);
    }
    return m;
  }
};

/// The faulty plane tells even MES the plane clock is ahead and odd MES that
/// it is behind; the faulty MES pulls each plane a different way, staying
/// inside eps1 so the stability check keeps passing locally.
class SplitBrain : public Base {
 public:
  SplitBrain(const SystemConfig& cfg, std::uint64_t seed, const Rational& scale) : Base(cfg, seed) {
    bias_ = static_cast<Tick>(std::max<std::int64_t>(0, floor_to_int(scale * Rational(cfg.derived.eps1) / 2)));
  }
  std::string name() const override { return "SplitBrain"; }

  void on_honest_sig(World& w, int plane, SimTime t) override {
    const Ring r = cfg_.ring();
    const Tick ahead = r.add(w.clock(w.mws_node(plane)), cfg_.schedule.c_send.begin);
    for (int fp : w.faults().faulty_planes) {
      for (int i = 0; i < cfg_.params.n0; ++i) {
        if (w.faults().mes_faulty(i) || w.ces_round_open(i, fp)) continue;
        const Tick v = i % 2 == 0 ? r.add(ahead, bias_) : r.sub(ahead, bias_);
        w.fake_round(fp, i, t, t, v);
      }
    }
  }

  std::optional<TTMessageUp> faulty_mes_payload(World& w, int mes, int plane) override {
    auto m = honest_like(w, plane);
    if (!m) return m;
    m->sender = mes;
    const Ring r = cfg_.ring();
    const Tick push = cfg_.derived.eps1 > 0 ? cfg_.derived.eps1 - 1 : 0;
    for (auto& c : m->c_vec) {
      if (c) c = plane % 2 == 0 ? r.add(*c, push) : r.sub(*c, push);
    }
    std::fill(m->a_vec.begin(), m->a_vec.end(), cfg_.params.a0);
    return m;
  }

 private:
  Tick bias_ = 0;
};

}  // namespace

std::vector<std::string> adversary_names() { return {"Silent", "RandomNoise", "SplitBrain", "MaxSkew"}; }

std::unique_ptr<Adversary> make_adversary(const std::string& name, const SystemConfig& cfg,
                                          std::uint64_t seed, const AdversaryOptions& opts) {
  if (name == "Silent") return std::make_unique<Silent>(cfg, seed);
  if (name == "RandomNoise") return std::make_unique<RandomNoise>(cfg, seed, opts.noise_gap);
  if (name == "SplitBrain") return std::make_unique<SplitBrain>(cfg, seed, opts.bias_scale);
  if (name == "MaxSkew") return std::make_unique<MaxSkew>(cfg, seed);
  throw UsageError("unknown adversary: " + name);
}

}  // namespace ssbcs
