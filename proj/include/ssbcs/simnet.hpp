#pragma once

#include "ssbcs/protocol.hpp"
#include "ssbcs/random.hpp"
#include "ssbcs/sync_check.hpp"
#include "ssbcs/sysconfig.hpp"
#include "ssbcs/trace.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace ssbcs {

class Adversary;

class InternalFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Deterministic priority queue: (time, node, kind rank, insertion seq).
template <class Payload>
class EventQueue {
 public:
  struct Item {
    SimTime t;
    int node;
    int rank;
    std::uint64_t seq;
    Payload payload;
  };

  void push(SimTime t, int node, int rank, Payload p) {
    if (t < now_) throw InternalFault("event scheduled in the past");
    heap_.push(Item{t, node, rank, seq_++, std::move(p)});
  }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Item& top() const { return heap_.top(); }
  Item pop() {
    Item it = heap_.top();
    heap_.pop();
    now_ = it.t;
    return it;
  }
  SimTime now() const { return now_; }

 private:
  struct Later {
    bool operator()(const Item& a, const Item& b) const {
      if (a.t != b.t) return a.t > b.t;
      if (a.node != b.node) return a.node > b.node;
      if (a.rank != b.rank) return a.rank > b.rank;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Item, std::vector<Item>, Later> heap_;
  std::uint64_t seq_ = 0;
  SimTime now_ = std::numeric_limits<SimTime>::min();
};

/// Drifting tick counter. Tick k happens at tick_time(k); H = h0 + k mod tau.
class HardwareClock {
 public:
  using PeriodFn = std::function<SimTime(std::uint64_t k)>;

  HardwareClock(Tick h0, SimTime tick0_time, Tick tau_max, PeriodFn period);

  SimTime tick_time(std::uint64_t k);
  /// Index of the last tick at or before t.
  std::uint64_t index_at(SimTime t);
  Tick value_of_index(std::uint64_t k) const { return static_cast<Tick>((h0_ + k % tau_) % tau_); }
  Tick value_at(SimTime t) { return value_of_index(index_at(t)); }
  /// Forgets ticks strictly before the one in force at t.
  void trim(SimTime t);

 private:
  void extend_to(std::uint64_t k);

  Tick h0_;
  Tick tau_;
  PeriodFn period_;
  std::uint64_t base_ = 0;
  std::deque<SimTime> times_;
};

struct FaultAssignment {
  std::vector<int> faulty_mes;
  std::vector<int> faulty_planes;

  bool mes_faulty(int i) const;
  bool plane_faulty(int p) const;
};

enum class InitialState { Random, Synchronized };

struct InitialOverrides {
  std::optional<std::vector<Tick>> clock_values;  // per node, C at t = 0
  std::optional<std::vector<SimTime>> tick_phase;  // per node, tick 0 at -phase
};

struct WorldOptions {
  std::uint64_t seed = 1;
  InitialState init = InitialState::Random;
  FaultAssignment faults;
  std::ostream* trace = nullptr;
  bool keep_samples = false;
  InitialOverrides overrides;
};

/// One MWS exchanging window as recorded for resynchronization audits.
struct CoinRecord {
  int mws = 0;
  SimTime window_begin = 0;  // begin(TT_MC_recv)
  SimTime toss_time = 0;     // end(TT_MC_recv)
  bool head = false;
  int grand_life = 0;  // after a head refreshes it, before the decrement
  bool e_stb = false;
  Branch branch = Branch::Fta;
};

struct EngineStats {
  std::uint64_t events = 0;
  std::uint64_t sigs = 0;
  std::uint64_t uplinks_accepted = 0;
  std::uint64_t uplinks_dropped = 0;
  std::uint64_t downlinks_accepted = 0;
  std::uint64_t downlinks_dropped = 0;
  std::uint64_t offslot_dropped = 0;
  std::uint64_t rounds_cut = 0;
  std::uint64_t clamps = 0;
  SimTime min_period = std::numeric_limits<SimTime>::max();
  SimTime max_period = 0;
  SimTime min_delay = std::numeric_limits<SimTime>::max();
  SimTime max_delay = 0;
  SimTime max_skew = 0;
  std::uint64_t e_stb_split_windows = 0;  // some honest MWS true, another false
};

/// The simulated system. Node ids: MES i -> i, MWS p -> n0 + p.
class World {
 public:
  World(const SystemConfig& cfg, std::unique_ptr<Adversary> adversary, WorldOptions opts);
  ~World();
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  void run_until(SimTime t_end);

  const SystemConfig& config() const { return cfg_; }
  SimTime now() const { return now_; }
  const FaultAssignment& faults() const { return opts_.faults; }
  int mws_node(int p) const { return cfg_.params.n0 + p; }
  int node_count() const { return cfg_.params.n0 + cfg_.params.n1; }

  Tick hardware(int node);
  Tick clock(int node);
  std::vector<int> monitored_nodes() const { return monitored_; }

  const MesState& mes_state(int i) const { return mes_[static_cast<std::size_t>(i)]; }
  const MwsState& mws_state(int p) const { return mws_[static_cast<std::size_t>(p)].state; }

  const SyncMonitor& monitor() const { return monitor_; }
  const std::vector<CoinRecord>& coin_log() const { return coins_; }
  const std::vector<SyncSample>& samples() const { return samples_; }
  const EngineStats& stats() const { return stats_; }
  SimTime window_length() const { return static_cast<SimTime>(cfg_.derived.T) * cfg_.params.T_H; }

  // Adversary controls.
  void schedule_timer(SimTime at, std::uint64_t tag);
  /// Faulty plane p opens a round at MES i at sig_at and delivers value at msg_at.
  bool fake_round(int plane, int mes, SimTime sig_at, SimTime msg_at, Tick value);
  /// A faulty MES tries to put a frame on plane p at time `at`; anything off
  /// its TT_VC_send tick is dropped at the plane boundary.
  bool attempt_send(int mes, int plane, SimTime at);
  bool ces_round_open(int mes, int plane) const;
  std::optional<SimTime> ces_vc_send_time(int mes, int plane) const;
  std::optional<SimTime> ces_recv_window_open(int mes, int plane) const;
  TraceWriter& trace() { return trace_; }

 private:
  enum class Kind : int {
    TickAction,
    SigArrive,
    MsgUp,
    MsgDown,
    VcSend,
    CRecvOpen,
    McRecvEnd,
    CSendBegin,
    CSendEnd,
    CRecvEnd,
    Timer,
    Sample,
    OffslotAttempt
  };
  struct Ev {
    Kind kind;
    int plane = 0;
    int mes = 0;
    std::uint64_t round = 0;
    std::uint64_t gen = 0;
    std::uint64_t aux = 0;
  };
  struct CesRound {
    std::uint64_t round = 0;
    std::uint64_t gen = 0;
    bool active = false;
    bool got_frame = false;
    std::optional<Tick> held;
    std::uint64_t anchor_tick = 0;
    SimTime vc_send = 0;
    SimTime recv_open = 0;
    SimTime recv_close = 0;
  };
  struct MwsNode {
    MwsState state;
    Rng rng{0};
    std::uint64_t round = 0;
    std::uint64_t gen = 0;
    std::uint64_t sig_gen = 0;
    Tick walk_tau_idl = 0;
    bool collecting = false;
    std::vector<bool> got_col;
    SimTime window_begin = 0;
    bool in_round = false;
  };

  static int rank_of(Kind k);
  void push(SimTime t, int node, Kind k, Ev e);
  void dispatch(const Ev& e);
  void init_state();
  void plan_sig(int p);
  void on_sig(int p);
  void on_sig_arrive(const Ev& e);
  void on_vc_send(const Ev& e);
  void on_msg_up(const Ev& e);
  void on_msg_down(const Ev& e);
  void accept_down(int i, int p, Tick m);
  void on_mc_recv_end(const Ev& e);
  void on_c_send_begin(const Ev& e);
  void on_c_send_end(const Ev& e);
  void on_c_recv_end(const Ev& e);
  void on_sample();
  void observe();
  SimTime draw_delay(bool up, int from, int to, int plane);
  SimTime period_for(int node, std::uint64_t k);
  HardwareClock& hw(int node) { return clocks_[static_cast<std::size_t>(node)]; }

  SystemConfig cfg_;
  std::unique_ptr<Adversary> adv_;
  WorldOptions opts_;
  TraceWriter trace_;
  EventQueue<Ev> queue_;
  SimTime now_ = 0;
  SimTime period_lo_ = 0;
  SimTime period_hi_ = 0;
  std::vector<HardwareClock> clocks_;
  std::vector<MesState> mes_;
  std::vector<MwsNode> mws_;
  std::vector<std::vector<CesRound>> ces_;  // [mes][plane]
  std::map<std::uint64_t, TTMessageUp> in_flight_;
  std::uint64_t next_msg_ = 0;
  std::uint64_t next_round_ = 0;
  std::vector<int> monitored_;
  SyncMonitor monitor_;
  std::vector<CoinRecord> coins_;
  std::vector<SyncSample> samples_;
  EngineStats stats_;
  std::vector<Tick> scratch_;
  // Decisions of the current window, for spotting split E_stb outcomes.
  std::map<std::uint64_t, std::pair<int, int>> stb_by_window_;
};

}  // namespace ssbcs
