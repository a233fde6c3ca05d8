#pragma once

#include "ssbcs/ftcore.hpp"
#include "ssbcs/random.hpp"
#include "ssbcs/sysconfig.hpp"

#include <optional>
#include <vector>

namespace ssbcs {

struct MesState {
  std::vector<Entry> m_rec;
  std::vector<Entry> h_rec;
  std::vector<Entry> c_tilde;
  std::vector<Entry> prev_m;
  std::vector<Entry> prev_h;
  std::vector<int> acc;
  Tick clock_offset = 0;  // C_i = H_i + clock_offset

  static MesState make(int n1);
  bool operator==(const MesState&) const = default;
};

struct MwsState {
  int grand_life = 0;
  bool b_coin = false;
  Tick tau_idl = 0;  // == tau_max means idle
  Tick c_tilde_old = 0;
  Tick c_new = 0;
  bool have_new = false;
  bool latched = false;
  ClockMatrix C_mat;
  AccMatrix A_mat;
  MsgMatrix M_mat;
  Tick clock_offset = 0;  // C_s = H_s + clock_offset

  static MwsState make(const SystemConfig& cfg);
  bool operator==(const MwsState&) const = default;
};

struct TTMessageUp {
  int sender = 0;
  std::vector<Entry> c_vec;
  std::vector<int> a_vec;
  std::vector<Entry> m_vec;
  bool operator==(const TTMessageUp&) const = default;
};

struct TTMessageDown {
  int plane = 0;
  Tick payload = 0;
  bool operator==(const TTMessageDown&) const = default;
};

enum class Branch { Fta, Weak, Keep, RftFta, RftPick };
const char* to_string(Branch b);

/// What one MWS decided at the end of its exchanging window.
struct WindowDecision {
  bool coin = false;
  int grand_life_before = 0;
  int grand_life_after = 0;
  bool e_stb = false;
  std::optional<Tick> c_weak;
  Branch branch = Branch::Fta;
  bool fta_fallback = false;
  Tick c_new = 0;
};

Tick clock_value(Tick h, Tick offset, Tick tau_max);

void mes_on_clock_msg(MesState& s, int p, Tick m, Tick h_now, const SystemConfig& cfg);
TTMessageUp mes_on_begin_vc_send(const MesState& s, int sender, int p, Tick h_now,
                                 const SystemConfig& cfg);
void mes_on_end_c_recv(MesState& s, Tick h_now, const SystemConfig& cfg);

/// Returns true when a SIG is emitted on this tick.
bool mws_on_tick(MwsState& s, Tick c_now, Tick h_now, const SystemConfig& cfg);
void mws_begin_round(MwsState& s);
/// Stores one MES column; values are reduced onto the ring, counters clamped.
void mws_on_up_msg(MwsState& s, const TTMessageUp& msg, const SystemConfig& cfg);
WindowDecision mws_on_end_mc_recv(MwsState& s, Rng& rng, Tick h_now, const SystemConfig& cfg);
std::optional<TTMessageDown> mws_on_begin_c_send(MwsState& s, int plane);
void mws_on_end_c_send(MwsState& s, Tick h_now, const SystemConfig& cfg);

}  // namespace ssbcs
