#pragma once

#include "ssbcs/protocol.hpp"
#include "ssbcs/random.hpp"
#include "ssbcs/sync_check.hpp"
#include "ssbcs/sysconfig.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ssbcs {

class World;

struct DelayQuery {
  bool uplink = true;
  int from = 0;  // node id
  int to = 0;    // node id
  int plane = 0;
  SimTime at = 0;
};

/// Environment and Byzantine behaviour. Drift, delay and skew answers are
/// clamped by the engine; faulty-side content is unrestricted.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;

  virtual void on_start(World&) {}
  virtual SimTime tick_period(int node, std::uint64_t k) = 0;
  virtual SimTime delay(const DelayQuery& q) = 0;
  virtual SimTime sig_skew(int mes, int plane, std::uint64_t round) = 0;

  virtual std::optional<TTMessageUp> faulty_mes_payload(World&, int /*mes*/, int /*plane*/) {
    return std::nullopt;
  }
  virtual void on_honest_sig(World&, int /*plane*/, SimTime /*t*/) {}
  virtual void on_uplink_to_faulty_plane(World&, int /*plane*/, const TTMessageUp&) {}
  virtual void on_timer(World&, std::uint64_t /*tag*/) {}
};

struct AdversaryOptions {
  /// Scales the SplitBrain plane bias; 1 means +-eps1/2.
  Rational bias_scale{1};
  /// RandomNoise: mean gap between fake rounds, in ticks.
  Tick noise_gap = 0;
};

std::vector<std::string> adversary_names();
std::unique_ptr<Adversary> make_adversary(const std::string& name, const SystemConfig& cfg,
                                          std::uint64_t seed, const AdversaryOptions& opts = {});

}  // namespace ssbcs
