#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zbsim/engine/ids.hpp"
#include "zbsim/engine/sim_time.hpp"
#include "zbsim/net/role.hpp"
#include "zbsim/phy/phy.hpp"
#include "zbsim/scenario/energy.hpp"
#include "zbsim/scenario/trajectory.hpp"

namespace zbsim {

/// Invalid scenario content. `line` is the 1-based line of the offending
/// entry, or 0 for errors that span the whole document.
class ScenarioError : public std::runtime_error {
public:
  ScenarioError(int line, std::string key, const std::string& message);

  int line() const { return line_; }
  const std::string& key() const { return key_; }

private:
  int line_;
  std::string key_;
};

struct CsmaParams {
  int mac_min_be = 3;
  int mac_max_be = 5;
  int max_csma_backoffs = 4;
  int max_frame_retries = 3;
  SimTime unit_backoff = SimTime::micros(320);
  SimTime ack_wait = SimTime::micros(864);
  SimTime turnaround = SimTime::micros(192);

  bool operator==(const CsmaParams&) const = default;
};

enum class HandoverMode : std::uint8_t { Broadcast, Scan };

std::string_view to_string(HandoverMode mode);

struct HandoverParams {
  HandoverMode mode = HandoverMode::Broadcast;
  SimTime probe_window = SimTime::millis(50);
  SimTime probe_retry = SimTime::millis(200);
  SimTime assoc_timeout = SimTime::millis(50);
  SimTime scan_response_timeout = SimTime::millis(50);
  /// Stationary nodes answer a broadcast probe after a random delay drawn
  /// in unit backoff periods from [0, response_jitter), so that responders
  /// hidden from each other rarely collide at the mobile.
  SimTime response_jitter = SimTime::millis(20);
  int ack_failure_threshold = 2;

  bool operator==(const HandoverParams&) const = default;
};

struct TpcParams {
  bool enabled = false;
  int lq_target = 64;
  int lq_hysteresis = 16;
  SimTime window = SimTime::seconds(1);

  bool operator==(const TpcParams&) const = default;
};

struct TrafficParams {
  SimTime period = SimTime::millis(100);
  int payload_bytes = 20;
  SimTime start_offset = SimTime::millis(10);
  /// Frames waiting behind a handover; the oldest is dropped beyond this.
  int pending_limit = 8;

  bool operator==(const TrafficParams&) const = default;
};

struct NodeConfig {
  NodeId id = 0;
  Role role;
  Position position;
  /// Mobile nodes only; empty means "use the scenario trajectory".
  std::optional<Trajectory> trajectory;
  std::optional<double> tx_power_dbm;
  std::optional<double> antenna_gain_db;
  std::optional<double> rx_sensitivity_dbm;
  SimTime beacon_offset;

  bool operator==(const NodeConfig&) const = default;
};

/// Everything a run needs besides the seed.
struct ScenarioConfig {
  Band band = Band::B2400;
  int channel = 11;
  BeaconOrder beacon_order;
  PhyParams phy;
  std::vector<double> power_levels = {0, 2, 3, 4, 5, 6};

  CsmaParams csma;
  std::uint16_t pan_id = 0x1A2B;

  CurrentModel currents;
  double supply_voltage = 3.0;

  Trajectory trajectory = Trajectory::default_line();
  SimTime move_tick = SimTime::millis(100);
  bool mobile_sleep = true;

  TrafficParams traffic;
  HandoverParams handover;
  TpcParams tpc;

  SimTime duration = SimTime::seconds(15);
  std::uint64_t seed = 42;
  std::vector<double> sweep_powers = {0, 2, 3, 4, 5, 6};

  std::vector<NodeConfig> nodes;

  bool operator==(const ScenarioConfig&) const = default;

  /// Effective PHY parameters of one node (scenario values plus overrides).
  PhyParams node_phy(const NodeConfig& node) const;
  const Trajectory& trajectory_of(const NodeConfig& node) const;
  const NodeConfig* find_node(NodeId id) const;
  std::vector<const NodeConfig*> mobiles() const;
  std::vector<const NodeConfig*> stationary_parents() const;

  double max_power_level() const;
  double min_power_level() const;
  bool is_power_level(double dbm) const;

  /// Throws ScenarioError (line 0) when cross-field invariants fail.
  void validate() const;
};

/// Returns a copy in which every node transmits at `power_dbm` and TPC is off.
ScenarioConfig with_fixed_power(ScenarioConfig cfg, double power_dbm);

}  // namespace zbsim
