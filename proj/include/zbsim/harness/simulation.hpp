#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "zbsim/engine/scheduler.hpp"
#include "zbsim/mac/channel.hpp"
#include "zbsim/net/handover.hpp"
#include "zbsim/net/role.hpp"
#include "zbsim/scenario/config.hpp"
#include "zbsim/scenario/energy.hpp"
#include "zbsim/trace.hpp"

namespace zbsim {

struct RunOptions {
  /// Keep per-transmission receiver snapshots (used by property tests).
  bool keep_history = false;
};

struct NodeReport {
  NodeId id = 0;
  Role role;
  EnergyBreakdown energy;
  std::array<SimTime, kRadioModeCount> mode_time{};
  SimTime total_time;
  double mean_tx_power_dbm = 0.0;
  std::map<double, SimTime> tx_time_by_level;
  /// Stationary nodes: distinct data frames received.
  std::uint64_t data_received = 0;

  SimTime time_in(RadioMode mode) const { return mode_time[static_cast<std::size_t>(mode)]; }
  SimTime radio_on_time() const { return total_time - time_in(RadioMode::Sleep); }
};

struct MobileReport {
  NodeId id = 0;
  std::optional<NodeId> final_parent;
  HandoverStats handover;
  TrafficStats traffic;
  double final_power_dbm = 0.0;
};

struct RunResult {
  std::uint64_t seed = 0;
  SimTime duration;
  /// Path of the first mobile node (the default line when there is none).
  Trajectory trajectory;
  std::vector<TraceRecord> trace;
  std::vector<NodeReport> nodes;
  std::vector<MobileReport> mobiles;
  RunSummary engine;
  std::vector<TransmissionRecord> history;

  const NodeReport* node(NodeId id) const;
  /// Throws std::logic_error when the scenario had no mobile node.
  const MobileReport& mobile() const;
  const NodeReport& mobile_node() const;
};

/// Executes one run over [0, duration). Validates the configuration first
/// (ScenarioError on failure). Ledgers are closed at `duration`, so every
/// node's mode times sum to exactly the run length.
RunResult run_simulation(const ScenarioConfig& cfg, std::uint64_t seed, const RunOptions& options = {});

}  // namespace zbsim
