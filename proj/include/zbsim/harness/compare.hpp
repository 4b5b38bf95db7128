#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "zbsim/harness/simulation.hpp"
#include "zbsim/scenario/config.hpp"

namespace zbsim {

/// Raised when two runs cannot be compared (different seed or path).
class ComparisonError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct NodeEnergyDelta {
  NodeId id = 0;
  EnergyBreakdown baseline;
  EnergyBreakdown proposed;
  /// (baseline - proposed) / baseline, in percent; 0 when baseline is 0.
  double delta_percent = 0.0;
};

struct EnergyComparison {
  std::vector<NodeEnergyDelta> nodes;
  const NodeEnergyDelta* find(NodeId id) const;
};

/// Per-node energy of a paired run. Throws ComparisonError unless both runs
/// share the seed, the mobile path and the node set.
EnergyComparison compare_energy(const RunResult& baseline, const RunResult& proposed);

/// Per-node energy table of one run.
std::string energy_report(const RunResult& run);

struct ArmResult {
  std::string name;
  HandoverMode mode = HandoverMode::Broadcast;
  bool tpc = false;
  std::uint64_t handover_attempts = 0;
  std::uint64_t handover_completions = 0;
  double mean_latency_s = 0.0;
  double total_latency_s = 0.0;
  double outage_s = 0.0;
  double radio_on_s = 0.0;
  double mean_tx_power_dbm = 0.0;
  EnergyBreakdown mobile_energy;
  TrafficStats traffic;
};

struct CompareReport {
  std::uint64_t seed = 0;
  /// broadcast+TPC, broadcast+fixed, scan+TPC, scan+fixed.
  std::vector<ArmResult> arms;
  EnergyComparison energy;  // scan+fixed (baseline) vs broadcast+TPC (proposed)
  double latency_delta_s = 0.0;   // baseline mean - proposed mean
  double energy_delta_percent = 0.0;

  const ArmResult& proposed() const { return arms.front(); }
  const ArmResult& baseline() const { return arms.back(); }
  bool latency_improved() const { return proposed().mean_latency_s < baseline().mean_latency_s; }
  bool energy_improved() const { return proposed().mobile_energy.total_mj < baseline().mobile_energy.total_mj; }
};

/// Configuration of one arm: stationary nodes at the highest level, the
/// mobile starting there and adapting only when `tpc` is set.
ScenarioConfig arm_config(const ScenarioConfig& cfg, HandoverMode mode, bool tpc);

/// Runs the four {broadcast, scan} x {TPC, fixed maximum power} arms on one
/// seed, concurrently when `parallel` is set.
CompareReport run_compare(const ScenarioConfig& cfg, std::uint64_t seed, bool parallel = true);

std::string compare_report_text(const CompareReport& report);

}  // namespace zbsim
