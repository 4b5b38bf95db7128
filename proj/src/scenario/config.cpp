#include "zbsim/scenario/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace zbsim {

namespace {

std::string format_error(int line, const std::string& key, const std::string& message) {
  if (line > 0) return fmt::format("line {}: {}: {}", line, key, message);
  if (!key.empty()) return fmt::format("{}: {}", key, message);
  return message;
}

}  // namespace

ScenarioError::ScenarioError(int line, std::string key, const std::string& message)
    : std::runtime_error(format_error(line, key, message)), line_(line), key_(std::move(key)) {}

std::string_view to_string(HandoverMode mode) {
  return mode == HandoverMode::Broadcast ? "broadcast" : "scan";
}

PhyParams ScenarioConfig::node_phy(const NodeConfig& node) const {
  PhyParams p = phy;
  if (node.tx_power_dbm) p.tx_power_dbm = *node.tx_power_dbm;
  if (node.antenna_gain_db) p.antenna_gain_db = *node.antenna_gain_db;
  if (node.rx_sensitivity_dbm) p.rx_sensitivity_dbm = *node.rx_sensitivity_dbm;
  return p;
}

const Trajectory& ScenarioConfig::trajectory_of(const NodeConfig& node) const {
  return node.trajectory ? *node.trajectory : trajectory;
}

const NodeConfig* ScenarioConfig::find_node(NodeId id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [id](const NodeConfig& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

std::vector<const NodeConfig*> ScenarioConfig::mobiles() const {
  std::vector<const NodeConfig*> out;
  for (const auto& n : nodes) {
    if (n.role.is_mobile()) out.push_back(&n);
  }
  return out;
}

std::vector<const NodeConfig*> ScenarioConfig::stationary_parents() const {
  std::vector<const NodeConfig*> out;
  for (const auto& n : nodes) {
    if (!n.role.is_mobile() && n.role.can_be_parent()) out.push_back(&n);
  }
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->id < b->id; });
  return out;
}

double ScenarioConfig::max_power_level() const {
  return power_levels.empty() ? phy.tx_power_dbm : *std::max_element(power_levels.begin(), power_levels.end());
}

double ScenarioConfig::min_power_level() const {
  return power_levels.empty() ? phy.tx_power_dbm : *std::min_element(power_levels.begin(), power_levels.end());
}

bool ScenarioConfig::is_power_level(double dbm) const {
  return std::any_of(power_levels.begin(), power_levels.end(),
                     [dbm](double p) { return std::abs(p - dbm) < 1e-9; });
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& msg) { throw ScenarioError(0, key, msg); };

  if (power_levels.empty()) fail("phy.power_levels", "at least one power level is required");
  if (!std::is_sorted(power_levels.begin(), power_levels.end()) ||
      std::adjacent_find(power_levels.begin(), power_levels.end()) != power_levels.end()) {
    fail("phy.power_levels", "levels must be strictly increasing");
  }
  if (!is_power_level(phy.tx_power_dbm)) fail("phy.tx_power", "not a member of phy.power_levels");
  if (phy.rx_sensitivity_dbm >= 0) fail("phy.rx_sensitivity", "must be negative");
  if (phy.path_loss_exponent <= 0) fail("phy.path_loss_exponent", "must be positive");
  if (phy.lq_saturation_margin_db <= 0) fail("phy.lq_saturation_margin", "must be positive");
  if (phy.phy_overhead_bytes < 0) fail("phy.phy_overhead", "must be non-negative");
  if (beacon_order.value < 0 || beacon_order.value > BeaconOrder::kNonBeacon) {
    fail("phy.beacon_order", "must be within 0..15");
  }
  if (band == Band::B2400 && (channel < 11 || channel > 26)) fail("phy.channel", "must be within 11..26");

  if (csma.mac_min_be < 0 || csma.mac_min_be > csma.mac_max_be || csma.mac_max_be > 8) {
    fail("csma.mac_min_be", "requires 0 <= mac_min_be <= mac_max_be <= 8");
  }
  if (csma.max_csma_backoffs < 0) fail("csma.max_csma_backoffs", "must be non-negative");
  if (csma.max_frame_retries < 0) fail("csma.max_frame_retries", "must be non-negative");
  if (csma.unit_backoff <= SimTime{} || csma.ack_wait <= SimTime{} || csma.turnaround <= SimTime{}) {
    fail("csma", "durations must be positive");
  }
  if (csma.ack_wait <= csma.turnaround) fail("csma.ack_wait", "must exceed the turnaround time");
  if (supply_voltage <= 0) fail("energy.supply_voltage", "must be positive");
  if (move_tick <= SimTime{}) fail("trajectory.move_tick", "must be positive");
  if (traffic.period <= SimTime{}) fail("traffic.period", "must be positive");
  if (traffic.payload_bytes < 0) fail("traffic.payload", "must be non-negative");
  if (traffic.pending_limit < 1) fail("traffic.pending_limit", "must be at least 1");
  if (handover.probe_window <= SimTime{} || handover.probe_retry <= SimTime{} ||
      handover.assoc_timeout <= SimTime{} || handover.scan_response_timeout <= SimTime{}) {
    fail("handover", "durations must be positive");
  }
  if (handover.response_jitter < SimTime{} || handover.response_jitter >= handover.probe_window) {
    fail("handover.response_jitter", "must be within [0, probe_window)");
  }
  if (handover.ack_failure_threshold < 1) fail("handover.ack_failure_threshold", "must be at least 1");
  if (tpc.lq_target < 0 || tpc.lq_target > 255) fail("tpc.lq_target", "must be within 0..255");
  if (tpc.lq_hysteresis < 0) fail("tpc.lq_hysteresis", "must be non-negative");
  if (tpc.window <= SimTime{}) fail("tpc.window", "must be positive");
  if (duration < SimTime{}) fail("run.duration", "must be non-negative");
  for (double p : sweep_powers) {
    if (!is_power_level(p)) fail("sweep.powers", fmt::format("{} dBm is not a configured power level", p));
  }

  std::set<NodeId> ids;
  int coordinators = 0;
  for (const auto& n : nodes) {
    const std::string key = fmt::format("node {}", n.id);
    if (n.id == kBroadcast || n.id == kGlobal) fail(key, "reserved node id");
    if (!ids.insert(n.id).second) fail(key, "duplicate node id");
    if (n.role.kind == DeviceKind::Coordinator) ++coordinators;
    if (n.role.is_mobile() && n.role.kind != DeviceKind::EndDevice) {
      fail(key, "mobile nodes must be end devices");
    }
    if (!n.role.is_mobile() && n.trajectory) fail(key, "stationary nodes cannot have a trajectory");
    if (n.tx_power_dbm && !is_power_level(*n.tx_power_dbm)) {
      fail(key + ".tx_power", "not a member of phy.power_levels");
    }
    if (n.rx_sensitivity_dbm && *n.rx_sensitivity_dbm >= 0) fail(key + ".rx_sensitivity", "must be negative");
  }
  if (coordinators != 1) {
    fail("nodes", fmt::format("exactly one coordinator is required, found {}", coordinators));
  }
}

ScenarioConfig with_fixed_power(ScenarioConfig cfg, double power_dbm) {
  cfg.phy.tx_power_dbm = power_dbm;
  for (auto& n : cfg.nodes) n.tx_power_dbm.reset();
  cfg.tpc.enabled = false;
  return cfg;
}

}  // namespace zbsim
