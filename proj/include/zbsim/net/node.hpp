#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "zbsim/engine/rng.hpp"
#include "zbsim/engine/scheduler.hpp"
#include "zbsim/mac/channel.hpp"
#include "zbsim/mac/mac.hpp"
#include "zbsim/net/handover.hpp"
#include "zbsim/net/tpc.hpp"
#include "zbsim/scenario/config.hpp"
#include "zbsim/scenario/energy.hpp"
#include "zbsim/trace.hpp"

namespace zbsim {

/// Shared run state handed to every node.
struct NodeContext {
  Scheduler& scheduler;
  Channel& channel;
  TraceLog& trace;
  const ScenarioConfig& config;
  std::uint64_t seed;
};

/// Protocol stack of one device: radio ledger, MAC and network behaviour.
class NetNode : public Mac::Upper {
public:
  NetNode(NodeContext ctx, const NodeConfig& cfg);
  ~NetNode() override = default;
  NetNode(const NetNode&) = delete;
  NetNode& operator=(const NetNode&) = delete;

  /// Schedules the node's initial events.
  virtual void start() = 0;
  /// Closes open accounting intervals at the end of the run.
  virtual void stop(SimTime end);

  NodeId id() const { return id_; }
  const Role& role() const { return role_; }
  const PhyParams& phy() const { return phy_; }
  virtual Position position() const = 0;

  const EnergyLedger& ledger() const { return ledger_; }
  Mac& mac() { return *mac_; }

protected:
  /// Must be called once the derived object can answer position().
  void attach();
  TraceRecord row(TraceKind kind) const;

  NodeContext ctx_;
  NodeId id_;
  Role role_;
  PhyParams phy_;
  RngStream rng_;
  EnergyLedger ledger_;
  std::unique_ptr<Mac> mac_;
};

/// Always-on coordinator or router (or a fixed end device).
class StationaryNode final : public NetNode {
public:
  StationaryNode(NodeContext ctx, const NodeConfig& cfg);

  void start() override;
  Position position() const override { return position_; }

  void on_mac_receive(const Frame& frame, const LinkSample& sample) override;
  void on_mac_done(const Frame& frame, TxOutcome outcome) override;

  const std::set<NodeId>& children() const { return children_; }
  std::uint64_t data_received() const { return data_received_; }

private:
  void send_beacon();
  /// Queues a probe response after a random delay of up to `max_delay`.
  void send_response_later(const Frame& reply, SimTime max_delay);

  Position position_;
  SimTime beacon_offset_;
  std::optional<SimTime> beacon_interval_;
  std::set<NodeId> children_;
  std::map<NodeId, int> last_data_seq_;
  std::uint64_t data_received_ = 0;
  /// Per prober: last moment a fresh response attempt may start.
  std::map<NodeId, SimTime> response_deadline_;
};

/// Battery-powered end device following a trajectory. Sends periodic data
/// to its parent, re-associates when the link degrades and optionally
/// adapts its output power to the measured link quality.
class MobileNode final : public NetNode {
public:
  MobileNode(NodeContext ctx, const NodeConfig& cfg);

  void start() override;
  void stop(SimTime end) override;
  Position position() const override { return position_; }

  void on_mac_receive(const Frame& frame, const LinkSample& sample) override;
  void on_mac_done(const Frame& frame, TxOutcome outcome) override;
  void on_mac_idle() override;

  std::optional<NodeId> parent() const { return parent_; }
  int last_lq() const { return last_lq_; }
  const HandoverStats& handover_stats() const { return handover_; }
  const TrafficStats& traffic_stats() const { return traffic_; }
  double current_power() const { return tpc_.current_power_dbm; }

private:
  enum class Phase { Idle, Probing, Window, Scanning, Associating };

  void on_move_tick();
  void on_data_due();
  void on_retry_due();

  std::optional<std::string_view> handover_trigger() const;
  void start_handover(std::string_view reason);
  void scan_poll();
  void on_scan_dwell_end();
  void decide();
  void begin_association(NodeId target);
  void complete(std::string_view outcome);
  void fail(std::string_view outcome);

  void enqueue_pending(Frame frame);
  void flush_pending();
  void set_parent(std::optional<NodeId> parent);
  void record_sample(const LinkSample& sample);
  void apply_tpc();
  void wake();
  void maybe_sleep();

  const Trajectory& trajectory_;
  std::vector<NodeId> candidates_;
  Position position_;

  std::optional<NodeId> parent_;
  int last_lq_ = 0;
  SimTime last_contact_;
  int consecutive_failures_ = 0;

  Phase phase_ = Phase::Idle;
  SimTime handover_started_;
  std::vector<ProbeReply> replies_;
  std::size_t scan_index_ = 0;
  NodeId assoc_target_ = 0;
  std::optional<EventId> phase_timer_;
  std::optional<EventId> retry_timer_;

  std::deque<Frame> pending_;
  std::vector<LinkSample> samples_;
  TpcState tpc_;

  bool sleeping_ = false;
  bool traffic_started_ = false;
  std::optional<SimTime> outage_since_;

  HandoverStats handover_;
  TrafficStats traffic_;
};

}  // namespace zbsim
