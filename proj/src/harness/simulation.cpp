#include "zbsim/harness/simulation.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "zbsim/net/node.hpp"

namespace zbsim {

const NodeReport* RunResult::node(NodeId id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [id](const NodeReport& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

const MobileReport& RunResult::mobile() const {
  if (mobiles.empty()) throw std::logic_error("run has no mobile node");
  return mobiles.front();
}

const NodeReport& RunResult::mobile_node() const {
  const NodeReport* n = node(mobile().id);
  if (n == nullptr) throw std::logic_error("mobile node report missing");
  return *n;
}

RunResult run_simulation(const ScenarioConfig& cfg, std::uint64_t seed, const RunOptions& options) {
  cfg.validate();

  Scheduler scheduler;
  TraceLog trace;
  Channel channel(scheduler, cfg.band, trace);
  channel.keep_history(options.keep_history);
  NodeContext ctx{scheduler, channel, trace, cfg, seed};

  std::vector<std::unique_ptr<NetNode>> nodes;
  std::vector<MobileNode*> mobiles;
  for (const NodeConfig& n : cfg.nodes) {
    if (n.role.is_mobile()) {
      auto m = std::make_unique<MobileNode>(ctx, n);
      mobiles.push_back(m.get());
      nodes.push_back(std::move(m));
    } else {
      nodes.push_back(std::make_unique<StationaryNode>(ctx, n));
    }
  }

  const SimTime end = cfg.duration;
  if (end > SimTime{}) {
    for (auto& n : nodes) n->start();
    // Events at exactly `end` belong to the next interval and are not run.
    scheduler.run_until(end - SimTime::micros(1));
  }
  for (auto& n : nodes) n->stop(end);

  RunResult result;
  result.seed = seed;
  result.duration = end;
  result.trajectory = mobiles.empty() ? Trajectory::default_line() : cfg.trajectory_of(*cfg.find_node(mobiles.front()->id()));
  result.engine = scheduler.summary();
  result.trace = trace.take();
  result.history = channel.history();

  for (const auto& n : nodes) {
    NodeReport r;
    r.id = n->id();
    r.role = n->role();
    const EnergyLedger& ledger = n->ledger();
    r.energy = ledger.breakdown();
    for (std::size_t m = 0; m < kRadioModeCount; ++m) r.mode_time[m] = ledger.time_in(static_cast<RadioMode>(m));
    r.total_time = ledger.total_time();
    r.mean_tx_power_dbm = ledger.mean_tx_power_dbm();
    r.tx_time_by_level = ledger.tx_time_by_level();
    if (auto* s = dynamic_cast<const StationaryNode*>(n.get())) r.data_received = s->data_received();
    result.nodes.push_back(std::move(r));
  }
  for (const MobileNode* m : mobiles) {
    result.mobiles.push_back(
        MobileReport{m->id(), m->parent(), m->handover_stats(), m->traffic_stats(), m->current_power()});
  }
  return result;
}

}  // namespace zbsim
