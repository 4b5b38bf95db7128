#include "zbsim/net/handover.hpp"

namespace zbsim {

std::optional<NodeId> pick_best_responder(std::span<const ProbeReply> replies) {
  const ProbeReply* best = nullptr;
  for (const auto& r : replies) {
    if (best == nullptr || r.reported_lq > best->reported_lq ||
        (r.reported_lq == best->reported_lq && r.responder < best->responder)) {
      best = &r;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->responder;
}

SimTime HandoverStats::total_latency() const {
  SimTime sum;
  for (auto l : latencies) sum += l;
  return sum;
}

double HandoverStats::mean_latency_s() const {
  if (latencies.empty()) return 0.0;
  return total_latency().to_seconds() / static_cast<double>(latencies.size());
}

}  // namespace zbsim
