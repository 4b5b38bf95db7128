#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zbsim/engine/ids.hpp"
#include "zbsim/engine/sim_time.hpp"

namespace zbsim {

struct ProbeReply {
  NodeId responder = 0;
  /// LQ the responder measured on our probe.
  int reported_lq = 0;
};

/// Highest reported LQ wins; equal LQ goes to the lowest node id.
std::optional<NodeId> pick_best_responder(std::span<const ProbeReply> replies);

struct HandoverStats {
  std::uint64_t attempts = 0;
  std::uint64_t completions = 0;
  /// Time without a parent while traffic was being generated.
  SimTime total_outage;
  std::vector<SimTime> latencies;

  SimTime total_latency() const;
  /// Mean completion latency in seconds (0 when nothing completed).
  double mean_latency_s() const;
};

struct TrafficStats {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t no_ack = 0;
  std::uint64_t access_failures = 0;
  std::uint64_t outage_losses = 0;
  std::uint64_t overflow_drops = 0;

  double delivery_ratio() const {
    return generated == 0 ? 0.0 : static_cast<double>(delivered) / static_cast<double>(generated);
  }
};

}  // namespace zbsim
