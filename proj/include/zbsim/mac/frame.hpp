#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "zbsim/engine/ids.hpp"

namespace zbsim {

enum class FrameKind : std::uint8_t {
  Beacon,
  Data,
  Ack,
  ProbeRequest,
  ProbeResponse,
  AssocRequest,
  AssocResponse,
  Disassoc,
};

std::string_view to_string(FrameKind kind);
std::optional<FrameKind> frame_kind_from_string(std::string_view s);

/// Simplified 802.15.4 MAC frame. Only header fields that matter to the
/// simulation are modelled; the payload is a byte count.
struct Frame {
  FrameKind kind = FrameKind::Data;
  std::uint8_t seq = 0;
  NodeId src = 0;
  NodeId dst = kBroadcast;
  std::uint16_t pan_id = 0;
  int payload_len = 0;
  double tx_power_dbm = 0.0;
  /// ProbeResponse only: LQ the responder measured on the probe.
  int reported_lq = 0;

  bool is_broadcast() const { return dst == kBroadcast; }
};

/// True for frame kinds the receiver acknowledges when sent unicast.
bool requires_ack(const Frame& frame);

/// True for frames sent without CSMA (beacons and acknowledgments).
constexpr bool is_csma_exempt(FrameKind kind) {
  return kind == FrameKind::Beacon || kind == FrameKind::Ack;
}

/// MAC frame size in bytes (header + payload + 2-byte FCS), short addressing.
int mac_frame_bytes(const Frame& frame);

/// Throws std::invalid_argument when the frame breaks a structural rule
/// (acks with payload, broadcast data, ...).
void validate(const Frame& frame);

}  // namespace zbsim
