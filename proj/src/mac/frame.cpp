#include "zbsim/mac/frame.hpp"

#include <array>
#include <stdexcept>

#include <fmt/format.h>

namespace zbsim {

namespace {

constexpr std::array<std::string_view, 8> kFrameNames = {
    "Beacon", "Data", "Ack", "ProbeRequest", "ProbeResponse", "AssocRequest", "AssocResponse", "Disassoc",
};

}  // namespace

std::string_view to_string(FrameKind kind) { return kFrameNames.at(static_cast<std::size_t>(kind)); }

std::optional<FrameKind> frame_kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kFrameNames.size(); ++i) {
    if (kFrameNames[i] == s) return static_cast<FrameKind>(i);
  }
  return std::nullopt;
}

bool requires_ack(const Frame& frame) {
  if (frame.is_broadcast()) return false;
  return !is_csma_exempt(frame.kind);
}

int mac_frame_bytes(const Frame& frame) {
  constexpr int kFcs = 2;
  switch (frame.kind) {
    case FrameKind::Ack:
      return 3 + kFcs;  // frame control + sequence
    case FrameKind::Beacon:
      // frame control, seq, source PAN, source address, superframe spec,
      // GTS and pending-address fields
      return 7 + 4 + frame.payload_len + kFcs;
    case FrameKind::Data:
      return 9 + frame.payload_len + kFcs;
    default:
      // command frames: full short-address header plus command identifier
      return 9 + 1 + frame.payload_len + kFcs;
  }
}

void validate(const Frame& frame) {
  if (frame.payload_len < 0) throw std::invalid_argument("frame payload length is negative");
  switch (frame.kind) {
    case FrameKind::Ack:
      if (frame.payload_len != 0) throw std::invalid_argument("Ack frames carry no payload");
      if (frame.is_broadcast()) throw std::invalid_argument("Ack frames are addressed to the acknowledged sender");
      break;
    case FrameKind::Data:
    case FrameKind::ProbeResponse:
    case FrameKind::AssocRequest:
    case FrameKind::AssocResponse:
    case FrameKind::Disassoc:
      if (frame.is_broadcast()) {
        throw std::invalid_argument(fmt::format("{} frames must be unicast", to_string(frame.kind)));
      }
      break;
    case FrameKind::Beacon:
    case FrameKind::ProbeRequest:
      break;
  }
}

}  // namespace zbsim
