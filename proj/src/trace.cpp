#include "zbsim/trace.hpp"

#include <array>

namespace zbsim {

namespace {

constexpr std::array<std::string_view, 16> kTraceNames = {
    "MOVE",      "TX_START",   "RX",        "RX_COLLISION",   "BACKOFF",        "CCA",
    "MAC_DONE",  "ACK_SKIPPED", "BEACON_SKIPPED", "DATA_GEN", "DATA_DROP", "HANDOVER_START",
    "HANDOVER_DONE", "TPC_SET", "SLEEP",     "WAKE",
};

}  // namespace

std::string_view to_string(TraceKind kind) { return kTraceNames.at(static_cast<std::size_t>(kind)); }

std::optional<TraceKind> trace_kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kTraceNames.size(); ++i) {
    if (kTraceNames[i] == s) return static_cast<TraceKind>(i);
  }
  return std::nullopt;
}

}  // namespace zbsim
