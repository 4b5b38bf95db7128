#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zbsim/engine/ids.hpp"
#include "zbsim/engine/sim_time.hpp"
#include "zbsim/mac/frame.hpp"

namespace zbsim {

enum class TraceKind : std::uint8_t {
  Move,
  TxStart,
  Rx,
  RxCollision,
  Backoff,
  Cca,
  MacDone,
  AckSkipped,
  BeaconSkipped,
  DataGen,
  DataDrop,
  HandoverStart,
  HandoverDone,
  TpcSet,
  Sleep,
  Wake,
};

std::string_view to_string(TraceKind kind);
std::optional<TraceKind> trace_kind_from_string(std::string_view s);

/// One row of the flat event log. Columns that do not apply stay empty.
struct TraceRecord {
  std::int64_t time_us = 0;
  NodeId node_id = 0;
  TraceKind kind = TraceKind::Move;
  std::optional<FrameKind> frame_kind;
  std::optional<NodeId> src;
  std::optional<NodeId> dst;
  std::optional<int> seq;
  std::optional<double> power_dbm;
  std::optional<double> rx_power_dbm;
  std::optional<int> lq;
  std::optional<double> pos_x_m;
  std::string outcome;
};

/// Append-only row sink shared by every layer of one run.
class TraceLog {
public:
  void emit(TraceRecord record) { rows_.push_back(std::move(record)); }
  const std::vector<TraceRecord>& rows() const { return rows_; }
  std::vector<TraceRecord> take() { return std::move(rows_); }

private:
  std::vector<TraceRecord> rows_;
};

/// Fills the frame-describing columns of a row.
inline TraceRecord frame_row(SimTime t, NodeId node, TraceKind kind, const Frame& f) {
  TraceRecord r;
  r.time_us = t.us();
  r.node_id = node;
  r.kind = kind;
  r.frame_kind = f.kind;
  r.src = f.src;
  r.dst = f.dst;
  r.seq = f.seq;
  return r;
}

}  // namespace zbsim
