#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zbsim/trace.hpp"

namespace zbsim {

inline constexpr std::string_view kTraceHeader =
    "time_us,node_id,event_kind,frame_kind,src,dst,seq,power_dbm,rx_power_dbm,lq,pos_x_m,outcome";

/// Malformed trace input; `line` is 1-based.
class TraceFormatError : public std::runtime_error {
public:
  TraceFormatError(int line, const std::string& message);
  int line() const { return line_; }

private:
  int line_;
};

/// One CSV line (without the newline). Broadcast addresses are written as
/// "bcast"; powers use one decimal, positions two.
std::string format_trace_row(const TraceRecord& row);

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& rows);
std::string trace_csv(const std::vector<TraceRecord>& rows);

/// Parses a trace written by write_trace_csv. Columns are located by header
/// name, so a trace lacking one of them (pos_x_m in particular) is rejected
/// with a TraceFormatError.
std::vector<TraceRecord> read_trace_csv(std::istream& in);
std::vector<TraceRecord> parse_trace_csv(std::string_view text);

}  // namespace zbsim
