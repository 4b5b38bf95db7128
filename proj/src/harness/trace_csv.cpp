#include "zbsim/harness/trace_csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace zbsim {

namespace {

constexpr std::size_t kColumns = 12;
constexpr std::array<std::string_view, kColumns> kColumnNames = {
    "time_us", "node_id", "event_kind", "frame_kind", "src", "dst",
    "seq",     "power_dbm", "rx_power_dbm", "lq",     "pos_x_m", "outcome"};

std::string fixed(double v, int decimals) {
  std::string s = fmt::format("{:.{}f}", v, decimals);
  // -0.0 and friends print as their positive form.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string address(NodeId id) { return id == kBroadcast ? "bcast" : fmt::format("{}", id); }

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
T parse_number(std::string_view s, int line, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw TraceFormatError(line, fmt::format("column {}: invalid number '{}'", column, s));
  }
  return value;
}

NodeId parse_address(std::string_view s, int line, std::string_view column) {
  if (s == "bcast") return kBroadcast;
  const auto v = parse_number<unsigned>(s, line, column);
  if (v > 0xFFFF) throw TraceFormatError(line, fmt::format("column {}: address out of range", column));
  return static_cast<NodeId>(v);
}

}  // namespace

TraceFormatError::TraceFormatError(int line, const std::string& message)
    : std::runtime_error(fmt::format("line {}: {}", line, message)), line_(line) {}

std::string format_trace_row(const TraceRecord& r) {
  std::string out = fmt::format("{},{},{},", r.time_us, r.node_id, to_string(r.kind));
  if (r.frame_kind) out += to_string(*r.frame_kind);
  out += ',';
  if (r.src) out += address(*r.src);
  out += ',';
  if (r.dst) out += address(*r.dst);
  out += ',';
  if (r.seq) out += fmt::format("{}", *r.seq);
  out += ',';
  if (r.power_dbm) out += fixed(*r.power_dbm, 1);
  out += ',';
  if (r.rx_power_dbm) out += fixed(*r.rx_power_dbm, 1);
  out += ',';
  if (r.lq) out += fmt::format("{}", *r.lq);
  out += ',';
  if (r.pos_x_m) out += fixed(*r.pos_x_m, 2);
  out += ',';
  out += r.outcome;
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& rows) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) out << format_trace_row(r) << '\n';
}

std::string trace_csv(const std::vector<TraceRecord>& rows) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_trace_row(r);
    out += '\n';
  }
  return out;
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) throw TraceFormatError(1, "empty trace (no header)");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::array<int, kColumns> where{};
  where.fill(-1);
  const auto header = split(line);
  for (std::size_t i = 0; i < header.size(); ++i) {
    for (std::size_t c = 0; c < kColumns; ++c) {
      if (header[i] == kColumnNames[c]) where[c] = static_cast<int>(i);
    }
  }
  for (std::size_t c = 0; c < kColumns; ++c) {
    if (where[c] < 0) throw TraceFormatError(1, fmt::format("missing column {}", kColumnNames[c]));
  }

  std::vector<TraceRecord> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw TraceFormatError(line_no, fmt::format("expected {} fields, found {}", header.size(), fields.size()));
    }
    auto field = [&](std::size_t c) { return fields[static_cast<std::size_t>(where[c])]; };

    TraceRecord r;
    r.time_us = parse_number<std::int64_t>(field(0), line_no, kColumnNames[0]);
    r.node_id = parse_address(field(1), line_no, kColumnNames[1]);
    auto kind = trace_kind_from_string(field(2));
    if (!kind) throw TraceFormatError(line_no, fmt::format("unknown event_kind '{}'", field(2)));
    r.kind = *kind;
    if (!field(3).empty()) {
      auto fk = frame_kind_from_string(field(3));
      if (!fk) throw TraceFormatError(line_no, fmt::format("unknown frame_kind '{}'", field(3)));
      r.frame_kind = *fk;
    }
    if (!field(4).empty()) r.src = parse_address(field(4), line_no, kColumnNames[4]);
    if (!field(5).empty()) r.dst = parse_address(field(5), line_no, kColumnNames[5]);
    if (!field(6).empty()) r.seq = parse_number<int>(field(6), line_no, kColumnNames[6]);
    if (!field(7).empty()) r.power_dbm = parse_number<double>(field(7), line_no, kColumnNames[7]);
    if (!field(8).empty()) r.rx_power_dbm = parse_number<double>(field(8), line_no, kColumnNames[8]);
    if (!field(9).empty()) r.lq = parse_number<int>(field(9), line_no, kColumnNames[9]);
    if (!field(10).empty()) r.pos_x_m = parse_number<double>(field(10), line_no, kColumnNames[10]);
    r.outcome = std::string(field(11));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<TraceRecord> parse_trace_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_trace_csv(in);
}

}  // namespace zbsim
