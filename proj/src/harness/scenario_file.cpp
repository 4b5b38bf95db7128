#include "zbsim/harness/scenario_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "zbsim/default_scenario_text.hpp"

namespace zbsim {

namespace {

struct Unit {
  std::string_view name;
  double scale;
};

constexpr Unit kDb[] = {{"dB", 1.0}};
constexpr Unit kDbm[] = {{"dBm", 1.0}};
constexpr Unit kMeters[] = {{"m", 1.0}};
constexpr Unit kTime[] = {{"us", 1.0}, {"ms", 1e3}, {"s", 1e6}};
constexpr Unit kCurrent[] = {{"mA", 1.0}, {"uA", 1e-3}};
constexpr Unit kVolts[] = {{"V", 1.0}};
constexpr Unit kBytes[] = {{"B", 1.0}};
constexpr Unit kSlope[] = {{"mA/dB", 1.0}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

/// Location of the entry being parsed, for diagnostics.
struct Where {
  int line;
  std::string key;

  [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(line, key, msg); }
};

double parse_double(std::string_view s, const Where& w) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    w.fail(fmt::format("'{}' is not a number", s));
  }
  return v;
}

std::int64_t parse_int(std::string_view s, const Where& w) {
  std::int64_t v = 0;
  int base = 10;
  std::string_view digits = s;
  if (digits.starts_with("0x") || digits.starts_with("0X")) {
    base = 16;
    digits.remove_prefix(2);
  }
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
    w.fail(fmt::format("'{}' is not an integer", s));
  }
  return v;
}

template <std::size_t N>
std::string unit_list(const Unit (&units)[N]) {
  std::string out;
  for (const auto& u : units) {
    if (!out.empty()) out += ", ";
    out += u.name;
  }
  return out;
}

template <std::size_t N>
double parse_quantity(std::string_view text, const Unit (&units)[N], const Where& w) {
  text = trim(text);
  const auto split = text.find_first_not_of("0123456789+-.eE");
  std::string_view number = text.substr(0, split);
  std::string_view unit = split == std::string_view::npos ? std::string_view{} : trim(text.substr(split));
  if (number.empty()) w.fail(fmt::format("'{}' is not a number", text));
  if (unit.empty()) w.fail(fmt::format("missing unit in '{}' (expected {})", text, unit_list(units)));
  for (const auto& u : units) {
    if (unit == u.name) return parse_double(number, w) * u.scale;
  }
  w.fail(fmt::format("unit '{}' not accepted (expected {})", unit, unit_list(units)));
}

SimTime parse_time(std::string_view text, const Where& w) {
  const double us = parse_quantity(text, kTime, w);
  const double rounded = std::round(us);
  if (std::abs(us - rounded) > 1e-6) w.fail(fmt::format("'{}' is not a whole number of microseconds", trim(text)));
  return SimTime::micros(static_cast<std::int64_t>(rounded));
}

int parse_bounded_int(std::string_view s, const Where& w) {
  const auto v = parse_int(s, w);
  if (v < -1'000'000'000 || v > 1'000'000'000) w.fail("value out of range");
  return static_cast<int>(v);
}

bool parse_bool(std::string_view s, const Where& w) {
  if (s == "true" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "no" || s == "off") return false;
  w.fail(fmt::format("'{}' is not a boolean (true/false)", s));
}

Position parse_position(std::string_view s, const Where& w) {
  const auto parts = split_list(s);
  if (parts.size() != 2) w.fail("expected 'x m, y m'");
  return {parse_quantity(parts[0], kMeters, w), parse_quantity(parts[1], kMeters, w)};
}

Waypoint parse_waypoint(std::string_view s, const Where& w) {
  const auto parts = split_list(s);
  if (parts.size() != 3) w.fail("expected 'x m, y m, t s'");
  return {{parse_quantity(parts[0], kMeters, w), parse_quantity(parts[1], kMeters, w)}, parse_time(parts[2], w)};
}

std::vector<double> parse_dbm_list(std::string_view s, const Where& w) {
  std::vector<double> out;
  for (auto part : split_list(s)) out.push_back(parse_quantity(part, kDbm, w));
  return out;
}

struct PendingTrajectory {
  int line = 0;
  std::vector<Waypoint> waypoints;
};

Trajectory build_trajectory(const PendingTrajectory& p, const std::string& key) {
  try {
    return Trajectory(p.waypoints);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(p.line, key, e.what());
  }
}

class Parser {
public:
  ScenarioConfig run(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        open_section(line, line_no);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ScenarioError(line_no, section_, "expected 'key = value'");
      entry(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
    }
    finish();
    return std::move(cfg_);
  }

private:
  void open_section(std::string_view line, int line_no) {
    if (line.back() != ']') throw ScenarioError(line_no, std::string(line), "unterminated section header");
    const std::string_view name = trim(line.substr(1, line.size() - 2));
    node_ = nullptr;
    if (name.starts_with("node")) {
      const Where w{line_no, std::string(name)};
      const auto id_text = trim(name.substr(4));
      if (id_text.empty()) w.fail("node section needs an id, e.g. [node 3]");
      const auto id = parse_int(id_text, w);
      if (id < 0 || id >= kGlobal) w.fail("node id out of range");
      section_ = fmt::format("node {}", id);
      if (!node_sections_.insert(section_).second) w.fail("duplicate node section");
      cfg_.nodes.push_back(NodeConfig{});
      cfg_.nodes.back().id = static_cast<NodeId>(id);
      node_lines_.push_back(line_no);
      node_index_ = cfg_.nodes.size() - 1;
      node_ = &cfg_.nodes.back();
      return;
    }
    static const std::set<std::string_view> known = {"phy",     "csma", "energy", "trajectory", "traffic",
                                                     "handover", "tpc",  "run",    "sweep"};
    if (!known.contains(name)) throw ScenarioError(line_no, std::string(name), "unknown section");
    section_ = std::string(name);
    if (!sections_.insert(section_).second) throw ScenarioError(line_no, section_, "duplicate section");
  }

  void entry(std::string_view key, std::string_view value, int line_no) {
    if (section_.empty()) throw ScenarioError(line_no, std::string(key), "entry outside of any section");
    const Where w{line_no, section_ + "." + std::string(key)};
    if (value.empty()) w.fail("missing value");
    if (key != "waypoint" && !seen_.insert(w.key).second) w.fail("duplicate key");
    if (node_ != nullptr) {
      node_ = &cfg_.nodes[node_index_];
      node_entry(key, value, w);
      return;
    }
    if (section_ == "phy") return phy_entry(key, value, w);
    if (section_ == "csma") return csma_entry(key, value, w);
    if (section_ == "energy") return energy_entry(key, value, w);
    if (section_ == "trajectory") return trajectory_entry(key, value, w);
    if (section_ == "traffic") return traffic_entry(key, value, w);
    if (section_ == "handover") return handover_entry(key, value, w);
    if (section_ == "tpc") return tpc_entry(key, value, w);
    if (section_ == "run") return run_entry(key, value, w);
    if (section_ == "sweep") return sweep_entry(key, value, w);
  }

  [[noreturn]] static void unknown(const Where& w) { w.fail("unknown key"); }

  void phy_entry(std::string_view key, std::string_view v, const Where& w) {
    auto& p = cfg_.phy;
    if (key == "band") {
      auto b = band_from_string(v);
      if (!b) w.fail(fmt::format("unknown band '{}' (expected B2400, B915 or B868)", v));
      cfg_.band = *b;
    } else if (key == "channel") {
      cfg_.channel = parse_bounded_int(v, w);
    } else if (key == "beacon_order") {
      cfg_.beacon_order.value = parse_bounded_int(v, w);
    } else if (key == "pl0") {
      p.pl0_db = parse_quantity(v, kDb, w);
    } else if (key == "path_loss_exponent") {
      p.path_loss_exponent = parse_double(v, w);
    } else if (key == "rx_sensitivity") {
      p.rx_sensitivity_dbm = parse_quantity(v, kDbm, w);
    } else if (key == "antenna_gain") {
      p.antenna_gain_db = parse_quantity(v, kDb, w);
    } else if (key == "tx_power") {
      p.tx_power_dbm = parse_quantity(v, kDbm, w);
    } else if (key == "phy_overhead") {
      p.phy_overhead_bytes = static_cast<int>(parse_quantity(v, kBytes, w));
    } else if (key == "lq_saturation_margin") {
      p.lq_saturation_margin_db = parse_quantity(v, kDb, w);
    } else if (key == "power_levels") {
      cfg_.power_levels = parse_dbm_list(v, w);
    } else {
      unknown(w);
    }
  }

  void csma_entry(std::string_view key, std::string_view v, const Where& w) {
    auto& c = cfg_.csma;
    if (key == "mac_min_be") {
      c.mac_min_be = parse_bounded_int(v, w);
    } else if (key == "mac_max_be") {
      c.mac_max_be = parse_bounded_int(v, w);
    } else if (key == "max_csma_backoffs") {
      c.max_csma_backoffs = parse_bounded_int(v, w);
    } else if (key == "max_frame_retries") {
      c.max_frame_retries = parse_bounded_int(v, w);
    } else if (key == "unit_backoff") {
      c.unit_backoff = parse_time(v, w);
    } else if (key == "ack_wait") {
      c.ack_wait = parse_time(v, w);
    } else if (key == "turnaround") {
      c.turnaround = parse_time(v, w);
    } else if (key == "pan_id") {
      const auto id = parse_int(v, w);
      if (id < 0 || id > 0xFFFF) w.fail("pan_id must fit in 16 bits");
      cfg_.pan_id = static_cast<std::uint16_t>(id);
    } else {
      unknown(w);
    }
  }

  void energy_entry(std::string_view key, std::string_view v, const Where& w) {
    auto& m = cfg_.currents;
    if (key == "tx_current_0dbm") {
      m.tx_current_0dbm_ma = parse_quantity(v, kCurrent, w);
    } else if (key == "tx_current_slope") {
      m.tx_current_slope_ma_per_db = parse_quantity(v, kSlope, w);
    } else if (key == "rx_current") {
      m.rx_current_ma = parse_quantity(v, kCurrent, w);
    } else if (key == "idle_current") {
      m.idle_current_ma = parse_quantity(v, kCurrent, w);
    } else if (key == "sleep_current") {
      m.sleep_current_ma = parse_quantity(v, kCurrent, w);
    } else if (key == "supply_voltage") {
      cfg_.supply_voltage = parse_quantity(v, kVolts, w);
    } else {
      unknown(w);
    }
  }

  void trajectory_entry(std::string_view key, std::string_view v, const Where& w) {
    if (key == "waypoint") {
      if (trajectory_.waypoints.empty()) trajectory_.line = w.line;
      trajectory_.waypoints.push_back(parse_waypoint(v, w));
    } else if (key == "move_tick") {
      cfg_.move_tick = parse_time(v, w);
    } else if (key == "mobile_sleep") {
      cfg_.mobile_sleep = parse_bool(v, w);
    } else {
      unknown(w);
    }
  }

  void traffic_entry(std::string_view key, std::string_view v, const Where& w) {
    auto& t = cfg_.traffic;
    if (key == "period") {
      t.period = parse_time(v, w);
    } else if (key == "payload") {
      t.payload_bytes = static_cast<int>(parse_quantity(v, kBytes, w));
    } else if (key == "start_offset") {
      t.start_offset = parse_time(v, w);
    } else if (key == "pending_limit") {
      t.pending_limit = parse_bounded_int(v, w);
    } else {
      unknown(w);
    }
  }

  void handover_entry(std::string_view key, std::string_view v, const Where& w) {
    auto& h = cfg_.handover;
    if (key == "mode") {
      if (v == "broadcast") {
        h.mode = HandoverMode::Broadcast;
      } else if (v == "scan") {
        h.mode = HandoverMode::Scan;
      } else {
        w.fail(fmt::format("unknown mode '{}' (expected broadcast or scan)", v));
      }
    } else if (key == "probe_window") {
      h.probe_window = parse_time(v, w);
    } else if (key == "probe_retry") {
      h.probe_retry = parse_time(v, w);
    } else if (key == "assoc_timeout") {
      h.assoc_timeout = parse_time(v, w);
    } else if (key == "scan_response_timeout") {
      h.scan_response_timeout = parse_time(v, w);
    } else if (key == "response_jitter") {
      h.response_jitter = parse_time(v, w);
    } else if (key == "ack_failure_threshold") {
      h.ack_failure_threshold = parse_bounded_int(v, w);
    } else {
      unknown(w);
    }
  }

  void tpc_entry(std::string_view key, std::string_view v, const Where& w) {
    auto& t = cfg_.tpc;
    if (key == "enabled") {
      t.enabled = parse_bool(v, w);
    } else if (key == "lq_target") {
      t.lq_target = parse_bounded_int(v, w);
    } else if (key == "lq_hysteresis") {
      t.lq_hysteresis = parse_bounded_int(v, w);
    } else if (key == "window") {
      t.window = parse_time(v, w);
    } else {
      unknown(w);
    }
  }

  void run_entry(std::string_view key, std::string_view v, const Where& w) {
    if (key == "duration") {
      cfg_.duration = parse_time(v, w);
    } else if (key == "seed") {
      const auto s = parse_int(v, w);
      if (s < 0) w.fail("seed must be non-negative");
      cfg_.seed = static_cast<std::uint64_t>(s);
    } else {
      unknown(w);
    }
  }

  void sweep_entry(std::string_view key, std::string_view v, const Where& w) {
    if (key == "powers") {
      cfg_.sweep_powers = parse_dbm_list(v, w);
    } else {
      unknown(w);
    }
  }

  void node_entry(std::string_view key, std::string_view v, const Where& w) {
    NodeConfig& n = *node_;
    if (key == "role") {
      auto kind = device_kind_from_string(v);
      if (!kind) w.fail(fmt::format("unknown role '{}' (expected coordinator, router or end_device)", v));
      n.role.kind = *kind;
      roles_.insert(section_);
    } else if (key == "mobility") {
      auto cls = node_class_from_string(v);
      if (!cls) w.fail(fmt::format("unknown mobility '{}' (expected stationary or mobile)", v));
      n.role.node_class = *cls;
    } else if (key == "position") {
      n.position = parse_position(v, w);
    } else if (key == "tx_power") {
      n.tx_power_dbm = parse_quantity(v, kDbm, w);
    } else if (key == "antenna_gain") {
      n.antenna_gain_db = parse_quantity(v, kDb, w);
    } else if (key == "rx_sensitivity") {
      n.rx_sensitivity_dbm = parse_quantity(v, kDbm, w);
    } else if (key == "beacon_offset") {
      n.beacon_offset = parse_time(v, w);
    } else if (key == "waypoint") {
      auto& p = node_trajectories_[node_index_];
      if (p.waypoints.empty()) p.line = w.line;
      p.waypoints.push_back(parse_waypoint(v, w));
    } else {
      unknown(w);
    }
  }

  void finish() {
    if (!trajectory_.waypoints.empty()) cfg_.trajectory = build_trajectory(trajectory_, "trajectory.waypoint");
    for (const auto& [index, pending] : node_trajectories_) {
      cfg_.nodes[index].trajectory = build_trajectory(pending, fmt::format("node {}.waypoint", cfg_.nodes[index].id));
    }
    for (std::size_t i = 0; i < cfg_.nodes.size(); ++i) {
      const std::string name = fmt::format("node {}", cfg_.nodes[i].id);
      if (!roles_.contains(name)) throw ScenarioError(node_lines_[i], name, "missing required key 'role'");
    }
    cfg_.validate();
  }

  ScenarioConfig cfg_;
  std::string section_;
  std::set<std::string> sections_;
  std::set<std::string> node_sections_;
  std::set<std::string> seen_;
  std::set<std::string> roles_;
  NodeConfig* node_ = nullptr;
  std::size_t node_index_ = 0;
  std::vector<int> node_lines_;
  PendingTrajectory trajectory_;
  std::map<std::size_t, PendingTrajectory> node_trajectories_;
};

// ------------------------------------------------------------------ writer

std::string time_text(SimTime t) {
  const auto us = t.us();
  if (us % 1'000'000 == 0) return fmt::format("{} s", us / 1'000'000);
  if (us != 0 && us % 1000 == 0) return fmt::format("{} ms", us / 1000);
  return fmt::format("{} us", us);
}

std::string dbm_list(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ", ";
    out += fmt::format("{} dBm", v);
  }
  return out;
}

std::string waypoint_text(const Waypoint& w) {
  return fmt::format("{} m, {} m, {}", w.position.x, w.position.y, time_text(w.arrival));
}

class Writer {
public:
  void section(std::string_view name) {
    if (!out_.empty()) out_ += '\n';
    out_ += fmt::format("[{}]\n", name);
  }
  void entry(std::string_view key, const std::string& value, std::string_view origin) {
    const std::string body = fmt::format("{} = {}", key, value);
    out_ += fmt::format("{:<38}  # origin: {}\n", body, origin);
  }
  void comment(std::string_view text) { out_ += fmt::format("# {}\n", text); }
  std::string take() { return std::move(out_); }

private:
  std::string out_;
};

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) { return Parser{}.run(text); }

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(0, path, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string_view default_scenario_text() { return detail::kDefaultScenarioText; }

ScenarioConfig default_scenario() { return parse_scenario(default_scenario_text()); }

std::string write_scenario(const ScenarioConfig& cfg, const ScenarioWriteOptions& options) {
  constexpr std::string_view kRef = "reference value";
  constexpr std::string_view kCal = "calibrated";
  constexpr std::string_view kStd = "802.15.4 default";
  constexpr std::string_view kAsm = "assumed";

  Writer w;
  w.comment("zbsim scenario");
  for (const auto& note : options.header_notes) w.comment(note);
  w.comment("origin tags: reference value = published figure, calibrated = fitted to the");
  w.comment("reference coverage gaps, 802.15.4 default = standard constant, assumed = chosen here");

  const auto& p = cfg.phy;
  w.section("phy");
  w.entry("band", std::string(to_string(cfg.band)), kRef);
  w.entry("channel", fmt::format("{}", cfg.channel), kAsm);
  w.entry("beacon_order", fmt::format("{}", cfg.beacon_order.value), kRef);
  w.entry("pl0", fmt::format("{} dB", p.pl0_db), kCal);
  w.entry("path_loss_exponent", fmt::format("{}", p.path_loss_exponent), kCal);
  w.entry("rx_sensitivity", fmt::format("{} dBm", p.rx_sensitivity_dbm), kCal);
  w.entry("antenna_gain", fmt::format("{} dB", p.antenna_gain_db), kAsm);
  w.entry("tx_power", fmt::format("{} dBm", p.tx_power_dbm), kRef);
  w.entry("phy_overhead", fmt::format("{} B", p.phy_overhead_bytes), kStd);
  w.entry("lq_saturation_margin", fmt::format("{} dB", p.lq_saturation_margin_db), kAsm);
  w.entry("power_levels", dbm_list(cfg.power_levels), "reference value, 2 dBm assumed");

  const auto& c = cfg.csma;
  w.section("csma");
  w.entry("mac_min_be", fmt::format("{}", c.mac_min_be), kStd);
  w.entry("mac_max_be", fmt::format("{}", c.mac_max_be), kStd);
  w.entry("max_csma_backoffs", fmt::format("{}", c.max_csma_backoffs), kStd);
  w.entry("max_frame_retries", fmt::format("{}", c.max_frame_retries), kStd);
  w.entry("unit_backoff", time_text(c.unit_backoff), kStd);
  w.entry("ack_wait", time_text(c.ack_wait), kStd);
  w.entry("turnaround", time_text(c.turnaround), kStd);
  w.entry("pan_id", fmt::format("0x{:04X}", cfg.pan_id), kAsm);

  const auto& m = cfg.currents;
  w.section("energy");
  w.entry("tx_current_0dbm", fmt::format("{} mA", m.tx_current_0dbm_ma), kRef);
  w.entry("tx_current_slope", fmt::format("{} mA/dB", m.tx_current_slope_ma_per_db), kAsm);
  w.entry("rx_current", fmt::format("{} mA", m.rx_current_ma), kAsm);
  w.entry("idle_current", fmt::format("{} mA", m.idle_current_ma), kAsm);
  w.entry("sleep_current", fmt::format("{} mA", m.sleep_current_ma), kRef);
  w.entry("supply_voltage", fmt::format("{} V", cfg.supply_voltage), kAsm);

  w.section("trajectory");
  for (const auto& wp : cfg.trajectory.waypoints()) w.entry("waypoint", waypoint_text(wp), "reference distance, assumed speed");
  w.entry("move_tick", time_text(cfg.move_tick), kAsm);
  w.entry("mobile_sleep", cfg.mobile_sleep ? "true" : "false", kAsm);

  const auto& t = cfg.traffic;
  w.section("traffic");
  w.entry("period", time_text(t.period), kAsm);
  w.entry("payload", fmt::format("{} B", t.payload_bytes), kAsm);
  w.entry("start_offset", time_text(t.start_offset), kAsm);
  w.entry("pending_limit", fmt::format("{}", t.pending_limit), kAsm);

  const auto& h = cfg.handover;
  w.section("handover");
  w.entry("mode", std::string(to_string(h.mode)), kRef);
  w.entry("probe_window", time_text(h.probe_window), kAsm);
  w.entry("probe_retry", time_text(h.probe_retry), kAsm);
  w.entry("assoc_timeout", time_text(h.assoc_timeout), kAsm);
  w.entry("scan_response_timeout", time_text(h.scan_response_timeout), kAsm);
  w.entry("response_jitter", time_text(h.response_jitter), kAsm);
  w.entry("ack_failure_threshold", fmt::format("{}", h.ack_failure_threshold), kAsm);

  w.section("tpc");
  w.entry("enabled", cfg.tpc.enabled ? "true" : "false", kAsm);
  w.entry("lq_target", fmt::format("{}", cfg.tpc.lq_target), kAsm);
  w.entry("lq_hysteresis", fmt::format("{}", cfg.tpc.lq_hysteresis), kAsm);
  w.entry("window", time_text(cfg.tpc.window), kAsm);

  w.section("run");
  w.entry("duration", time_text(cfg.duration), "reference distance at assumed speed");
  w.entry("seed", fmt::format("{}", cfg.seed), kAsm);

  w.section("sweep");
  w.entry("powers", dbm_list(cfg.sweep_powers), "reference value, 2 dBm assumed");

  for (const auto& n : cfg.nodes) {
    w.section(fmt::format("node {}", n.id));
    w.entry("role", std::string(to_string(n.role.kind)), kRef);
    w.entry("mobility", std::string(to_string(n.role.node_class)), kRef);
    const bool mobile = n.role.is_mobile();
    w.entry("position", fmt::format("{} m, {} m", n.position.x, n.position.y), mobile ? kAsm : kCal);
    if (n.tx_power_dbm) w.entry("tx_power", fmt::format("{} dBm", *n.tx_power_dbm), kAsm);
    if (n.antenna_gain_db) w.entry("antenna_gain", fmt::format("{} dB", *n.antenna_gain_db), kAsm);
    if (n.rx_sensitivity_dbm) w.entry("rx_sensitivity", fmt::format("{} dBm", *n.rx_sensitivity_dbm), kAsm);
    if (n.beacon_offset != SimTime{}) w.entry("beacon_offset", time_text(n.beacon_offset), kAsm);
    if (n.trajectory) {
      for (const auto& wp : n.trajectory->waypoints()) w.entry("waypoint", waypoint_text(wp), kAsm);
    }
  }
  return w.take();
}

}  // namespace zbsim
