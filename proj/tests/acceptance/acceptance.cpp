// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "zbsim/engine/rng.hpp"
#include "zbsim/harness/calibrate.hpp"
#include "zbsim/harness/compare.hpp"
#include "zbsim/harness/coverage.hpp"
#include "zbsim/harness/scenario_file.hpp"
#include "zbsim/harness/simulation.hpp"
#include "zbsim/harness/sweep.hpp"
#include "zbsim/harness/trace_csv.hpp"
#include "zbsim/mac/channel.hpp"
#include "zbsim/mac/mac.hpp"
#include "zbsim/phy/phy.hpp"
#include "zbsim/scenario/energy.hpp"

using namespace zbsim;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int g_failed = 0;

void report(int id, const std::string& title, const Check& c, Clock::time_point started) {
  const double secs = std::chrono::duration<double>(Clock::now() - started).count();
  const bool ok = c.failures.empty();
  if (!ok) ++g_failed;
  std::cout << fmt::format("{} criterion {}: {} ({:.2f} s)\n", ok ? "PASS" : "FAIL", id, title, secs);
  const std::size_t shown = std::min<std::size_t>(c.failures.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) std::cout << "    " << c.failures[i] << "\n";
  if (c.failures.size() > shown) std::cout << fmt::format("    ... {} more\n", c.failures.size() - shown);
  std::cout.flush();
}

void run_criterion(int id, const std::string& title, const std::function<void(Check&)>& body) {
  const auto started = Clock::now();
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(fmt::format("exception: {}", e.what()));
  }
  report(id, title, c, started);
}

const std::vector<Interval> kTargetGaps{{2.0, 4.0}, {11.0, 13.0}};
const std::vector<double> kLevels{0, 2, 3, 4, 5, 6};

// Scenario with the default topology but uncalibrated propagation constants.
ScenarioConfig uncalibrated() {
  ScenarioConfig cfg = default_scenario();
  cfg.phy.pl0_db = 40;
  cfg.phy.path_loss_exponent = 2.0;
  cfg.phy.rx_sensitivity_dbm = -90;
  double x = 0;
  for (auto& n : cfg.nodes) {
    if (n.role.is_mobile()) continue;
    n.position = {x, 0};
    x += 5;
  }
  return cfg;
}

// Independent brute-force coverage: step along the path at 0.01 m and ask
// the link budget whether any parent is reachable both ways.
struct Sampled {
  std::vector<Interval> gaps;
  std::vector<Interval> overlaps;
};

Sampled sample_coverage(const ScenarioConfig& cfg, double power) {
  const NodeConfig* mobile = cfg.mobiles().front();
  const Trajectory& path = cfg.trajectory_of(*mobile);
  const PhyParams mphy = cfg.node_phy(*mobile);
  Sampled out;
  std::optional<double> gap_start, overlap_start;
  const long steps = std::lround((path.max_x() - path.min_x()) / 0.01);
  for (long i = 0; i <= steps; ++i) {
    const double x = path.min_x() + i * 0.01;
    int reachable = 0;
    for (const NodeConfig* p : cfg.stationary_parents()) {
      const PhyParams pphy = cfg.node_phy(*p);
      const RadioEndpoint m{{x, 0}, &mphy};
      const RadioEndpoint s{p->position, &pphy};
      if (in_range(m, s, power) && in_range(s, m, power)) ++reachable;
    }
    if (reachable == 0 && !gap_start) gap_start = x;
    if (reachable > 0 && gap_start) {
      out.gaps.push_back({*gap_start, x});
      gap_start.reset();
    }
    if (reachable >= 2 && !overlap_start) overlap_start = x;
    if (reachable < 2 && overlap_start) {
      out.overlaps.push_back({*overlap_start, x});
      overlap_start.reset();
    }
  }
  if (gap_start) out.gaps.push_back({*gap_start, path.max_x()});
  if (overlap_start) out.overlaps.push_back({*overlap_start, path.max_x()});
  return out;
}

bool boundaries_within(const std::vector<Interval>& a, const std::vector<Interval>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].start_m - b[i].start_m) > tol + 1e-9) return false;
    if (std::abs(a[i].end_m - b[i].end_m) > tol + 1e-9) return false;
  }
  return true;
}

// ---- criterion 6: randomized MAC scenarios --------------------------------

struct Station final : Mac::Upper {
  Station(NodeId id, Position pos, Scheduler& sched, Channel& channel, TraceLog& trace, const PhyParams& phy,
          std::uint64_t seed)
      : pos(pos), rng(seed, id), mac(id, sched, channel, rng, trace, CsmaParams{}, 0x1A2B, [this] { return this->pos.x; }) {
    mac.set_upper(this);
    channel.attach(id, phy, [this] { return this->pos; }, &mac, nullptr);
  }
  void on_mac_receive(const Frame&, const LinkSample&) override {}
  void on_mac_done(const Frame&, TxOutcome) override {}
  Position pos;
  RngStream rng;
  Mac mac;
};

struct MacStats {
  std::uint64_t transmissions = 0;
  std::uint64_t collisions = 0;
  std::uint64_t delivered_data = 0;
  std::uint64_t max_backoff_us = 0;
};

void mac_scenario(std::uint64_t seed, Check& c, MacStats& stats) {
  std::mt19937_64 gen(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };

  Scheduler sched;
  TraceLog trace;
  PhyParams phy;
  phy.pl0_db = 65;
  phy.path_loss_exponent = 3.8;
  phy.rx_sensitivity_dbm = -85;
  Channel channel(sched, Band::B2400, trace);
  channel.keep_history(true);

  const int n = pick(2, 5);
  std::vector<std::unique_ptr<Station>> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back(std::make_unique<Station>(static_cast<NodeId>(i), Position{uni(0, 12), uni(0, 3)}, sched,
                                              channel, trace, phy, seed));
  }
  const SimTime horizon = SimTime::millis(pick(100, 1000));
  const int offered = pick(5, 60);
  for (int k = 0; k < offered; ++k) {
    const auto src = static_cast<std::size_t>(pick(0, n - 1));
    const SimTime at = SimTime::micros(pick(0, static_cast<int>(horizon.us() * 8 / 10)));
    const int what = pick(0, 9);
    sched.schedule(at, EventKind::TxStart, static_cast<NodeId>(src), [&, src, what] {
      Station& s = *nodes[src];
      Frame f;
      if (what == 0) {
        f.kind = FrameKind::Beacon;
        f.dst = kBroadcast;
        s.mac.send_immediate(f);
        return;
      }
      if (what == 1) {
        f.kind = FrameKind::ProbeRequest;
        f.dst = kBroadcast;
      } else {
        f.kind = FrameKind::Data;
        auto dst = src;
        while (dst == src) dst = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n - 1)(gen));
        f.dst = static_cast<NodeId>(dst);
        f.payload_len = std::uniform_int_distribution<int>(0, 100)(gen);
      }
      s.mac.csma_send(f);
    });
  }
  sched.run_until(horizon);

  const auto& hist = channel.history();
  const std::string tag = fmt::format("seed {}", seed);

  // No capture: a frame reaching a receiver is destroyed there whenever any
  // other audible transmission overlaps it in time. Audibility is recomputed
  // from the geometry.
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const auto& a = hist[i];
    ++stats.transmissions;
    for (const auto& rx : a.receivers) {
      const double p = received_power(a.frame.tx_power_dbm, phy.antenna_gain_db, phy.antenna_gain_db,
                                      path_loss_db(distance(a.src_position, rx.position), phy));
      const bool audible = p > phy.rx_sensitivity_dbm;
      if (audible != rx.audible) c.expect(false, tag + ": audibility differs from the link budget");
      bool overlapped = false;
      for (std::size_t j = 0; j < hist.size() && audible; ++j) {
        if (j == i) continue;
        const auto& b = hist[j];
        if (b.start >= a.end || a.start >= b.end) continue;
        if (b.frame.src == rx.id) continue;  // own transmission: handled by eligibility
        for (const auto& rb : b.receivers) {
          if (rb.id == rx.id && rb.audible) overlapped = true;
        }
      }
      if (overlapped) {
        ++stats.collisions;
        if (rx.delivered) c.expect(false, tag + ": frame delivered despite an overlapping audible frame");
      }
      if (rx.delivered && !audible) c.expect(false, tag + ": inaudible frame delivered");
    }
  }

  // One acknowledgment per delivered unicast frame that asks for it, sent
  // exactly one turnaround after the frame ends, with matching seq. Acks
  // due after the horizon are never sent.
  std::multimap<std::pair<NodeId, std::int64_t>, const TransmissionRecord*> acks;
  for (const auto& t : hist) {
    if (t.frame.kind == FrameKind::Ack) acks.emplace(std::make_pair(t.frame.src, t.start.us()), &t);
  }
  std::size_t acks_expected = 0;
  for (const auto& t : hist) {
    if (!requires_ack(t.frame)) continue;
    for (const auto& rx : t.receivers) {
      if (rx.id != t.frame.dst || !rx.delivered) continue;
      if (t.end + SimTime::micros(192) > horizon) continue;
      ++acks_expected;
      if (t.frame.kind == FrameKind::Data) ++stats.delivered_data;
      const auto range = acks.equal_range({rx.id, (t.end + SimTime::micros(192)).us()});
      const auto count = std::distance(range.first, range.second);
      if (count != 1) {
        c.expect(false, fmt::format("{}: {} acks for delivered frame seq {}", tag, count, t.frame.seq));
        continue;
      }
      const Frame& ack = range.first->second->frame;
      if (ack.seq != t.frame.seq || ack.dst != t.frame.src) c.expect(false, tag + ": ack fields do not match");
    }
  }
  if (acks.size() != acks_expected) {
    c.expect(false, fmt::format("{}: {} acks sent for {} delivered frames", tag, acks.size(), acks_expected));
  }

  // Backoff bound and CSMA exemption.
  for (const auto& r : trace.rows()) {
    const bool exempt = r.frame_kind && is_csma_exempt(*r.frame_kind);
    if ((r.kind == TraceKind::Backoff || r.kind == TraceKind::Cca) && exempt) {
      c.expect(false, tag + ": beacon or ack went through CSMA");
    }
    if (r.kind == TraceKind::Backoff) {
      const auto us = static_cast<std::uint64_t>(std::stoll(r.outcome));
      stats.max_backoff_us = std::max(stats.max_backoff_us, us);
      if (us > 31 * 320) c.expect(false, fmt::format("{}: backoff {} us exceeds 31 units", tag, us));
      if (us % 320 != 0) c.expect(false, fmt::format("{}: backoff {} us is not whole units", tag, us));
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  ScenarioConfig calibrated;

  run_criterion(1, "channel frequencies and beacon intervals are exact", [](Check& c) {
    for (int ch = 11; ch <= 26; ++ch) {
      c.expect(channel_center_frequency(ch) == 2405.0 + 5.0 * (ch - 11), fmt::format("channel {}", ch));
    }
    const std::pair<Band, std::pair<std::int64_t, std::int64_t>> expected[] = {
        {Band::B2400, {15'360, 251'658'240}},
        {Band::B915, {24'000, 393'216'000}},
        {Band::B868, {48'000, 786'432'000}},
    };
    for (const auto& [band, ext] : expected) {
      c.expect(beacon_interval(BeaconOrder{0}, band)->us() == ext.first, fmt::format("{} bo 0", to_string(band)));
      c.expect(beacon_interval(BeaconOrder{14}, band)->us() == ext.second, fmt::format("{} bo 14", to_string(band)));
      c.expect(!beacon_interval(BeaconOrder{15}, band).has_value(), "bo 15 must disable beacons");
    }
  });

  run_criterion(2, "calibrate then sweep at 0 dBm reproduces gaps near 2-4 m and 11-13 m", [&](Check& c) {
    const ScenarioConfig start = uncalibrated();
    const CalibrationResult cal = calibrate(start);
    c.expect(cal.feasible, "calibration infeasible: " + cal.reason);
    calibrated = apply_calibration(start, cal);
    const std::vector<double> zero{0.0};
    const CoverageReport rep = run_sweep(calibrated, zero, calibrated.seed);
    const auto& gaps = rep.levels.at(0).gaps;
    std::cout << fmt::format("    0 dBm gaps: {}\n", format_intervals(gaps));
    c.expect(boundaries_within(gaps, kTargetGaps, 0.5), "gap boundaries off by more than 0.5 m: " + format_intervals(gaps));
  });

  run_criterion(3, "gaps shrink with power, 4 dBm is the optimal level, 5 and 6 dBm overlap", [&](Check& c) {
    const CoverageReport rep = run_sweep(calibrated, kLevels, calibrated.seed);
    for (std::size_t i = 1; i < rep.levels.size(); ++i) {
      c.expect(intervals_contained(rep.levels[i].gaps, rep.levels[i - 1].gaps),
               fmt::format("gaps at {} dBm are not inside those at {} dBm", rep.levels[i].power_dbm,
                           rep.levels[i - 1].power_dbm));
    }
    std::optional<double> first_clear;
    for (const auto& l : rep.levels) {
      std::cout << fmt::format("    {:.0f} dBm gaps {} overlaps {}\n", l.power_dbm, format_intervals(l.gaps),
                               format_intervals(l.overlaps));
      if (!first_clear && l.gaps.empty()) first_clear = l.power_dbm;
    }
    c.expect(first_clear == 4.0, "lowest gap-free level is not 4 dBm");
    c.expect(rep.optimal_power_dbm == 4.0, "report does not mark 4 dBm optimal");
    for (const auto& l : rep.levels) {
      if (l.power_dbm < 5) continue;
      c.expect(!l.overlaps.empty(), fmt::format("no overlap at {} dBm", l.power_dbm));
      c.expect(!sample_coverage(calibrated, l.power_dbm).overlaps.empty(),
               fmt::format("sampler finds no overlap at {} dBm", l.power_dbm));
      c.expect(l.overprovisioned, fmt::format("{} dBm not marked overprovisioned", l.power_dbm));
    }
  });

  run_criterion(4, "broadcast handover is faster and TPC+broadcast uses less mobile energy", [&](Check& c) {
    const CompareReport rep = run_compare(calibrated, calibrated.seed);
    std::cout << fmt::format("    latency {:.4f} s vs {:.4f} s (delta {:.4f} s); energy {:.3f} mJ vs {:.3f} mJ ({:.1f}%)\n",
                             rep.proposed().mean_latency_s, rep.baseline().mean_latency_s, rep.latency_delta_s,
                             rep.proposed().mobile_energy.total_mj, rep.baseline().mobile_energy.total_mj,
                             rep.energy_delta_percent);
    c.expect(rep.proposed().handover_completions > 0 && rep.baseline().handover_completions > 0,
             "an arm completed no handover");
    c.expect(rep.latency_improved(), "broadcast latency is not below scan latency");
    c.expect(rep.energy_improved(), "TPC+broadcast energy is not below fixed+scan energy");
  });

  run_criterion(5, "trace-derived gaps agree with a 0.01 m brute-force sampler within 0.1 m", [&](Check& c) {
    for (std::uint64_t seed : {calibrated.seed, std::uint64_t{7}, std::uint64_t{1234}}) {
      const CoverageReport rep = run_sweep(calibrated, kLevels, seed);
      for (const auto& l : rep.levels) {
        const Sampled s = sample_coverage(calibrated, l.power_dbm);
        c.expect(boundaries_within(l.gaps, s.gaps, 0.1),
                 fmt::format("seed {} at {} dBm: trace {} vs sampler {}", seed, l.power_dbm,
                             format_intervals(l.gaps), format_intervals(s.gaps)));
      }
    }
  });

  run_criterion(6, "MAC invariants hold over 1000 randomized scenarios", [](Check& c) {
    MacStats stats;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) mac_scenario(seed, c, stats);
    std::cout << fmt::format("    {} transmissions, {} overlapped receptions, {} delivered data frames, max backoff {} us\n",
                             stats.transmissions, stats.collisions, stats.delivered_data, stats.max_backoff_us);
    c.expect(stats.collisions > 0, "no collisions exercised");
    c.expect(stats.delivered_data > 0, "no deliveries exercised");
  });

  run_criterion(7, "traces are byte-identical across runs and match the golden file", [](Check& c) {
    const ScenarioConfig tiny = load_scenario(std::string(ZBSIM_GOLDEN_DIR) + "/tiny.scenario");
    const std::string a = trace_csv(run_simulation(tiny, tiny.seed).trace);
    const std::string b = trace_csv(run_simulation(tiny, tiny.seed).trace);
    c.expect(a == b, "two runs differ");
    c.expect(a == read_file(std::string(ZBSIM_GOLDEN_DIR) + "/tiny_trace.csv"), "trace differs from golden file");
    const ScenarioConfig def = default_scenario();
    c.expect(trace_csv(run_simulation(def, 42).trace) == trace_csv(run_simulation(def, 42).trace),
             "default scenario runs differ");
  });

  run_criterion(8, "mode times sum to the run length and 1 s of 0 dBm Tx at 3 V is 90 mJ", [&](Check& c) {
    for (const ScenarioConfig& cfg : {default_scenario(), calibrated}) {
      for (const ScenarioConfig& arm : {arm_config(cfg, HandoverMode::Broadcast, true), arm_config(cfg, HandoverMode::Scan, false)}) {
        const RunResult res = run_simulation(arm, 42);
        for (const auto& n : res.nodes) {
          std::int64_t sum = 0;
          for (SimTime t : n.mode_time) sum += t.us();
          c.expect(sum == res.duration.us(), fmt::format("node {}: {} us of {} us", n.id, sum, res.duration.us()));
        }
      }
    }
    EnergyLedger l(CurrentModel{}, 3.0, SimTime{}, RadioMode::Tx, 0.0);
    l.close(SimTime::seconds(1));
    c.expect(fmt::format("{:.3f}", l.total_mj()) == "90.000", fmt::format("got {:.6f} mJ", l.total_mj()));
  });

  std::cout << fmt::format("{} of 8 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
