#include "zbsim/harness/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "zbsim/phy/phy.hpp"

namespace zbsim {

namespace {

struct BinEvidence {
  bool failure = false;
  bool success = false;
};

NodeId infer_mobile(const std::vector<TraceRecord>& trace, std::optional<NodeId> mobile) {
  if (mobile) return *mobile;
  for (const auto& r : trace) {
    if (r.kind == TraceKind::Move) return r.node_id;
  }
  throw GapAnalysisError("trace has no MOVE rows; name the mobile node explicitly");
}

bool handover_succeeded(const std::string& outcome) { return outcome == "Associated"; }

double clip(double x, double lo, double hi) { return std::clamp(x, lo, hi); }

/// Turns per-bin flags into intervals: a run starts at a flagged bin and
/// ends at the next present bin that is not flagged. Absent bins are
/// transparent.
std::vector<Interval> runs(const std::map<long, bool>& flagged, double min_x, double max_x) {
  std::vector<Interval> out;
  std::optional<long> open;
  for (const auto& [bin, flag] : flagged) {
    if (flag && !open) open = bin;
    if (!flag && open) {
      out.push_back({clip(*open * kBinWidth, min_x, max_x), clip(bin * kBinWidth, min_x, max_x)});
      open.reset();
    }
  }
  if (open) out.push_back({clip(*open * kBinWidth, min_x, max_x), max_x});
  std::erase_if(out, [](const Interval& i) { return i.end_m <= i.start_m; });
  return out;
}

}  // namespace

long bin_of(double x_m) { return std::lround(x_m / kBinWidth); }

std::vector<Interval> gap_analysis(const std::vector<TraceRecord>& trace, double min_x, double max_x,
                                   std::optional<NodeId> mobile) {
  const NodeId id = infer_mobile(trace, mobile);
  std::map<long, BinEvidence> bins;
  for (const auto& r : trace) {
    if (r.node_id != id) continue;
    bool failure = false;
    bool success = false;
    switch (r.kind) {
      case TraceKind::MacDone:
        if (r.frame_kind != FrameKind::Data) break;
        success = r.outcome == "Delivered";
        failure = r.outcome == "NoAck" || r.outcome == "ChannelAccessFailure";
        break;
      case TraceKind::DataDrop:
        failure = r.outcome == "OutageLoss";
        break;
      case TraceKind::HandoverDone:
        success = handover_succeeded(r.outcome);
        failure = !success;
        break;
      default:
        break;
    }
    if (!failure && !success) continue;
    if (!r.pos_x_m) {
      throw GapAnalysisError(fmt::format("row at {} us for node {} has no position", r.time_us, id));
    }
    auto& b = bins[bin_of(*r.pos_x_m)];
    b.failure = b.failure || failure;
    b.success = b.success || success;
  }
  std::map<long, bool> flagged;
  for (const auto& [bin, ev] : bins) flagged[bin] = ev.failure && !ev.success;
  return runs(flagged, min_x, max_x);
}

std::vector<AssociationSegment> association_map(const std::vector<TraceRecord>& trace, double min_x,
                                                double max_x, std::optional<NodeId> mobile) {
  const NodeId id = infer_mobile(trace, mobile);
  std::vector<AssociationSegment> out{{{min_x, max_x}, std::nullopt}};
  for (const auto& r : trace) {
    if (r.node_id != id || r.kind != TraceKind::HandoverDone || !r.pos_x_m) continue;
    std::optional<NodeId> parent;
    if (handover_succeeded(r.outcome) && r.dst) parent = *r.dst;
    if (parent == out.back().parent) continue;
    const double at = clip(bin_of(*r.pos_x_m) * kBinWidth, min_x, max_x);
    out.back().span.end_m = at;
    out.push_back({{at, max_x}, parent});
  }
  std::erase_if(out, [](const AssociationSegment& s) { return s.span.end_m <= s.span.start_m; });
  // Dropping empty segments can leave equal neighbours behind.
  std::vector<AssociationSegment> merged;
  for (const auto& s : out) {
    if (!merged.empty() && merged.back().parent == s.parent) {
      merged.back().span.end_m = s.span.end_m;
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

std::vector<NodeId> reachable_parents(const ScenarioConfig& cfg, const NodeConfig& mobile, Position where,
                                      double power_dbm) {
  const PhyParams mphy = cfg.node_phy(mobile);
  const RadioEndpoint m{where, &mphy};
  std::vector<NodeId> out;
  for (const NodeConfig* n : cfg.stationary_parents()) {
    const PhyParams nphy = cfg.node_phy(*n);
    const RadioEndpoint s{n->position, &nphy};
    if (in_range(m, s, power_dbm) && in_range(s, m, power_dbm)) out.push_back(n->id);
  }
  return out;
}

StaticCoverage static_coverage(const ScenarioConfig& cfg, double power_dbm) {
  const auto mobiles = cfg.mobiles();
  if (mobiles.empty()) throw std::invalid_argument("scenario has no mobile node");
  const NodeConfig& mobile = *mobiles.front();
  const Trajectory& path = cfg.trajectory_of(mobile);
  const SimTime last = std::min(path.end_time(), cfg.duration - SimTime::micros(1));

  std::map<long, bool> gap_bins;
  std::map<long, bool> overlap_bins;
  for (SimTime t; t <= last; t += cfg.move_tick) {
    const Position p = path.position_at(t);
    const auto n = reachable_parents(cfg, mobile, p, power_dbm).size();
    const long bin = bin_of(p.x);
    auto [g, g_new] = gap_bins.try_emplace(bin, n == 0);
    if (!g_new) g->second = g->second && n == 0;
    auto [o, o_new] = overlap_bins.try_emplace(bin, n >= 2);
    if (!o_new) o->second = o->second || n >= 2;
  }
  return {runs(gap_bins, path.min_x(), path.max_x()), runs(overlap_bins, path.min_x(), path.max_x())};
}

bool intervals_contained(const std::vector<Interval>& inner, const std::vector<Interval>& outer) {
  for (const auto& i : inner) {
    for (long b = bin_of(i.start_m); b < bin_of(i.end_m); ++b) {
      const double center = (static_cast<double>(b) + 0.5) * kBinWidth;
      const bool covered = std::any_of(outer.begin(), outer.end(), [center](const Interval& o) {
        return center >= o.start_m && center < o.end_m;
      });
      if (!covered) return false;
    }
  }
  return true;
}

std::string format_intervals(const std::vector<Interval>& intervals) {
  if (intervals.empty()) return "none";
  std::string out;
  for (const auto& i : intervals) {
    if (!out.empty()) out += ' ';
    out += fmt::format("[{:.2f}, {:.2f})", i.start_m, i.end_m);
  }
  return out;
}

}  // namespace zbsim
