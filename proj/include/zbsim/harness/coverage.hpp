#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zbsim/scenario/config.hpp"
#include "zbsim/trace.hpp"

namespace zbsim {

/// Half-open x-interval [start_m, end_m) on the trajectory.
struct Interval {
  double start_m = 0.0;
  double end_m = 0.0;

  double length() const { return end_m - start_m; }
  bool operator==(const Interval&) const = default;
};

/// Resolution of every position-based report.
inline constexpr double kBinWidth = 0.1;

/// Bin index of a position (positions are rounded to the nearest bin).
long bin_of(double x_m);

class GapAnalysisError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Coverage gaps seen by the mobile node in a trace.
///
/// The mobile's rows are grouped into 0.1 m bins by position. A bin is
/// failing when it holds at least one failed attempt (a data frame that was
/// not acknowledged, a data frame dropped for lack of a parent, a handover
/// that ended without a parent) and no successful one (an acknowledged data
/// frame, a handover that ended with a parent). Failing bins separated only
/// by bins without attempts are merged. Each gap runs from its first failing
/// bin to the first bin with a success after it, clipped to [min_x, max_x].
///
/// `mobile` defaults to the node emitting MOVE rows. Rows of the mobile
/// without a position raise GapAnalysisError.
std::vector<Interval> gap_analysis(const std::vector<TraceRecord>& trace, double min_x, double max_x,
                                   std::optional<NodeId> mobile = std::nullopt);

/// Which stationary node served the mobile along the trajectory. A segment
/// without a parent has `parent` unset.
struct AssociationSegment {
  Interval span;
  std::optional<NodeId> parent;
  bool operator==(const AssociationSegment&) const = default;
};

std::vector<AssociationSegment> association_map(const std::vector<TraceRecord>& trace, double min_x,
                                                double max_x, std::optional<NodeId> mobile = std::nullopt);

/// Stationary parents that have a usable link to a mobile at `where`, both
/// directions in range, every node transmitting at `power_dbm`.
std::vector<NodeId> reachable_parents(const ScenarioConfig& cfg, const NodeConfig& mobile, Position where,
                                      double power_dbm);

/// Static (MAC-free) evaluation of the mobile's trajectory at its move-tick
/// positions. Intervals use the same bin convention as gap_analysis.
struct StaticCoverage {
  std::vector<Interval> gaps;
  /// Stretches where at least two parents are reachable at once.
  std::vector<Interval> overlaps;
};

StaticCoverage static_coverage(const ScenarioConfig& cfg, double power_dbm);

/// True when every 0.1 m bin covered by `inner` is also covered by `outer`.
bool intervals_contained(const std::vector<Interval>& inner, const std::vector<Interval>& outer);

std::string format_intervals(const std::vector<Interval>& intervals);

}  // namespace zbsim
