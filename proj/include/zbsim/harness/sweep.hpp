#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zbsim/harness/coverage.hpp"
#include "zbsim/harness/simulation.hpp"
#include "zbsim/scenario/config.hpp"

namespace zbsim {

struct LevelReport {
  double power_dbm = 0.0;
  /// From the run's trace.
  std::vector<Interval> gaps;
  std::vector<AssociationSegment> associations;
  /// Static evaluation at the mobile's tick positions.
  std::vector<Interval> overlaps;
  TrafficStats traffic;
  std::uint64_t handover_attempts = 0;
  bool optimal = false;
  bool overprovisioned = false;
};

struct CoverageReport {
  std::uint64_t seed = 0;
  std::vector<LevelReport> levels;
  /// Lowest swept level whose gap set is empty.
  std::optional<double> optimal_power_dbm;
  /// Gap sets shrink (set inclusion at 0.1 m) as power increases.
  bool monotone = true;
};

/// One run per power level, all on the same seed, each with every node at
/// that level and TPC off. Throws std::invalid_argument for an empty list
/// or a level outside cfg.power_levels. Runs may execute concurrently.
CoverageReport run_sweep(const ScenarioConfig& cfg, std::span<const double> powers, std::uint64_t seed,
                         bool parallel = true);

/// Per-level summary table with OPTIMAL / OVERPROVISIONED markers.
std::string sweep_summary_text(const CoverageReport& report);
/// gnuplot-friendly rows: power_dbm,kind,start_m,end_m.
std::string sweep_intervals_csv(const CoverageReport& report);

}  // namespace zbsim
