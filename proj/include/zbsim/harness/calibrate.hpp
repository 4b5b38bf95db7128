#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zbsim/harness/coverage.hpp"
#include "zbsim/scenario/config.hpp"

namespace zbsim {

struct CalibrationTargets {
  double gap_power_dbm = 0.0;
  std::vector<Interval> gaps = {{2.0, 4.0}, {11.0, 13.0}};
  /// Lowest level that must be gap-free; every configured level below it
  /// must still show a gap.
  double gap_free_power_dbm = 4.0;
  /// Levels that must show overlapping coverage. The gap-free level itself
  /// must not, unless it is listed here.
  std::vector<double> overlap_powers = {5.0, 6.0};
  double tolerance_m = 0.5;
  /// Minimum distance between any tick position and any coverage edge, so
  /// that rounding cannot flip a result.
  double margin_m = 0.005;
};

struct CalibrationGrid {
  double n_min = 1.5, n_max = 6.0, n_step = 0.1;
  double pl0_min = 30, pl0_max = 70;            // dB, 1 dB steps
  double sens_min = -100, sens_max = -70;       // dBm, 1 dB steps
  double pos_min = -3.0, pos_max = 18.0, pos_step = 0.5;
  /// Sensitivity preferred when several (pl0, sensitivity) pairs give the
  /// same link budget.
  double preferred_sensitivity_dbm = -85.0;
};

struct LevelCoverage {
  double power_dbm = 0.0;
  std::vector<Interval> continuous_gaps;
  std::vector<Interval> tick_gaps;
  std::vector<Interval> tick_overlaps;
};

struct CalibrationResult {
  bool feasible = false;
  /// The supplied parameters already met every target.
  bool unchanged = false;
  PhyParams phy;
  /// Stationary parent positions, by node id.
  std::vector<std::pair<NodeId, Position>> positions;
  double max_error_m = 0.0;
  double sum_error_m = 0.0;
  std::vector<LevelCoverage> levels;
  std::uint64_t candidates = 0;
  std::string reason;
};

/// Exhaustive search over the grid for propagation constants and
/// stationary x-positions that reproduce the targets under the static
/// range model. Among admissible candidates the smallest worst-case
/// boundary error wins, then the smallest total error, then the
/// sensitivity closest to the preferred value.
CalibrationResult calibrate(const ScenarioConfig& base, const CalibrationTargets& targets = {},
                            const CalibrationGrid& grid = {});

/// Copy of `base` with the calibrated constants and positions applied.
ScenarioConfig apply_calibration(ScenarioConfig base, const CalibrationResult& result);

/// Continuous gaps along the mobile's path (assumed parallel to the x axis),
/// every node at `power_dbm`, ranges widened by `slack_m`.
std::vector<Interval> continuous_gaps(const ScenarioConfig& cfg, double power_dbm, double slack_m = 0.0);

/// Distance at which a link between two nodes with these parameters reaches
/// the sensitivity (the strict in-range limit).
double nominal_range_m(const PhyParams& phy, double power_dbm);

std::string calibration_report(const CalibrationResult& result, const CalibrationTargets& targets);

}  // namespace zbsim
