#pragma once

#include <vector>

#include "zbsim/engine/sim_time.hpp"
#include "zbsim/phy/phy.hpp"

namespace zbsim {

struct Waypoint {
  Position position;
  SimTime arrival;

  bool operator==(const Waypoint&) const = default;
};

/// Piecewise-linear path with constant speed between waypoints.
class Trajectory {
public:
  Trajectory() = default;
  /// Throws std::invalid_argument unless arrival offsets strictly increase
  /// (a single waypoint is a stationary path).
  explicit Trajectory(std::vector<Waypoint> waypoints);

  /// Straight line from x = 0 to x = 15 m on y = 0 at 1 m/s.
  static Trajectory default_line();

  Position position_at(SimTime t) const;

  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  SimTime end_time() const;
  /// Smallest and largest x visited.
  double min_x() const;
  double max_x() const;

  bool operator==(const Trajectory&) const = default;

private:
  std::vector<Waypoint> waypoints_;
};

}  // namespace zbsim
