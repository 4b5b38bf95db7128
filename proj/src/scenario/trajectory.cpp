#include "zbsim/scenario/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace zbsim {

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw std::invalid_argument("trajectory needs at least one waypoint");
  if (waypoints_.front().arrival < SimTime{}) {
    throw std::invalid_argument("trajectory arrival offsets must be non-negative");
  }
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (waypoints_[i].arrival <= waypoints_[i - 1].arrival) {
      throw std::invalid_argument("trajectory arrival offsets must strictly increase");
    }
  }
}

Trajectory Trajectory::default_line() {
  return Trajectory({{{0.0, 0.0}, SimTime{}}, {{15.0, 0.0}, SimTime::seconds(15)}});
}

Position Trajectory::position_at(SimTime t) const {
  if (waypoints_.empty()) return {};
  if (t <= waypoints_.front().arrival) return waypoints_.front().position;
  if (t >= waypoints_.back().arrival) return waypoints_.back().position;
  auto next = std::upper_bound(waypoints_.begin(), waypoints_.end(), t,
                               [](SimTime v, const Waypoint& w) { return v < w.arrival; });
  const Waypoint& b = *next;
  const Waypoint& a = *(next - 1);
  const double span = static_cast<double>((b.arrival - a.arrival).us());
  const double done = static_cast<double>((t - a.arrival).us());
  return {a.position.x + (b.position.x - a.position.x) * done / span,
          a.position.y + (b.position.y - a.position.y) * done / span};
}

SimTime Trajectory::end_time() const { return waypoints_.empty() ? SimTime{} : waypoints_.back().arrival; }

double Trajectory::min_x() const {
  double m = waypoints_.empty() ? 0.0 : waypoints_.front().position.x;
  for (const auto& w : waypoints_) m = std::min(m, w.position.x);
  return m;
}

double Trajectory::max_x() const {
  double m = waypoints_.empty() ? 0.0 : waypoints_.front().position.x;
  for (const auto& w : waypoints_) m = std::max(m, w.position.x);
  return m;
}

}  // namespace zbsim
