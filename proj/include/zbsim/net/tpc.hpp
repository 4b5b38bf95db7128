#pragma once

#include <optional>
#include <span>

#include "zbsim/engine/sim_time.hpp"
#include "zbsim/phy/phy.hpp"

namespace zbsim {

struct TpcState {
  double current_power_dbm = 0.0;
  int lq_target = 64;
  int lq_hysteresis = 16;
};

/// LQ the peer would measure if we sent at `level_dbm`, assuming the link is
/// symmetric and path loss does not depend on power.
int predicted_lq(const LinkSample& observed, double level_dbm, const PhyParams& phy);

/// Link-quality-driven power selection.
///
/// Uses the newest sample from `parent` no older than `window`. Picks the
/// lowest level whose predicted LQ reaches the target (the highest level if
/// none does). Power only goes down when the lower level keeps a margin of
/// lq_hysteresis above the target; otherwise the current level is held.
/// Without a usable sample the current level is returned unchanged.
double tpc_update(const TpcState& state, std::span<const LinkSample> samples, NodeId parent,
                  std::span<const double> levels, const PhyParams& phy, SimTime now, SimTime window);

}  // namespace zbsim
