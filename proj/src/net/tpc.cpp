#include "zbsim/net/tpc.hpp"

#include <algorithm>
#include <vector>

namespace zbsim {

int predicted_lq(const LinkSample& observed, double level_dbm, const PhyParams& phy) {
  return lq_from_rx_power(observed.rx_power_dbm + (level_dbm - observed.tx_power_dbm), phy);
}

double tpc_update(const TpcState& state, std::span<const LinkSample> samples, NodeId parent,
                  std::span<const double> levels, const PhyParams& phy, SimTime now, SimTime window) {
  if (levels.empty()) return state.current_power_dbm;
  const LinkSample* latest = nullptr;
  for (const auto& s : samples) {
    if (s.from != parent || s.time > now || now - s.time > window) continue;
    if (latest == nullptr || s.time >= latest->time) latest = &s;
  }
  if (latest == nullptr) return state.current_power_dbm;

  std::vector<double> sorted(levels.begin(), levels.end());
  std::sort(sorted.begin(), sorted.end());

  auto lowest_reaching = [&](int lq) -> std::optional<double> {
    for (double level : sorted) {
      if (predicted_lq(*latest, level, phy) >= lq) return level;
    }
    return std::nullopt;
  };

  const double sufficient = lowest_reaching(state.lq_target).value_or(sorted.back());
  if (sufficient > state.current_power_dbm) return sufficient;

  const auto comfortable = lowest_reaching(state.lq_target + state.lq_hysteresis);
  if (comfortable && *comfortable < state.current_power_dbm) return *comfortable;
  return state.current_power_dbm;
}

}  // namespace zbsim
