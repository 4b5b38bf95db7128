#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string_view>

#include "zbsim/engine/sim_time.hpp"

namespace zbsim {

enum class RadioMode : std::uint8_t { Sleep, Idle, Rx, Tx };

inline constexpr std::size_t kRadioModeCount = 4;

std::string_view to_string(RadioMode mode);

/// Supply currents per radio mode. TX current grows linearly with output
/// power, anchored at the 0 dBm figure.
struct CurrentModel {
  double tx_current_0dbm_ma = 30.0;
  double tx_current_slope_ma_per_db = 1.5;
  double rx_current_ma = 30.0;
  double idle_current_ma = 30.0;
  double sleep_current_ma = 0.003;

  double tx_current_ma(double power_dbm) const {
    return tx_current_0dbm_ma + tx_current_slope_ma_per_db * power_dbm;
  }
  double current_ma(RadioMode mode, double tx_power_dbm) const;

  bool operator==(const CurrentModel&) const = default;
};

class EnergyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct EnergyBreakdown {
  double sleep_mj = 0.0;
  double idle_mj = 0.0;
  double rx_mj = 0.0;
  double tx_mj = 0.0;
  double total_mj = 0.0;
};

/// Per-node accounting of time spent in each radio mode. Energy is derived
/// from the accumulated times on demand, so it does not depend on how the
/// run was split into intervals.
class EnergyLedger {
public:
  EnergyLedger(CurrentModel model, double supply_voltage, SimTime start, RadioMode initial,
               double tx_power_dbm = 0.0);

  /// Closes the current interval at `t` and opens one in `next`. Throws
  /// EnergyError when `t` precedes the previous transition.
  void accrue(RadioMode next, double tx_power_dbm, SimTime t);
  /// Closes the open interval at `t` without changing mode.
  void close(SimTime t);

  RadioMode mode() const { return mode_; }
  double tx_power_dbm() const { return tx_power_; }
  SimTime last_transition() const { return since_; }

  SimTime time_in(RadioMode mode) const { return mode_time_[static_cast<std::size_t>(mode)]; }
  SimTime total_time() const;
  const std::map<double, SimTime>& tx_time_by_level() const { return tx_by_level_; }
  /// Tx-time-weighted mean output power (0 when the node never transmitted).
  double mean_tx_power_dbm() const;

  double supply_voltage() const { return voltage_; }
  const CurrentModel& model() const { return model_; }

  EnergyBreakdown breakdown() const;
  double total_mj() const { return breakdown().total_mj; }

private:
  CurrentModel model_;
  double voltage_;
  RadioMode mode_;
  double tx_power_;
  SimTime since_;
  std::array<SimTime, kRadioModeCount> mode_time_{};
  std::map<double, SimTime> tx_by_level_;
};

}  // namespace zbsim
