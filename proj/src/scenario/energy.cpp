#include "zbsim/scenario/energy.hpp"

#include <fmt/format.h>

namespace zbsim {

std::string_view to_string(RadioMode mode) {
  switch (mode) {
    case RadioMode::Sleep: return "Sleep";
    case RadioMode::Idle: return "Idle";
    case RadioMode::Rx: return "Rx";
    case RadioMode::Tx: return "Tx";
  }
  return "?";
}

double CurrentModel::current_ma(RadioMode mode, double tx_power_dbm) const {
  switch (mode) {
    case RadioMode::Sleep: return sleep_current_ma;
    case RadioMode::Idle: return idle_current_ma;
    case RadioMode::Rx: return rx_current_ma;
    case RadioMode::Tx: return tx_current_ma(tx_power_dbm);
  }
  return 0.0;
}

EnergyLedger::EnergyLedger(CurrentModel model, double supply_voltage, SimTime start, RadioMode initial,
                           double tx_power_dbm)
    : model_(model), voltage_(supply_voltage), mode_(initial), tx_power_(tx_power_dbm), since_(start) {}

void EnergyLedger::close(SimTime t) {
  if (t < since_) {
    throw EnergyError(fmt::format("radio transition at {} us precedes the previous one at {} us", t.us(),
                                  since_.us()));
  }
  const SimTime dt = t - since_;
  mode_time_[static_cast<std::size_t>(mode_)] += dt;
  if (mode_ == RadioMode::Tx && dt > SimTime{}) tx_by_level_[tx_power_] += dt;
  since_ = t;
}

void EnergyLedger::accrue(RadioMode next, double tx_power_dbm, SimTime t) {
  close(t);
  mode_ = next;
  tx_power_ = tx_power_dbm;
}

SimTime EnergyLedger::total_time() const {
  SimTime sum;
  for (const auto& t : mode_time_) sum += t;
  return sum;
}

double EnergyLedger::mean_tx_power_dbm() const {
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& [level, t] : tx_by_level_) {
    weighted += level * static_cast<double>(t.us());
    total += static_cast<double>(t.us());
  }
  return total > 0.0 ? weighted / total : 0.0;
}

EnergyBreakdown EnergyLedger::breakdown() const {
  // mA * V * s = mJ
  auto mj = [this](double current_ma, SimTime t) { return current_ma * voltage_ * t.to_seconds(); };
  EnergyBreakdown b;
  b.sleep_mj = mj(model_.sleep_current_ma, time_in(RadioMode::Sleep));
  b.idle_mj = mj(model_.idle_current_ma, time_in(RadioMode::Idle));
  b.rx_mj = mj(model_.rx_current_ma, time_in(RadioMode::Rx));
  for (const auto& [level, t] : tx_by_level_) b.tx_mj += mj(model_.tx_current_ma(level), t);
  b.total_mj = b.sleep_mj + b.idle_mj + b.rx_mj + b.tx_mj;
  return b;
}

}  // namespace zbsim
