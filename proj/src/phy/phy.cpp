#include "zbsim/phy/phy.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

namespace zbsim {

namespace {

constexpr std::array<BandInfo, 3> kBands = {{
    {Band::B2400, "B2400", 250, 11, 26, 5.0, 16},
    {Band::B915, "B915", 40, 1, 10, 2.0, 25},
    {Band::B868, "B868", 20, 0, 0, 0.0, 50},
}};

constexpr std::int64_t kBaseSuperframeSymbols = 960;
constexpr double kMinDistance = 0.1;

}  // namespace

const BandInfo& band_info(Band band) { return kBands.at(static_cast<std::size_t>(band)); }

std::optional<Band> band_from_string(std::string_view name) {
  for (const auto& b : kBands) {
    if (b.name == name) return b.band;
  }
  return std::nullopt;
}

std::string_view to_string(Band band) { return band_info(band).name; }

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

double channel_center_frequency(int ch) {
  if (ch < 11 || ch > 26) {
    throw std::domain_error(fmt::format("channel {} is outside the 2.4 GHz range 11..26", ch));
  }
  return 2350.0 + 5.0 * ch;
}

std::optional<SimTime> beacon_interval(BeaconOrder bo, Band band) {
  if (bo.value < 0 || bo.value > BeaconOrder::kNonBeacon) {
    throw std::domain_error(fmt::format("beacon order {} is outside 0..15", bo.value));
  }
  if (!bo.beacon_enabled()) return std::nullopt;
  const std::int64_t base_us = kBaseSuperframeSymbols * band_info(band).symbol_us;
  return SimTime::micros(base_us << bo.value);
}

double path_loss_db(double distance_m, const PhyParams& params) {
  const double d = std::max(distance_m, kMinDistance);
  return params.pl0_db + 10.0 * params.path_loss_exponent * std::log10(d);
}

double received_power(double tx_dbm, double gain_tx_db, double gain_rx_db, double path_loss) {
  return tx_dbm + gain_tx_db + gain_rx_db - path_loss;
}

int lq_from_rx_power(double rx_dbm, const PhyParams& params) {
  const double margin = rx_dbm - params.rx_sensitivity_dbm;
  if (margin <= 0.0) return 0;
  if (margin >= params.lq_saturation_margin_db) return 255;
  const int lq = static_cast<int>(std::floor(255.0 * margin / params.lq_saturation_margin_db + 0.5));
  return std::clamp(lq, 0, 255);
}

SimTime frame_airtime(int frame_bytes, Band band) {
  const std::int64_t rate = band_info(band).data_rate_kbps;  // bits per ms
  const std::int64_t bits_x1000 = std::int64_t{frame_bytes} * 8 * 1000;
  return SimTime::micros((bits_x1000 + rate - 1) / rate);
}

double link_rx_power(const RadioEndpoint& tx, const RadioEndpoint& rx, double power_dbm) {
  const double pl = path_loss_db(distance(tx.position, rx.position), *tx.phy);
  return received_power(power_dbm, tx.phy->antenna_gain_db, rx.phy->antenna_gain_db, pl);
}

bool in_range(const RadioEndpoint& tx, const RadioEndpoint& rx, double power_dbm) {
  return link_rx_power(tx, rx, power_dbm) > rx.phy->rx_sensitivity_dbm;
}

}  // namespace zbsim
