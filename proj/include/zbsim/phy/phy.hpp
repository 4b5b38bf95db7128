#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "zbsim/engine/ids.hpp"
#include "zbsim/engine/sim_time.hpp"

namespace zbsim {

enum class Band : std::uint8_t { B2400, B915, B868 };

struct BandInfo {
  Band band;
  std::string_view name;
  int data_rate_kbps;
  int first_channel;
  int last_channel;
  double channel_spacing_mhz;
  /// Symbol period; the base superframe is 960 symbols.
  int symbol_us;

  int channel_count() const { return last_channel - first_channel + 1; }
};

const BandInfo& band_info(Band band);
std::optional<Band> band_from_string(std::string_view name);
std::string_view to_string(Band band);

/// Beacon order; 15 selects non-beacon operation.
struct BeaconOrder {
  static constexpr int kNonBeacon = 15;
  int value = kNonBeacon;

  bool beacon_enabled() const { return value != kNonBeacon; }
  bool operator==(const BeaconOrder&) const = default;
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Position&) const = default;
};

double distance(Position a, Position b);

/// Radio and propagation constants for one node. The propagation part
/// (pl0_db, path_loss_exponent) is shared by every node of a scenario.
struct PhyParams {
  double tx_power_dbm = 0.0;
  double antenna_gain_db = 0.0;
  double rx_sensitivity_dbm = -85.0;
  double pl0_db = 40.0;
  double path_loss_exponent = 2.0;
  int phy_overhead_bytes = 6;
  double lq_saturation_margin_db = 40.0;

  bool operator==(const PhyParams&) const = default;
};

/// Measurement taken on one frame reception.
struct LinkSample {
  double rx_power_dbm = 0.0;
  int lq = 0;
  SimTime time;
  NodeId from = 0;
  /// Output power the measured frame was sent at.
  double tx_power_dbm = 0.0;
};

/// Center frequency of a 2.4 GHz channel: 2350 + 5*ch MHz, ch in 11..26.
/// Throws std::domain_error outside that range.
double channel_center_frequency(int ch);

/// Beacon interval, base(band) * 2^bo. Returns nullopt for bo == 15 (no
/// beacons); throws std::domain_error for bo outside 0..15.
std::optional<SimTime> beacon_interval(BeaconOrder bo, Band band);

/// Log-distance path loss pl0 + 10 n log10(d / 1 m); d below 0.1 m counts as 0.1 m.
double path_loss_db(double distance_m, const PhyParams& params);

double received_power(double tx_dbm, double gain_tx_db, double gain_rx_db, double path_loss);

/// Link quality 0..255: linear in dB between the sensitivity (0) and
/// sensitivity + saturation margin (255), rounded half up.
int lq_from_rx_power(double rx_dbm, const PhyParams& params);

/// Airtime of `frame_bytes` on the air (PHY overhead already included),
/// rounded up to whole microseconds.
SimTime frame_airtime(int frame_bytes, Band band);

/// One side of a link: where the radio is and how it is configured.
struct RadioEndpoint {
  Position position;
  const PhyParams* phy;
};

double link_rx_power(const RadioEndpoint& tx, const RadioEndpoint& rx, double power_dbm);

/// True iff the power received at `rx` strictly exceeds its sensitivity.
bool in_range(const RadioEndpoint& tx, const RadioEndpoint& rx, double power_dbm);

}  // namespace zbsim
