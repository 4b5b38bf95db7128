#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "zbsim/engine/scheduler.hpp"
#include "zbsim/mac/frame.hpp"
#include "zbsim/phy/phy.hpp"
#include "zbsim/scenario/energy.hpp"
#include "zbsim/trace.hpp"

namespace zbsim {

/// Per-receiver view of one finished transmission (kept for inspection).
struct ReceiverSnapshot {
  NodeId id = 0;
  Position position;
  double rx_power_dbm = 0.0;
  bool audible = false;
  bool eligible = false;
  bool collided = false;
  bool delivered = false;
};

struct TransmissionRecord {
  Frame frame;
  Position src_position;
  SimTime start;
  SimTime end;
  std::vector<ReceiverSnapshot> receivers;
};

/// Shared medium. Computes audibility from the link budget when a frame
/// starts, applies the no-capture rule (two audible frames overlapping at a
/// receiver destroy each other there) and drives each radio's mode.
class Channel {
public:
  class Listener {
  public:
    virtual ~Listener() = default;
    virtual void on_frame_received(const Frame& frame, const LinkSample& sample) = 0;
    virtual void on_transmit_end(const Frame& frame) = 0;
  };

  Channel(Scheduler& scheduler, Band band, TraceLog& trace);

  void attach(NodeId id, PhyParams phy, std::function<Position()> position, Listener* listener,
              EnergyLedger* ledger);

  /// Starts sending `frame` from `src` now; returns the airtime. The radio
  /// must be awake and not already transmitting.
  SimTime transmit(NodeId src, const Frame& frame);

  /// Instantaneous clear-channel assessment: busy iff some transmission in
  /// progress is audible at `node`.
  bool cca_busy(NodeId node) const;

  void set_sleeping(NodeId node, bool sleeping);
  bool is_sleeping(NodeId node) const;
  bool is_transmitting(NodeId node) const;
  RadioMode mode(NodeId node) const;

  Band band() const { return band_; }
  int phy_overhead(NodeId node) const;

  void keep_history(bool on) { keep_history_ = on; }
  const std::vector<TransmissionRecord>& history() const { return history_; }

private:
  struct Radio {
    NodeId id;
    PhyParams phy;
    std::function<Position()> position;
    Listener* listener;
    EnergyLedger* ledger;
    bool sleeping = false;
    bool transmitting = false;
    double tx_power = 0.0;
    int audible_active = 0;
  };
  struct Reception {
    bool audible = false;
    bool eligible = false;
    bool collided = false;
    double rx_power = 0.0;
  };
  struct Active {
    std::uint64_t id;
    std::size_t src;
    Frame frame;
    SimTime start;
    SimTime end;
    Position src_position;
    std::vector<Reception> rx;
    std::vector<Position> rx_positions;
  };

  std::size_t index_of(NodeId id) const;
  void refresh_mode(Radio& radio);
  void abort_receptions(std::size_t radio_index);
  void finish(std::uint64_t tx_id);

  Scheduler& scheduler_;
  Band band_;
  TraceLog& trace_;
  std::vector<Radio> radios_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<Active> active_;
  std::uint64_t next_tx_id_ = 0;
  bool keep_history_ = false;
  std::vector<TransmissionRecord> history_;
};

}  // namespace zbsim
