#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string_view>

#include "zbsim/engine/rng.hpp"
#include "zbsim/engine/scheduler.hpp"
#include "zbsim/mac/channel.hpp"
#include "zbsim/mac/frame.hpp"
#include "zbsim/scenario/config.hpp"
#include "zbsim/trace.hpp"

namespace zbsim {

enum class TxOutcome : std::uint8_t { Delivered, Sent, NoAck, ChannelAccessFailure };

std::string_view to_string(TxOutcome outcome);

/// Unslotted CSMA/CA MAC of one node. Frames handed to csma_send() are sent
/// one at a time in FIFO order; beacons and acknowledgments bypass CSMA.
class Mac final : public Channel::Listener {
public:
  class Upper {
  public:
    virtual ~Upper() = default;
    /// Frames addressed to this node (or broadcast), plus acknowledgments
    /// that matched an outstanding frame.
    virtual void on_mac_receive(const Frame& frame, const LinkSample& sample) = 0;
    virtual void on_mac_done(const Frame& frame, TxOutcome outcome) = 0;
    virtual void on_mac_idle() {}
  };

  Mac(NodeId id, Scheduler& scheduler, Channel& channel, RngStream& rng, TraceLog& trace,
      const CsmaParams& params, std::uint16_t pan_id, std::function<double()> position_x);

  void set_upper(Upper* upper) { upper_ = upper; }

  /// Queues a frame for CSMA/CA transmission. Source, PAN id and sequence
  /// number are filled in here. Beacons and acks are rejected.
  void csma_send(Frame frame);

  /// Sends a Beacon or Ack right away, without carrier sensing. Any other
  /// kind throws std::invalid_argument.
  void send_immediate(Frame frame);

  void set_tx_power(double dbm) { tx_power_ = dbm; }
  double tx_power() const { return tx_power_; }

  /// Nothing queued, nothing in flight and no acknowledgment owed.
  bool idle() const;

  std::uint8_t next_beacon_seq() { return beacon_seq_++; }
  std::size_t queued() const { return queue_.size(); }

  void on_frame_received(const Frame& frame, const LinkSample& sample) override;
  void on_transmit_end(const Frame& frame) override;

private:
  void start_next();
  void backoff();
  void on_backoff_expire();
  void on_ack_timeout();
  void finish(TxOutcome outcome);
  void notify_if_idle();
  TraceRecord row(TraceKind kind, const Frame& frame) const;

  NodeId id_;
  Scheduler& scheduler_;
  Channel& channel_;
  RngStream& rng_;
  TraceLog& trace_;
  CsmaParams params_;
  std::uint16_t pan_id_;
  std::function<double()> position_x_;
  Upper* upper_ = nullptr;

  double tx_power_ = 0.0;
  std::uint8_t data_seq_ = 0;
  std::uint8_t beacon_seq_ = 0;

  std::deque<Frame> queue_;
  std::optional<Frame> current_;
  int nb_ = 0;
  int be_ = 0;
  int retries_ = 0;
  bool awaiting_ack_ = false;
  bool on_air_ = false;
  std::optional<EventId> ack_timer_;
  int acks_owed_ = 0;
  int immediate_on_air_ = 0;
};

}  // namespace zbsim
