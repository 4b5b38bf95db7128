#include "zbsim/mac/mac.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace zbsim {

std::string_view to_string(TxOutcome outcome) {
  switch (outcome) {
    case TxOutcome::Delivered: return "Delivered";
    case TxOutcome::Sent: return "Sent";
    case TxOutcome::NoAck: return "NoAck";
    case TxOutcome::ChannelAccessFailure: return "ChannelAccessFailure";
  }
  return "?";
}

Mac::Mac(NodeId id, Scheduler& scheduler, Channel& channel, RngStream& rng, TraceLog& trace,
         const CsmaParams& params, std::uint16_t pan_id, std::function<double()> position_x)
    : id_(id),
      scheduler_(scheduler),
      channel_(channel),
      rng_(rng),
      trace_(trace),
      params_(params),
      pan_id_(pan_id),
      position_x_(std::move(position_x)) {}

TraceRecord Mac::row(TraceKind kind, const Frame& frame) const {
  TraceRecord r = frame_row(scheduler_.now(), id_, kind, frame);
  r.power_dbm = frame.tx_power_dbm;
  r.pos_x_m = position_x_();
  return r;
}

bool Mac::idle() const {
  return !current_ && queue_.empty() && acks_owed_ == 0 && immediate_on_air_ == 0;
}

void Mac::csma_send(Frame frame) {
  if (is_csma_exempt(frame.kind)) {
    throw std::invalid_argument(fmt::format("{} frames are not sent with CSMA", to_string(frame.kind)));
  }
  frame.src = id_;
  frame.pan_id = pan_id_;
  frame.seq = data_seq_++;
  frame.tx_power_dbm = tx_power_;
  validate(frame);
  queue_.push_back(frame);
  if (!current_) start_next();
}

void Mac::send_immediate(Frame frame) {
  if (!is_csma_exempt(frame.kind)) {
    throw std::invalid_argument(
        fmt::format("send_immediate accepts Beacon or Ack frames, got {}", to_string(frame.kind)));
  }
  frame.src = id_;
  frame.pan_id = pan_id_;
  frame.tx_power_dbm = tx_power_;
  validate(frame);
  if (channel_.is_transmitting(id_) || channel_.is_sleeping(id_) ||
      (frame.kind == FrameKind::Beacon && acks_owed_ > 0)) {
    trace_.emit(row(frame.kind == FrameKind::Ack ? TraceKind::AckSkipped : TraceKind::BeaconSkipped, frame));
    return;
  }
  ++immediate_on_air_;
  channel_.transmit(id_, frame);
}

void Mac::start_next() {
  if (current_ || queue_.empty()) return;
  current_ = queue_.front();
  queue_.pop_front();
  nb_ = 0;
  be_ = params_.mac_min_be;
  retries_ = 0;
  backoff();
}

void Mac::backoff() {
  const std::uint64_t slots = rng_.draw_uniform(std::uint64_t{1} << be_);
  const SimTime delay = params_.unit_backoff * static_cast<std::int64_t>(slots);
  TraceRecord r = row(TraceKind::Backoff, *current_);
  r.outcome = std::to_string(delay.us());
  trace_.emit(std::move(r));
  scheduler_.schedule_in(delay, EventKind::BackoffExpire, id_, [this] { on_backoff_expire(); });
}

void Mac::on_backoff_expire() {
  // Own transmission or an acknowledgment about to go out also blocks access.
  const bool busy = channel_.cca_busy(id_) || channel_.is_transmitting(id_) || acks_owed_ > 0;
  TraceRecord r = row(TraceKind::Cca, *current_);
  r.outcome = busy ? "BUSY" : "IDLE";
  trace_.emit(std::move(r));
  if (busy) {
    ++nb_;
    be_ = std::min(be_ + 1, params_.mac_max_be);
    if (nb_ > params_.max_csma_backoffs) {
      finish(TxOutcome::ChannelAccessFailure);
    } else {
      backoff();
    }
    return;
  }
  current_->tx_power_dbm = tx_power_;
  on_air_ = true;
  channel_.transmit(id_, *current_);
}

void Mac::on_transmit_end(const Frame& frame) {
  if (is_csma_exempt(frame.kind)) {
    --immediate_on_air_;
    notify_if_idle();
    return;
  }
  on_air_ = false;
  if (!requires_ack(*current_)) {
    finish(TxOutcome::Sent);
    return;
  }
  awaiting_ack_ = true;
  ack_timer_ = scheduler_.schedule_in(params_.ack_wait, EventKind::AckTimeout, id_, [this] { on_ack_timeout(); });
}

void Mac::on_ack_timeout() {
  ack_timer_.reset();
  awaiting_ack_ = false;
  ++retries_;
  if (retries_ > params_.max_frame_retries) {
    finish(TxOutcome::NoAck);
    return;
  }
  nb_ = 0;
  be_ = params_.mac_min_be;
  backoff();
}

void Mac::finish(TxOutcome outcome) {
  const Frame done = *current_;
  current_.reset();
  TraceRecord r = row(TraceKind::MacDone, done);
  r.outcome = std::string(to_string(outcome));
  trace_.emit(std::move(r));
  if (upper_ != nullptr) upper_->on_mac_done(done, outcome);
  if (!current_) start_next();
  notify_if_idle();
}

void Mac::notify_if_idle() {
  if (idle() && upper_ != nullptr) upper_->on_mac_idle();
}

void Mac::on_frame_received(const Frame& frame, const LinkSample& sample) {
  if (frame.kind == FrameKind::Ack) {
    if (frame.dst != id_ || !awaiting_ack_ || !current_) return;
    if (frame.seq != current_->seq || frame.src != current_->dst) return;
    scheduler_.cancel(*ack_timer_);
    ack_timer_.reset();
    awaiting_ack_ = false;
    if (upper_ != nullptr) upper_->on_mac_receive(frame, sample);
    finish(TxOutcome::Delivered);
    return;
  }
  if (frame.dst != id_ && frame.dst != kBroadcast) return;
  if (frame.pan_id != pan_id_) return;
  if (requires_ack(frame)) {
    ++acks_owed_;
    Frame ack;
    ack.kind = FrameKind::Ack;
    ack.seq = frame.seq;
    ack.dst = frame.src;
    scheduler_.schedule_in(params_.turnaround, EventKind::AckDue, id_, [this, ack] {
      --acks_owed_;
      send_immediate(ack);
      notify_if_idle();
    });
  }
  if (upper_ != nullptr) upper_->on_mac_receive(frame, sample);
}

}  // namespace zbsim
