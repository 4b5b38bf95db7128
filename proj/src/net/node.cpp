#include "zbsim/net/node.hpp"

#include <algorithm>

namespace zbsim {

namespace {

// Time a response needs to get through CSMA and the ack exchange.
constexpr SimTime kResponseGuard = SimTime::millis(5);

}  // namespace

// ---------------------------------------------------------------- NetNode

NetNode::NetNode(NodeContext ctx, const NodeConfig& cfg)
    : ctx_(ctx),
      id_(cfg.id),
      role_(cfg.role),
      phy_(ctx.config.node_phy(cfg)),
      rng_(ctx.seed, cfg.id),
      ledger_(ctx.config.currents, ctx.config.supply_voltage, ctx.scheduler.now(), RadioMode::Idle) {
  mac_ = std::make_unique<Mac>(id_, ctx_.scheduler, ctx_.channel, rng_, ctx_.trace, ctx_.config.csma,
                               ctx_.config.pan_id, [this] { return position().x; });
  mac_->set_tx_power(phy_.tx_power_dbm);
  mac_->set_upper(this);
}

void NetNode::attach() {
  ctx_.channel.attach(id_, phy_, [this] { return position(); }, mac_.get(), &ledger_);
}

void NetNode::stop(SimTime end) { ledger_.close(end); }

TraceRecord NetNode::row(TraceKind kind) const {
  TraceRecord r;
  r.time_us = ctx_.scheduler.now().us();
  r.node_id = id_;
  r.kind = kind;
  r.pos_x_m = position().x;
  return r;
}

// --------------------------------------------------------- StationaryNode

StationaryNode::StationaryNode(NodeContext ctx, const NodeConfig& cfg)
    : NetNode(ctx, cfg),
      position_(cfg.position),
      beacon_offset_(cfg.beacon_offset),
      beacon_interval_(beacon_interval(ctx.config.beacon_order, ctx.config.band)) {
  attach();
}

void StationaryNode::start() {
  if (!beacon_interval_ || !role_.can_be_parent()) return;
  ctx_.scheduler.schedule(beacon_offset_, EventKind::BeaconDue, id_, [this] { send_beacon(); });
}

void StationaryNode::send_beacon() {
  Frame beacon;
  beacon.kind = FrameKind::Beacon;
  beacon.dst = kBroadcast;
  beacon.seq = mac_->next_beacon_seq();
  mac_->send_immediate(beacon);
  ctx_.scheduler.schedule_in(*beacon_interval_, EventKind::BeaconDue, id_, [this] { send_beacon(); });
}

void StationaryNode::send_response_later(const Frame& reply, SimTime max_delay) {
  const SimTime unit = ctx_.config.csma.unit_backoff;
  const std::int64_t slots = max_delay.us() / unit.us();
  if (slots <= 0) {
    mac_->csma_send(reply);
    return;
  }
  const SimTime delay = unit * static_cast<std::int64_t>(rng_.draw_uniform(static_cast<std::uint64_t>(slots)));
  ctx_.scheduler.schedule_in(delay, EventKind::ProbeDue, id_, [this, reply] { mac_->csma_send(reply); });
}

void StationaryNode::on_mac_done(const Frame& frame, TxOutcome outcome) {
  // A broadcast probe's responders retry with a fresh delay while the
  // prober still listens; plain MAC retries tend to collide again.
  if (frame.kind != FrameKind::ProbeResponse || outcome == TxOutcome::Delivered) return;
  auto it = response_deadline_.find(frame.dst);
  if (it == response_deadline_.end()) return;
  const SimTime now = ctx_.scheduler.now();
  if (now >= it->second) return;
  send_response_later(frame, std::min(ctx_.config.handover.response_jitter, it->second - now));
}

void StationaryNode::on_mac_receive(const Frame& frame, const LinkSample& sample) {
  switch (frame.kind) {
    case FrameKind::ProbeRequest: {
      if (!role_.can_be_parent()) return;
      Frame reply;
      reply.kind = FrameKind::ProbeResponse;
      reply.dst = frame.src;
      reply.payload_len = 1;
      reply.reported_lq = sample.lq;
      if (!frame.is_broadcast()) {
        mac_->csma_send(reply);
        return;
      }
      const auto& h = ctx_.config.handover;
      response_deadline_[frame.src] = ctx_.scheduler.now() + h.probe_window - kResponseGuard;
      send_response_later(reply, h.response_jitter);
      return;
    }
    case FrameKind::AssocRequest: {
      if (!role_.can_be_parent() || frame.dst != id_) return;
      children_.insert(frame.src);
      Frame reply;
      reply.kind = FrameKind::AssocResponse;
      reply.dst = frame.src;
      reply.payload_len = 3;
      mac_->csma_send(reply);
      return;
    }
    case FrameKind::Disassoc:
      children_.erase(frame.src);
      return;
    case FrameKind::Data: {
      if (frame.dst != id_) return;
      auto [it, fresh] = last_data_seq_.try_emplace(frame.src, frame.seq);
      if (!fresh && it->second == frame.seq) return;  // retransmission of a frame we already have
      it->second = frame.seq;
      ++data_received_;
      return;
    }
    default:
      return;
  }
}

// ------------------------------------------------------------- MobileNode

MobileNode::MobileNode(NodeContext ctx, const NodeConfig& cfg)
    : NetNode(ctx, cfg), trajectory_(ctx.config.trajectory_of(cfg)) {
  position_ = trajectory_.position_at(ctx.scheduler.now());
  for (const NodeConfig* n : ctx.config.stationary_parents()) candidates_.push_back(n->id);
  tpc_.current_power_dbm = phy_.tx_power_dbm;
  tpc_.lq_target = ctx.config.tpc.lq_target;
  tpc_.lq_hysteresis = ctx.config.tpc.lq_hysteresis;
  attach();
}

void MobileNode::start() {
  auto& sched = ctx_.scheduler;
  sched.schedule(sched.now(), EventKind::MoveTick, id_, [this] { on_move_tick(); });
  sched.schedule(sched.now() + ctx_.config.traffic.start_offset, EventKind::DataDue, id_,
                 [this] { on_data_due(); });
  maybe_sleep();
}

void MobileNode::stop(SimTime end) {
  if (outage_since_) {
    handover_.total_outage += end - *outage_since_;
    outage_since_ = end;
  }
  NetNode::stop(end);
}

void MobileNode::on_move_tick() {
  position_ = trajectory_.position_at(ctx_.scheduler.now());
  ctx_.trace.emit(row(TraceKind::Move));
  ctx_.scheduler.schedule_in(ctx_.config.move_tick, EventKind::MoveTick, id_, [this] { on_move_tick(); });
}

void MobileNode::on_data_due() {
  ctx_.scheduler.schedule_in(ctx_.config.traffic.period, EventKind::DataDue, id_, [this] { on_data_due(); });
  if (!traffic_started_) {
    traffic_started_ = true;
    if (!parent_) outage_since_ = ctx_.scheduler.now();
  }
  wake();
  ++traffic_.generated;

  Frame frame;
  frame.kind = FrameKind::Data;
  frame.payload_len = ctx_.config.traffic.payload_bytes;
  TraceRecord r = row(TraceKind::DataGen);
  r.frame_kind = FrameKind::Data;
  r.power_dbm = tpc_.current_power_dbm;

  if (phase_ != Phase::Idle) {
    r.outcome = "Deferred";
    ctx_.trace.emit(std::move(r));
    enqueue_pending(frame);
  } else if (auto reason = handover_trigger()) {
    r.outcome = "Pending";
    ctx_.trace.emit(std::move(r));
    enqueue_pending(frame);
    start_handover(*reason);
  } else {
    frame.dst = *parent_;
    r.dst = frame.dst;
    r.outcome = "Queued";
    ctx_.trace.emit(std::move(r));
    mac_->csma_send(frame);
  }
  maybe_sleep();
}

void MobileNode::on_retry_due() {
  retry_timer_.reset();
  if (phase_ != Phase::Idle || parent_) return;
  wake();
  start_handover("Retry");
}

std::optional<std::string_view> MobileNode::handover_trigger() const {
  const auto& cfg = ctx_.config;
  if (!parent_) return "Orphan";
  if (consecutive_failures_ >= cfg.handover.ack_failure_threshold) return "AckFailures";
  if (last_lq_ < cfg.tpc.lq_target - cfg.tpc.lq_hysteresis) return "LowLq";
  return std::nullopt;
}

void MobileNode::start_handover(std::string_view reason) {
  if (retry_timer_) {
    ctx_.scheduler.cancel(*retry_timer_);
    retry_timer_.reset();
  }
  ++handover_.attempts;
  handover_started_ = ctx_.scheduler.now();
  replies_.clear();

  TraceRecord r = row(TraceKind::HandoverStart);
  if (parent_) r.dst = *parent_;
  r.power_dbm = tpc_.current_power_dbm;
  r.lq = last_lq_;
  r.outcome = std::string(reason);
  ctx_.trace.emit(std::move(r));

  if (candidates_.empty()) {
    fail("NoCandidates");
    return;
  }
  if (ctx_.config.handover.mode == HandoverMode::Broadcast) {
    phase_ = Phase::Probing;
    Frame probe;
    probe.kind = FrameKind::ProbeRequest;
    probe.dst = kBroadcast;
    mac_->csma_send(probe);
    return;
  }
  phase_ = Phase::Scanning;
  scan_index_ = 0;
  scan_poll();
}

void MobileNode::scan_poll() {
  Frame probe;
  probe.kind = FrameKind::ProbeRequest;
  probe.dst = candidates_[scan_index_];
  mac_->csma_send(probe);
}

void MobileNode::on_scan_dwell_end() {
  phase_timer_.reset();
  if (++scan_index_ < candidates_.size()) {
    scan_poll();
  } else {
    decide();
  }
}

void MobileNode::decide() {
  phase_timer_.reset();
  const auto best = pick_best_responder(replies_);
  if (!best) {
    fail("NoResponse");
  } else {
    begin_association(*best);
  }
}

void MobileNode::begin_association(NodeId target) {
  phase_ = Phase::Associating;
  assoc_target_ = target;
  Frame request;
  request.kind = FrameKind::AssocRequest;
  request.dst = target;
  request.payload_len = 1;
  mac_->csma_send(request);
}

void MobileNode::complete(std::string_view outcome) {
  phase_ = Phase::Idle;
  ++handover_.completions;
  handover_.latencies.push_back(ctx_.scheduler.now() - handover_started_);
  consecutive_failures_ = 0;

  TraceRecord r = row(TraceKind::HandoverDone);
  r.dst = *parent_;
  r.lq = last_lq_;
  r.power_dbm = tpc_.current_power_dbm;
  r.outcome = std::string(outcome);
  ctx_.trace.emit(std::move(r));

  flush_pending();
  maybe_sleep();
}

void MobileNode::fail(std::string_view outcome) {
  phase_ = Phase::Idle;
  if (phase_timer_) {
    ctx_.scheduler.cancel(*phase_timer_);
    phase_timer_.reset();
  }
  set_parent(std::nullopt);
  consecutive_failures_ = 0;

  TraceRecord r = row(TraceKind::HandoverDone);
  r.power_dbm = tpc_.current_power_dbm;
  r.outcome = std::string(outcome);
  ctx_.trace.emit(std::move(r));

  for (const Frame& f : pending_) {
    TraceRecord drop = row(TraceKind::DataDrop);
    drop.frame_kind = f.kind;
    drop.outcome = "OutageLoss";
    ctx_.trace.emit(std::move(drop));
    ++traffic_.outage_losses;
  }
  pending_.clear();

  retry_timer_ = ctx_.scheduler.schedule_in(ctx_.config.handover.probe_retry, EventKind::ProbeDue, id_,
                                            [this] { on_retry_due(); });
  maybe_sleep();
}

void MobileNode::enqueue_pending(Frame frame) {
  if (static_cast<int>(pending_.size()) >= ctx_.config.traffic.pending_limit) {
    TraceRecord drop = row(TraceKind::DataDrop);
    drop.frame_kind = FrameKind::Data;
    drop.outcome = "Overflow";
    ctx_.trace.emit(std::move(drop));
    ++traffic_.overflow_drops;
    pending_.pop_front();
  }
  pending_.push_back(frame);
}

void MobileNode::flush_pending() {
  while (!pending_.empty()) {
    Frame f = pending_.front();
    pending_.pop_front();
    f.dst = *parent_;
    mac_->csma_send(f);
  }
}

void MobileNode::set_parent(std::optional<NodeId> parent) {
  const SimTime now = ctx_.scheduler.now();
  if (traffic_started_) {
    if (!parent_ && parent && outage_since_) {
      handover_.total_outage += now - *outage_since_;
      outage_since_.reset();
    } else if (parent_ && !parent) {
      outage_since_ = now;
    }
  }
  if (!parent) last_lq_ = 0;
  parent_ = parent;
}

void MobileNode::record_sample(const LinkSample& sample) {
  last_lq_ = sample.lq;
  last_contact_ = sample.time;
  const SimTime now = ctx_.scheduler.now();
  const SimTime window = ctx_.config.tpc.window;
  std::erase_if(samples_, [&](const LinkSample& s) { return now - s.time > window; });
  samples_.push_back(sample);
  apply_tpc();
}

void MobileNode::apply_tpc() {
  const auto& cfg = ctx_.config;
  if (!cfg.tpc.enabled || !parent_) return;
  const double next = tpc_update(tpc_, samples_, *parent_, cfg.power_levels, phy_, ctx_.scheduler.now(),
                                 cfg.tpc.window);
  if (next == tpc_.current_power_dbm) return;
  tpc_.current_power_dbm = next;
  mac_->set_tx_power(next);
  TraceRecord r = row(TraceKind::TpcSet);
  r.dst = *parent_;
  r.power_dbm = next;
  r.lq = last_lq_;
  ctx_.trace.emit(std::move(r));
}

void MobileNode::on_mac_receive(const Frame& frame, const LinkSample& sample) {
  if (phase_ == Phase::Associating && frame.kind == FrameKind::AssocResponse && frame.src == assoc_target_) {
    if (phase_timer_) {
      ctx_.scheduler.cancel(*phase_timer_);
      phase_timer_.reset();
    }
    const auto old_parent = parent_;
    set_parent(assoc_target_);
    record_sample(sample);
    complete("Associated");
    if (old_parent && *old_parent != assoc_target_) {
      Frame bye;
      bye.kind = FrameKind::Disassoc;
      bye.dst = *old_parent;
      bye.payload_len = 1;
      mac_->csma_send(bye);
    }
    return;
  }
  if (frame.kind == FrameKind::ProbeResponse &&
      (phase_ == Phase::Probing || phase_ == Phase::Window || phase_ == Phase::Scanning)) {
    auto it = std::find_if(replies_.begin(), replies_.end(),
                           [&](const ProbeReply& r) { return r.responder == frame.src; });
    if (it == replies_.end()) {
      replies_.push_back({frame.src, frame.reported_lq});
    } else {
      it->reported_lq = frame.reported_lq;
    }
  }
  if (parent_ && frame.src == *parent_) record_sample(sample);
}

void MobileNode::on_mac_done(const Frame& frame, TxOutcome outcome) {
  auto& sched = ctx_.scheduler;
  const auto& ho = ctx_.config.handover;
  switch (frame.kind) {
    case FrameKind::Data:
      if (outcome == TxOutcome::Delivered) {
        ++traffic_.delivered;
        consecutive_failures_ = 0;
      } else {
        ++consecutive_failures_;
        if (outcome == TxOutcome::NoAck) ++traffic_.no_ack;
        if (outcome == TxOutcome::ChannelAccessFailure) ++traffic_.access_failures;
      }
      break;
    case FrameKind::ProbeRequest:
      if (phase_ == Phase::Probing) {
        if (outcome == TxOutcome::Sent) {
          phase_ = Phase::Window;
          phase_timer_ = sched.schedule_in(ho.probe_window, EventKind::ProbeWindowEnd, id_, [this] { decide(); });
        } else {
          fail("ChannelBusy");
        }
      } else if (phase_ == Phase::Scanning) {
        phase_timer_ = sched.schedule_in(ho.scan_response_timeout, EventKind::ScanDwellEnd, id_,
                                         [this] { on_scan_dwell_end(); });
      }
      break;
    case FrameKind::AssocRequest:
      if (phase_ != Phase::Associating || frame.dst != assoc_target_) break;
      if (outcome == TxOutcome::Delivered) {
        if (!phase_timer_) {
          phase_timer_ = sched.schedule_in(ho.assoc_timeout, EventKind::AssocTimeout, id_, [this] {
            phase_timer_.reset();
            fail("AssocTimeout");
          });
        }
      } else {
        fail("AssocFailed");
      }
      break;
    default:
      break;
  }
  maybe_sleep();
}

void MobileNode::on_mac_idle() { maybe_sleep(); }

void MobileNode::wake() {
  if (!sleeping_) return;
  ctx_.channel.set_sleeping(id_, false);
  sleeping_ = false;
  ctx_.trace.emit(row(TraceKind::Wake));
}

void MobileNode::maybe_sleep() {
  if (!ctx_.config.mobile_sleep || sleeping_ || phase_ != Phase::Idle) return;
  if (!mac_->idle() || ctx_.channel.is_transmitting(id_)) return;
  ctx_.channel.set_sleeping(id_, true);
  sleeping_ = true;
  ctx_.trace.emit(row(TraceKind::Sleep));
}

}  // namespace zbsim
