#include "zbsim/engine/scheduler.hpp"

#include <fmt/format.h>

namespace zbsim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::TxStart: return "TxStart";
    case EventKind::TxEnd: return "TxEnd";
    case EventKind::CcaCheck: return "CcaCheck";
    case EventKind::BackoffExpire: return "BackoffExpire";
    case EventKind::AckTimeout: return "AckTimeout";
    case EventKind::AckDue: return "AckDue";
    case EventKind::BeaconDue: return "BeaconDue";
    case EventKind::ProbeDue: return "ProbeDue";
    case EventKind::ProbeWindowEnd: return "ProbeWindowEnd";
    case EventKind::ScanDwellEnd: return "ScanDwellEnd";
    case EventKind::AssocTimeout: return "AssocTimeout";
    case EventKind::DataDue: return "DataDue";
    case EventKind::MoveTick: return "MoveTick";
    case EventKind::EndOfRun: return "EndOfRun";
  }
  return "?";
}

EventId Scheduler::schedule(SimTime at, EventKind kind, NodeId target, Handler handler) {
  if (at < now_) {
    throw SchedulerError(fmt::format("event {} for node {} scheduled at {} us, clock already at {} us",
                                     to_string(kind), target, at.us(), now_.us()));
  }
  const EventId id = next_sequence_++;
  queue_.push(Event{at, id, target, kind});
  handlers_.emplace(id, std::move(handler));
  return id;
}

bool Scheduler::cancel(EventId id) {
  if (handlers_.erase(id) == 0) return false;
  ++cancelled_;
  return true;
}

RunSummary Scheduler::run_until(SimTime end) {
  if (end < now_) {
    throw SchedulerError(
        fmt::format("run_until({} us) is behind the clock ({} us)", end.us(), now_.us()));
  }
  while (!queue_.empty() && queue_.top().time <= end) {
    const Event ev = queue_.top();
    queue_.pop();
    auto it = handlers_.find(ev.sequence);
    if (it == handlers_.end()) continue;  // cancelled
    Handler handler = std::move(it->second);
    handlers_.erase(it);
    now_ = ev.time;
    ++processed_;
    ++processed_by_kind_[static_cast<std::size_t>(ev.kind)];
    handler();
  }
  // Drop cancelled entries so emptiness reflects live events only.
  while (!queue_.empty() && !handlers_.contains(queue_.top().sequence)) queue_.pop();
  if (!queue_.empty()) now_ = end;
  return summary();
}

RunSummary Scheduler::summary() const {
  RunSummary s;
  s.processed_by_kind = processed_by_kind_;
  s.processed = processed_;
  s.scheduled = next_sequence_;
  s.cancelled = cancelled_;
  s.pending = handlers_.size();
  s.clock = now_;
  return s;
}

}  // namespace zbsim
