#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zbsim/engine/ids.hpp"
#include "zbsim/engine/sim_time.hpp"

namespace zbsim {

enum class EventKind : std::uint8_t {
  TxStart,
  TxEnd,
  CcaCheck,
  BackoffExpire,
  AckTimeout,
  AckDue,
  BeaconDue,
  ProbeDue,
  ProbeWindowEnd,
  ScanDwellEnd,
  AssocTimeout,
  DataDue,
  MoveTick,
  EndOfRun,
};

inline constexpr std::size_t kEventKindCount = static_cast<std::size_t>(EventKind::EndOfRun) + 1;

std::string_view to_string(EventKind kind);

using EventId = std::uint64_t;

struct Event {
  SimTime time;
  std::uint64_t sequence = 0;
  NodeId target = kGlobal;
  EventKind kind = EventKind::EndOfRun;
};

/// Thrown when a caller breaks a scheduling precondition. The run cannot
/// continue meaningfully after this.
class SchedulerError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct RunSummary {
  std::array<std::uint64_t, kEventKindCount> processed_by_kind{};
  std::uint64_t processed = 0;
  std::uint64_t scheduled = 0;
  std::uint64_t cancelled = 0;
  std::uint64_t pending = 0;
  SimTime clock;

  std::uint64_t count(EventKind kind) const {
    return processed_by_kind[static_cast<std::size_t>(kind)];
  }
};

/// Single-threaded discrete-event core. Events are ordered by (time,
/// sequence); ties at the same time run in the order they were scheduled.
class Scheduler {
public:
  using Handler = std::function<void()>;

  SimTime now() const { return now_; }

  EventId schedule(SimTime at, EventKind kind, NodeId target, Handler handler);
  EventId schedule_in(SimTime delay, EventKind kind, NodeId target, Handler handler) {
    return schedule(now_ + delay, kind, target, std::move(handler));
  }

  /// Returns false if the event already ran or was cancelled before.
  bool cancel(EventId id);
  bool is_pending(EventId id) const { return handlers_.contains(id); }

  /// Processes every event with time <= end. The clock ends at `end` when
  /// later events remain queued, otherwise at the last processed event.
  RunSummary run_until(SimTime end);

  RunSummary summary() const;

private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };

  SimTime now_;
  std::uint64_t next_sequence_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_map<EventId, Handler> handlers_;
  std::array<std::uint64_t, kEventKindCount> processed_by_kind_{};
  std::uint64_t processed_ = 0;
  std::uint64_t cancelled_ = 0;
};

}  // namespace zbsim
