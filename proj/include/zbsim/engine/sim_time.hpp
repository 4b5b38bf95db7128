#pragma once

#include <compare>
#include <cstdint>

namespace zbsim {

/// Virtual time in whole microseconds since the start of a run.
///
/// The 320 us unit backoff and the 15.36 ms base superframe are both exact
/// in this base, so MAC timing never accumulates rounding error.
class SimTime {
public:
  constexpr SimTime() = default;

  static constexpr SimTime micros(std::int64_t us) { return SimTime{us}; }
  static constexpr SimTime millis(std::int64_t ms) { return SimTime{ms * 1000}; }
  static constexpr SimTime seconds(std::int64_t s) { return SimTime{s * 1'000'000}; }

  constexpr std::int64_t us() const { return value_; }
  constexpr double to_seconds() const { return static_cast<double>(value_) / 1e6; }
  constexpr double to_millis() const { return static_cast<double>(value_) / 1e3; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime rhs) const { return SimTime{value_ + rhs.value_}; }
  constexpr SimTime operator-(SimTime rhs) const { return SimTime{value_ - rhs.value_}; }
  constexpr SimTime operator*(std::int64_t k) const { return SimTime{value_ * k}; }
  constexpr SimTime& operator+=(SimTime rhs) {
    value_ += rhs.value_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime rhs) {
    value_ -= rhs.value_;
    return *this;
  }

private:
  constexpr explicit SimTime(std::int64_t us) : value_(us) {}
  std::int64_t value_ = 0;
};

}  // namespace zbsim
