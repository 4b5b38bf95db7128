#pragma once

#include <cstdint>

namespace zbsim {

using NodeId = std::uint16_t;

/// Destination address meaning "every listener".
inline constexpr NodeId kBroadcast = 0xFFFF;
/// Event target for occurrences that do not belong to a single node.
inline constexpr NodeId kGlobal = 0xFFFE;

}  // namespace zbsim
