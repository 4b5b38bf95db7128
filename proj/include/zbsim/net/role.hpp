#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace zbsim {

enum class DeviceKind : std::uint8_t { Coordinator, Router, EndDevice };
enum class NodeClass : std::uint8_t { Stationary, Mobile };

struct Role {
  DeviceKind kind = DeviceKind::EndDevice;
  NodeClass node_class = NodeClass::Stationary;

  /// Only coordinators and routers may serve as a parent.
  bool can_be_parent() const { return kind != DeviceKind::EndDevice; }
  bool is_mobile() const { return node_class == NodeClass::Mobile; }

  bool operator==(const Role&) const = default;
};

std::string_view to_string(DeviceKind kind);
std::string_view to_string(NodeClass c);
std::optional<DeviceKind> device_kind_from_string(std::string_view s);
std::optional<NodeClass> node_class_from_string(std::string_view s);

}  // namespace zbsim
