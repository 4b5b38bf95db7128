#include "zbsim/net/role.hpp"

namespace zbsim {

std::string_view to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::Coordinator: return "coordinator";
    case DeviceKind::Router: return "router";
    case DeviceKind::EndDevice: return "end_device";
  }
  return "?";
}

std::string_view to_string(NodeClass c) {
  return c == NodeClass::Mobile ? "mobile" : "stationary";
}

std::optional<DeviceKind> device_kind_from_string(std::string_view s) {
  if (s == "coordinator") return DeviceKind::Coordinator;
  if (s == "router") return DeviceKind::Router;
  if (s == "end_device") return DeviceKind::EndDevice;
  return std::nullopt;
}

std::optional<NodeClass> node_class_from_string(std::string_view s) {
  if (s == "stationary") return NodeClass::Stationary;
  if (s == "mobile") return NodeClass::Mobile;
  return std::nullopt;
}

}  // namespace zbsim
