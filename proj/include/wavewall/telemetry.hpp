#pragma once

// Snapshot and control message types exchanged with the operator console,
// and their JSON encoding. Schema documented in docs/telemetry.md.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace wavewall::runtime {

enum class Mode { Live, Virtual };

std::string_view mode_name(Mode mode) noexcept;

struct TelemetrySnapshot {
  std::uint64_t tick = 0;
  double t_s = 0.0;
  Mode mode = Mode::Live;
  bool occupied = false;
  std::optional<double> centroid_x;
  double activity_ratio = 0.0;
  std::optional<int> region;
  std::int64_t dwell_ms = 0;
  int n_regions = 0;
  std::vector<double> base;
  std::vector<double> panels;
  std::vector<double> angles;
  std::optional<double> virtual_x;
  bool link_up = false;
  bool failsafe = false;
};

struct SetParam {
  std::string name;
  double value = 0.0;
};

struct VirtualVisitor {
  std::optional<double> x;  // empty = visitor leaves
};

struct SetMode {
  Mode mode = Mode::Live;
};

using ControlMessage = std::variant<SetParam, VirtualVisitor, SetMode>;

nlohmann::json to_json(const TelemetrySnapshot& snapshot);
TelemetrySnapshot snapshot_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ControlMessage& msg);

/// Throws InvalidInput for malformed JSON, unknown types or out-of-range values.
ControlMessage parse_control(std::string_view text);

nlohmann::json error_message(std::string_view what);

}  // namespace wavewall::runtime
