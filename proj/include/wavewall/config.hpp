#pragma once

// Runtime configuration: YAML text, every key optional, unknown keys rejected.
// See docs/config.md for the schema.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wavewall/actuation.hpp"
#include "wavewall/occupancy.hpp"
#include "wavewall/wave.hpp"

namespace YAML {
class Node;
}

namespace wavewall {

struct VisionParams {
  int frame_width = 160;
  int frame_height = 120;
  double alpha = 0.02;              // background blend for non-foreground pixels
  double foreground_alpha = 0.0005; // background blend for foreground pixels
  double diff_threshold = 25.0;
  double min_activity = 0.02;
};

enum class TransportKind { Loopback, Serial, File };

struct TransportConfig {
  TransportKind kind = TransportKind::Loopback;
  std::string path;  // serial device or output file
  int baud = 115200;
};

struct DeviceConfig {
  std::int64_t failsafe_timeout_ms = 500;
};

struct TelemetryConfig {
  std::string bind = "127.0.0.1:8765";
  std::string static_dir;  // console assets; empty disables static serving
  int publish_every = 1;   // ticks between broadcast snapshots
};

struct RuntimeConfig {
  int tick_hz = 30;
  int n_regions = 4;
  int m_panels = 8;
  VisionParams vision;
  occupancy::OccupancyParams occupancy;
  wave::WaveParams wave;
  std::vector<actuation::ServoCalibration> servos;  // one per panel
  actuation::ActuatorLimits actuator;
  TransportConfig transport;
  DeviceConfig device;
  TelemetryConfig telemetry;

  double dt() const noexcept { return 1.0 / tick_hz; }
};

/// All defaults, with `m_panels` default servos.
RuntimeConfig default_config();

/// Parses YAML, fills omitted fields with defaults and validates.
/// Throws ParseError (with line) for malformed text or unknown keys and
/// ConfigError naming the field for invalid values.
RuntimeConfig load_config(std::string_view document);
RuntimeConfig load_config_file(const std::filesystem::path& path);

/// Throws ConfigError naming the first offending field.
void validate(const RuntimeConfig& config);

/// Overlays a `wave:` / `occupancy:` / ... mapping onto an existing config.
/// Shared with scenario parameter overrides.
void apply_wave_section(const YAML::Node& node, wave::WaveParams& out);
void apply_occupancy_section(const YAML::Node& node, occupancy::OccupancyParams& out);
void apply_vision_section(const YAML::Node& node, VisionParams& out);

/// Live-tunable parameters addressed as "section.field". `apply_parameter`
/// assigns without validating; `set_parameter` validates the result and
/// leaves `config` untouched on failure.
void apply_parameter(RuntimeConfig& config, std::string_view name, double value);
void set_parameter(RuntimeConfig& config, std::string_view name, double value);
std::vector<std::string> tunable_parameters();

std::string_view transport_kind_name(TransportKind kind) noexcept;

}  // namespace wavewall
