#include "wavewall/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "wavewall/error.hpp"
#include "yaml_util.hpp"

namespace wavewall {
namespace {

using yaml::read;
using yaml::reject_unknown;
using yaml::require_map;

void apply_servo(const YAML::Node& node, actuation::ServoCalibration& out) {
  require_map(node, "servo entry");
  reject_unknown(node, "servos[]", {"angle_min", "angle_max", "pulse_min", "pulse_max", "inverted"});
  read(node, "angle_min", out.angle_min);
  read(node, "angle_max", out.angle_max);
  read(node, "pulse_min", out.pulse_min);
  read(node, "pulse_max", out.pulse_max);
  read(node, "inverted", out.inverted);
}

TransportKind parse_kind(const YAML::Node& node) {
  const auto s = node.as<std::string>();
  if (s == "loopback") return TransportKind::Loopback;
  if (s == "serial") return TransportKind::Serial;
  if (s == "file") return TransportKind::File;
  throw ParseError(yaml::line_of(node), "transport.kind must be loopback, serial or file");
}

RuntimeConfig from_yaml(const YAML::Node& root) {
  RuntimeConfig cfg;
  if (root.IsNull()) return default_config();
  require_map(root, "config document");
  reject_unknown(root, "", {"tick_hz", "n_regions", "m_panels", "vision", "occupancy", "wave", "servos",
                            "servo_defaults", "actuator", "transport", "device", "telemetry"});
  read(root, "tick_hz", cfg.tick_hz);
  read(root, "n_regions", cfg.n_regions);
  read(root, "m_panels", cfg.m_panels);
  if (root["vision"]) apply_vision_section(root["vision"], cfg.vision);
  if (root["occupancy"]) apply_occupancy_section(root["occupancy"], cfg.occupancy);
  if (root["wave"]) apply_wave_section(root["wave"], cfg.wave);

  actuation::ServoCalibration servo_default;
  if (root["servo_defaults"]) apply_servo(root["servo_defaults"], servo_default);
  if (const auto servos = root["servos"]) {
    if (!servos.IsSequence()) throw ParseError(yaml::line_of(servos), "servos must be a list");
    for (const auto& s : servos) {
      auto calib = servo_default;
      apply_servo(s, calib);
      cfg.servos.push_back(calib);
    }
  } else if (cfg.m_panels > 0) {
    cfg.servos.assign(static_cast<std::size_t>(cfg.m_panels), servo_default);
  }

  if (const auto a = root["actuator"]) {
    require_map(a, "actuator");
    reject_unknown(a, "actuator", {"max_speed"});
    read(a, "max_speed", cfg.actuator.max_speed);
  }
  if (const auto t = root["transport"]) {
    require_map(t, "transport");
    reject_unknown(t, "transport", {"kind", "path", "baud"});
    if (t["kind"]) cfg.transport.kind = parse_kind(t["kind"]);
    read(t, "path", cfg.transport.path);
    read(t, "baud", cfg.transport.baud);
  }
  if (const auto d = root["device"]) {
    require_map(d, "device");
    reject_unknown(d, "device", {"failsafe_timeout_ms"});
    read(d, "failsafe_timeout_ms", cfg.device.failsafe_timeout_ms);
  }
  if (const auto t = root["telemetry"]) {
    require_map(t, "telemetry");
    reject_unknown(t, "telemetry", {"bind", "static_dir", "publish_every"});
    read(t, "bind", cfg.telemetry.bind);
    read(t, "static_dir", cfg.telemetry.static_dir);
    read(t, "publish_every", cfg.telemetry.publish_every);
  }
  return cfg;
}

void check_unit_open(double v, const char* field) {
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(field, "must lie in (0, 1)");
}

}  // namespace

void apply_vision_section(const YAML::Node& node, VisionParams& out) {
  require_map(node, "vision");
  reject_unknown(node, "vision",
                 {"frame_width", "frame_height", "alpha", "foreground_alpha", "diff_threshold", "min_activity"});
  read(node, "frame_width", out.frame_width);
  read(node, "frame_height", out.frame_height);
  read(node, "alpha", out.alpha);
  read(node, "foreground_alpha", out.foreground_alpha);
  read(node, "diff_threshold", out.diff_threshold);
  read(node, "min_activity", out.min_activity);
}

void apply_occupancy_section(const YAML::Node& node, occupancy::OccupancyParams& out) {
  require_map(node, "occupancy");
  reject_unknown(node, "occupancy", {"debounce_ms", "vacancy_timeout_ms"});
  read(node, "debounce_ms", out.debounce_ms);
  read(node, "vacancy_timeout_ms", out.vacancy_timeout_ms);
}

void apply_wave_section(const YAML::Node& node, wave::WaveParams& out) {
  require_map(node, "wave");
  reject_unknown(node, "wave", {"rise_rate", "decay_rate", "coupling", "ripple_amplitude", "ripple_frequency",
                                "ripple_wavenumber"});
  read(node, "rise_rate", out.rise_rate);
  read(node, "decay_rate", out.decay_rate);
  read(node, "coupling", out.coupling);
  read(node, "ripple_amplitude", out.ripple_amplitude);
  read(node, "ripple_frequency", out.ripple_frequency);
  read(node, "ripple_wavenumber", out.ripple_wavenumber);
}

RuntimeConfig default_config() {
  RuntimeConfig cfg;
  cfg.servos.assign(static_cast<std::size_t>(cfg.m_panels), actuation::ServoCalibration{});
  return cfg;
}

void validate(const RuntimeConfig& c) {
  if (c.tick_hz < 10 || c.tick_hz > 120) throw ConfigError("tick_hz", "must lie in [10, 120]");
  if (c.n_regions < 2) throw ConfigError("n_regions", "must be at least 2");
  if (c.m_panels < c.n_regions) throw ConfigError("m_panels", "must be at least n_regions");
  // SET_TARGETS carries 2 bytes per servo in at most 64 payload bytes.
  if (c.m_panels > 32) throw ConfigError("m_panels", "at most 32 servos fit in one SET_TARGETS frame");

  const auto& v = c.vision;
  if (v.frame_width < 8) throw ConfigError("vision.frame_width", "must be at least 8");
  if (v.frame_height < 8) throw ConfigError("vision.frame_height", "must be at least 8");
  if (!(v.alpha > 0.0 && v.alpha <= 1.0)) throw ConfigError("vision.alpha", "must lie in (0, 1]");
  if (!(v.foreground_alpha >= 0.0 && v.foreground_alpha <= v.alpha)) {
    throw ConfigError("vision.foreground_alpha", "must lie in [0, vision.alpha]");
  }
  if (!(v.diff_threshold > 0.0 && v.diff_threshold < 255.0)) {
    throw ConfigError("vision.diff_threshold", "must lie in (0, 255)");
  }
  check_unit_open(v.min_activity, "vision.min_activity");

  occupancy::validate(c.occupancy);
  wave::validate(c.wave, c.dt());

  if (c.servos.size() != static_cast<std::size_t>(c.m_panels)) {
    throw ConfigError("servos", "has " + std::to_string(c.servos.size()) + " entries but m_panels is " +
                                    std::to_string(c.m_panels));
  }
  for (std::size_t i = 0; i < c.servos.size(); ++i) {
    try {
      actuation::validate(c.servos[i]);
    } catch (const ConfigError& e) {
      throw ConfigError("servos[" + std::to_string(i) + "]." + e.field(), e.what());
    }
  }
  actuation::validate(c.actuator);

  if (c.transport.kind != TransportKind::Loopback && c.transport.path.empty()) {
    throw ConfigError("transport.path", "required for serial and file transports");
  }
  if (c.transport.baud <= 0) throw ConfigError("transport.baud", "must be positive");
  if (c.device.failsafe_timeout_ms <= 0) throw ConfigError("device.failsafe_timeout_ms", "must be positive");
  if (c.telemetry.publish_every < 1) throw ConfigError("telemetry.publish_every", "must be at least 1");
  if (c.telemetry.bind.rfind(':') == std::string::npos) throw ConfigError("telemetry.bind", "expected host:port");
}

RuntimeConfig load_config(std::string_view document) {
  RuntimeConfig cfg = from_yaml(yaml::load(document));
  validate(cfg);
  return cfg;
}

RuntimeConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

std::vector<std::string> tunable_parameters() {
  return {"wave.rise_rate",         "wave.decay_rate",         "wave.coupling",
          "wave.ripple_amplitude",  "wave.ripple_frequency",   "wave.ripple_wavenumber",
          "occupancy.debounce_ms",  "occupancy.vacancy_timeout_ms",
          "vision.alpha",           "vision.foreground_alpha", "vision.diff_threshold",
          "vision.min_activity",    "actuator.max_speed"};
}

void apply_parameter(RuntimeConfig& next, std::string_view name, double value) {
  if (!std::isfinite(value)) throw ConfigError(std::string(name), "must be finite");
  auto& w = next.wave;
  auto& v = next.vision;
  if (name == "wave.rise_rate") w.rise_rate = value;
  else if (name == "wave.decay_rate") w.decay_rate = value;
  else if (name == "wave.coupling") w.coupling = value;
  else if (name == "wave.ripple_amplitude") w.ripple_amplitude = value;
  else if (name == "wave.ripple_frequency") w.ripple_frequency = value;
  else if (name == "wave.ripple_wavenumber") w.ripple_wavenumber = value;
  else if (name == "occupancy.debounce_ms") next.occupancy.debounce_ms = std::llround(value);
  else if (name == "occupancy.vacancy_timeout_ms") next.occupancy.vacancy_timeout_ms = std::llround(value);
  else if (name == "vision.alpha") v.alpha = value;
  else if (name == "vision.foreground_alpha") v.foreground_alpha = value;
  else if (name == "vision.diff_threshold") v.diff_threshold = value;
  else if (name == "vision.min_activity") v.min_activity = value;
  else if (name == "actuator.max_speed") next.actuator.max_speed = value;
  else throw ConfigError(std::string(name), "not a tunable parameter");
}

void set_parameter(RuntimeConfig& config, std::string_view name, double value) {
  RuntimeConfig next = config;
  apply_parameter(next, name, value);
  validate(next);
  config = std::move(next);
}

std::string_view transport_kind_name(TransportKind kind) noexcept {
  switch (kind) {
    case TransportKind::Loopback: return "loopback";
    case TransportKind::Serial: return "serial";
    case TransportKind::File: return "file";
  }
  return "unknown";
}

}  // namespace wavewall
