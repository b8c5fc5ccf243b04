#pragma once

// Scripted visitor trajectories and the synthetic camera that renders them.
// Scenario files are YAML; see docs/scenario.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <string_view>
#include <vector>

#include "wavewall/config.hpp"
#include "wavewall/vision.hpp"

namespace wavewall::sim {

inline constexpr int kScenarioSchemaVersion = 1;

struct Waypoint {
  double t_s = 0.0;
  std::optional<double> x;  // normalized horizontal position; empty = nobody there
};

// Dotted parameter names ("wave.rise_rate") applied on top of the run config.
using ParamOverrides = std::vector<std::pair<std::string, double>>;

struct Scenario {
  double duration_s = 0.0;
  int tick_hz = 30;
  std::vector<Waypoint> events;  // strictly increasing t_s
  ParamOverrides overrides;
  std::uint64_t seed = 0;
  int noise_amplitude = 0;  // uniform luma noise in [-a, a]; 0 disables

  std::uint64_t tick_count() const;  // ticks at t = 0, 1/hz, ..., duration
};

/// Throws InvalidInput on unordered events or positions outside [0, 1].
void validate(const Scenario& scenario);

Scenario parse_scenario(std::string_view document);
Scenario load_scenario(const std::filesystem::path& path);

/// Visitor position at time `t_s`: the most recent waypoint, linearly
/// interpolated toward the next one when both have a position.
std::optional<double> visitor_at(const Scenario& scenario, double t_s);

/// Flat luma-30 background with, when present, a full-height luma-220 bar
/// 15% of the frame wide centered on `x` (clipped at the edges).
vision::Frame synthesize_frame(std::optional<double> x, int width, int height, std::int64_t timestamp_ms = 0);

inline constexpr std::uint8_t kBackgroundLuma = 30;
inline constexpr std::uint8_t kVisitorLuma = 220;
inline constexpr double kVisitorWidthFraction = 0.15;

/// Deterministic camera for one scenario run, including seeded noise.
class ScenarioCamera {
 public:
  ScenarioCamera(const Scenario& scenario, int width, int height);

  vision::Frame plate();
  vision::Frame frame_at(std::uint64_t tick, std::int64_t timestamp_ms);

 private:
  void add_noise(vision::Frame& frame);

  const Scenario& scenario_;
  int width_;
  int height_;
  std::mt19937_64 rng_;
};

/// Applies the scenario's tick rate and parameter overrides to `base`.
RuntimeConfig scenario_config(const Scenario& scenario, const RuntimeConfig& base);

/// Visitor stands at the center of region 1 for 5 s, walks to the center of
/// region 2 over 1 s, then stays until t = 11 s.
Scenario two_region_scenario(int n_regions = 4);

/// Visitor stands at the center of `region` from t = 0 for `dwell_s`, then
/// leaves; runs for `duration_s`.
Scenario dwell_scenario(int region, double dwell_s, double duration_s, int n_regions = 4);

}  // namespace wavewall::sim
