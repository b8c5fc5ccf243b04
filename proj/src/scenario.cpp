#include "wavewall/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wavewall/error.hpp"
#include "yaml_util.hpp"

namespace wavewall::sim {

std::uint64_t Scenario::tick_count() const {
  return static_cast<std::uint64_t>(std::llround(duration_s * tick_hz)) + 1;
}

void validate(const Scenario& s) {
  if (!(s.duration_s >= 0.0) || !std::isfinite(s.duration_s)) throw InvalidInput("duration_s must be >= 0");
  if (s.tick_hz <= 0) throw InvalidInput("tick_hz must be positive");
  if (s.noise_amplitude < 0 || s.noise_amplitude > 255) throw InvalidInput("noise_amplitude must lie in [0, 255]");
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& e = s.events[i];
    if (!std::isfinite(e.t_s) || e.t_s < 0.0) throw InvalidInput("event times must be finite and >= 0");
    if (i > 0 && !(e.t_s > s.events[i - 1].t_s)) throw InvalidInput("event times must be strictly increasing");
    if (e.x && !(*e.x >= 0.0 && *e.x <= 1.0)) throw InvalidInput("visitor positions must lie in [0, 1]");
  }
}

Scenario parse_scenario(std::string_view document) {
  const YAML::Node root = yaml::load(document);
  if (!root.IsMap()) throw ParseError(yaml::line_of(root), "scenario must be a mapping");
  yaml::reject_unknown(root, "", {"schema_version", "duration_s", "tick_hz", "seed", "noise_amplitude", "events",
                                  "overrides"});
  int version = 0;
  yaml::read(root, "schema_version", version);
  if (version != kScenarioSchemaVersion) {
    throw ParseError(yaml::line_of(root), "schema_version must be " + std::to_string(kScenarioSchemaVersion));
  }
  if (!root["duration_s"]) throw ParseError(yaml::line_of(root), "duration_s is required");

  Scenario s;
  yaml::read(root, "duration_s", s.duration_s);
  yaml::read(root, "tick_hz", s.tick_hz);
  yaml::read(root, "seed", s.seed);
  yaml::read(root, "noise_amplitude", s.noise_amplitude);

  if (const auto events = root["events"]) {
    if (!events.IsSequence()) throw ParseError(yaml::line_of(events), "events must be a list");
    for (const auto& e : events) {
      yaml::require_map(e, "event");
      yaml::reject_unknown(e, "events[]", {"t", "x"});
      if (!e["t"]) throw ParseError(yaml::line_of(e), "event needs a 't'");
      Waypoint w;
      yaml::read(e, "t", w.t_s);
      if (e["x"] && !e["x"].IsNull()) {
        double x = 0.0;
        yaml::read(e, "x", x);
        w.x = x;
      }
      s.events.push_back(w);
    }
  }
  if (const auto o = root["overrides"]) {
    yaml::require_map(o, "overrides");
    yaml::reject_unknown(o, "overrides", {"wave", "occupancy"});
    const auto tunables = tunable_parameters();
    for (const auto& section : o) {
      const auto prefix = section.first.as<std::string>();
      yaml::require_map(section.second, prefix);
      for (const auto& kv : section.second) {
        const auto name = prefix + "." + kv.first.as<std::string>();
        if (std::find(tunables.begin(), tunables.end(), name) == tunables.end()) {
          throw ParseError(yaml::line_of(kv.first), "unknown key 'overrides." + name + "'");
        }
        double value = 0.0;
        yaml::read(section.second, kv.first.as<std::string>().c_str(), value);
        s.overrides.emplace_back(name, value);
      }
    }
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::optional<double> visitor_at(const Scenario& s, double t_s) {
  const auto after = std::upper_bound(s.events.begin(), s.events.end(), t_s,
                                      [](double t, const Waypoint& w) { return t < w.t_s; });
  if (after == s.events.begin()) return std::nullopt;
  const Waypoint& cur = *(after - 1);
  if (!cur.x) return std::nullopt;
  if (after == s.events.end() || !after->x) return cur.x;
  const double frac = (t_s - cur.t_s) / (after->t_s - cur.t_s);
  return *cur.x + frac * (*after->x - *cur.x);
}

vision::Frame synthesize_frame(std::optional<double> x, int width, int height, std::int64_t timestamp_ms) {
  vision::Frame frame;
  frame.width = width;
  frame.height = height;
  frame.timestamp_ms = timestamp_ms;
  frame.pixels.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), kBackgroundLuma);
  if (!x) return frame;
  const int blob = std::max(1, static_cast<int>(std::lround(kVisitorWidthFraction * width)));
  const int left = static_cast<int>(std::floor(*x * width - blob / 2.0 + 0.5));
  const int c0 = std::clamp(left, 0, width);
  const int c1 = std::clamp(left + blob, 0, width);
  for (int r = 0; r < height; ++r) {
    auto row = frame.pixels.begin() + static_cast<std::ptrdiff_t>(r) * width;
    std::fill(row + c0, row + c1, kVisitorLuma);
  }
  return frame;
}

ScenarioCamera::ScenarioCamera(const Scenario& scenario, int width, int height)
    : scenario_(scenario), width_(width), height_(height), rng_(scenario.seed) {}

void ScenarioCamera::add_noise(vision::Frame& frame) {
  const int a = scenario_.noise_amplitude;
  if (a == 0) return;
  const auto span = static_cast<std::uint64_t>(2 * a + 1);
  for (auto& p : frame.pixels) {
    const int delta = static_cast<int>(rng_() % span) - a;
    p = static_cast<std::uint8_t>(std::clamp(static_cast<int>(p) + delta, 0, 255));
  }
}

vision::Frame ScenarioCamera::plate() {
  auto frame = synthesize_frame(std::nullopt, width_, height_, 0);
  add_noise(frame);
  return frame;
}

vision::Frame ScenarioCamera::frame_at(std::uint64_t tick, std::int64_t timestamp_ms) {
  const double t = static_cast<double>(tick) / scenario_.tick_hz;
  auto frame = synthesize_frame(visitor_at(scenario_, t), width_, height_, timestamp_ms);
  add_noise(frame);
  return frame;
}

RuntimeConfig scenario_config(const Scenario& scenario, const RuntimeConfig& base) {
  RuntimeConfig cfg = base;
  cfg.tick_hz = scenario.tick_hz;
  for (const auto& [name, value] : scenario.overrides) apply_parameter(cfg, name, value);
  validate(cfg);
  return cfg;
}

Scenario two_region_scenario(int n_regions) {
  const double c1 = 1.5 / n_regions;
  const double c2 = 2.5 / n_regions;
  Scenario s;
  s.duration_s = 11.0;
  s.events = {{0.0, c1}, {5.0, c1}, {6.0, c2}};
  return s;
}

Scenario dwell_scenario(int region, double dwell_s, double duration_s, int n_regions) {
  Scenario s;
  s.duration_s = duration_s;
  s.events = {{0.0, (region + 0.5) / n_regions}, {dwell_s, std::nullopt}};
  return s;
}

}  // namespace wavewall::sim
