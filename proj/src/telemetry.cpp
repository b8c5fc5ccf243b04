#include "wavewall/telemetry.hpp"

#include "wavewall/error.hpp"

namespace wavewall::runtime {
namespace {

using nlohmann::json;

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

Mode parse_mode(const json& j) {
  if (!j.is_string()) throw InvalidInput("mode must be \"live\" or \"virtual\"");
  const auto s = j.get<std::string>();
  if (s == "live") return Mode::Live;
  if (s == "virtual") return Mode::Virtual;
  throw InvalidInput("mode must be \"live\" or \"virtual\"");
}

}  // namespace

std::string_view mode_name(Mode mode) noexcept { return mode == Mode::Live ? "live" : "virtual"; }

json to_json(const TelemetrySnapshot& s) {
  return json{
      {"type", "snapshot"},
      {"tick", s.tick},
      {"t_s", s.t_s},
      {"mode", mode_name(s.mode)},
      {"presence", {{"occupied", s.occupied}, {"centroid_x", optional_json(s.centroid_x)},
                    {"activity_ratio", s.activity_ratio}}},
      {"region", optional_json(s.region)},
      {"dwell_ms", s.dwell_ms},
      {"n_regions", s.n_regions},
      {"base", s.base},
      {"panels", s.panels},
      {"angles", s.angles},
      {"virtual_x", optional_json(s.virtual_x)},
      {"link", s.link_up ? "up" : "down"},
      {"failsafe", s.failsafe},
  };
}

TelemetrySnapshot snapshot_from_json(const json& j) {
  TelemetrySnapshot s;
  s.tick = j.at("tick").get<std::uint64_t>();
  s.t_s = j.at("t_s").get<double>();
  s.mode = parse_mode(j.at("mode"));
  const auto& p = j.at("presence");
  s.occupied = p.at("occupied").get<bool>();
  s.centroid_x = optional_from<double>(p, "centroid_x");
  s.activity_ratio = p.at("activity_ratio").get<double>();
  s.region = optional_from<int>(j, "region");
  s.dwell_ms = j.at("dwell_ms").get<std::int64_t>();
  s.n_regions = j.at("n_regions").get<int>();
  s.base = j.at("base").get<std::vector<double>>();
  s.panels = j.at("panels").get<std::vector<double>>();
  s.angles = j.at("angles").get<std::vector<double>>();
  s.virtual_x = optional_from<double>(j, "virtual_x");
  s.link_up = j.at("link").get<std::string>() == "up";
  s.failsafe = j.at("failsafe").get<bool>();
  return s;
}

json to_json(const ControlMessage& msg) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SetParam>) {
          return {{"type", "set_param"}, {"name", m.name}, {"value", m.value}};
        } else if constexpr (std::is_same_v<T, VirtualVisitor>) {
          return {{"type", "virtual_visitor"}, {"x", optional_json(m.x)}};
        } else {
          return {{"type", "mode"}, {"mode", mode_name(m.mode)}};
        }
      },
      msg);
}

ControlMessage parse_control(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw InvalidInput("control message needs a string 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  try {
    if (type == "set_param") {
      if (!j.at("name").is_string() || !j.at("value").is_number()) {
        throw InvalidInput("set_param needs string 'name' and numeric 'value'");
      }
      return SetParam{j.at("name").get<std::string>(), j.at("value").get<double>()};
    }
    if (type == "virtual_visitor") {
      VirtualVisitor v;
      if (j.contains("x") && !j.at("x").is_null()) {
        if (!j.at("x").is_number()) throw InvalidInput("virtual_visitor 'x' must be a number or null");
        const double x = j.at("x").get<double>();
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("virtual_visitor 'x' must lie in [0, 1]");
        v.x = x;
      }
      return v;
    }
    if (type == "mode") return SetMode{parse_mode(j.at("mode"))};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad control message: ") + e.what());
  }
  throw InvalidInput("unknown control message type '" + type + "'");
}

json error_message(std::string_view what) { return {{"type", "error"}, {"message", what}}; }

}  // namespace wavewall::runtime
