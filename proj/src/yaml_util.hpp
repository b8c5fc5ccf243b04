#pragma once

#include <yaml-cpp/yaml.h>

#include <initializer_list>
#include <string>
#include <string_view>

#include "wavewall/error.hpp"

namespace wavewall::yaml {

inline int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

inline YAML::Node load(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.mark.line + 1, e.msg);
  }
}

/// Mapping or null (treated as empty); anything else is a parse error.
inline void require_map(const YAML::Node& node, std::string_view what) {
  if (!node.IsNull() && !node.IsMap()) throw ParseError(line_of(node), std::string(what) + " must be a mapping");
}

inline void reject_unknown(const YAML::Node& node, std::string_view section, std::initializer_list<std::string_view> keys) {
  if (!node.IsMap()) return;
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (const auto k : keys) known = known || key == k;
    if (!known) {
      const std::string where = section.empty() ? key : std::string(section) + "." + key;
      throw ParseError(line_of(kv.first), "unknown key '" + where + "'");
    }
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, T& out) {
  const YAML::Node node = parent[key];
  if (!node) return;
  try {
    out = node.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(line_of(node), std::string("bad value for '") + key + "'");
  }
}

}  // namespace wavewall::yaml
