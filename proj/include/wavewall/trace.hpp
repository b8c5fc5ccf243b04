#pragma once

// Per-tick trace rows and their CSV form. Column order:
//   tick,t_s,occupied,centroid_x,region,dwell_ms,base_0..,panel_0..,angle_0..,tx_bytes,failsafe
// Reals use 6-decimal fixed point; absent centroid/region are empty fields.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavewall::sim {

struct TraceRow {
  std::uint64_t tick = 0;
  double t_s = 0.0;
  bool occupied = false;
  std::optional<double> centroid_x;
  std::optional<int> region;
  std::int64_t dwell_ms = 0;
  std::vector<double> base;
  std::vector<double> panels;
  std::vector<double> angles;
  std::size_t tx_bytes = 0;
  bool failsafe = false;
};

std::string trace_header(std::size_t n_regions, std::size_t m_panels);
std::string export_trace(std::span<const TraceRow> rows);

/// Reads a CSV written by `export_trace`. Throws ParseError with the line.
std::vector<TraceRow> parse_trace(std::string_view csv);

}  // namespace wavewall::sim
