#include "wavewall/trace.hpp"

#include <charconv>
#include <cstdio>

#include "wavewall/error.hpp"

namespace wavewall::sim {
namespace {

void append_real(std::string& out, double v) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof(buf), "%.6f", v);
  out.append(buf, static_cast<std::size_t>(n));
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view field, int line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, "bad number '" + std::string(field) + "'");
  }
  return value;
}

std::size_t count_prefix(const std::vector<std::string_view>& header, std::string_view prefix) {
  std::size_t n = 0;
  for (const auto h : header) n += h.starts_with(prefix) ? 1 : 0;
  return n;
}

}  // namespace

std::string trace_header(std::size_t n_regions, std::size_t m_panels) {
  std::string h = "tick,t_s,occupied,centroid_x,region,dwell_ms";
  for (std::size_t i = 0; i < n_regions; ++i) h += ",base_" + std::to_string(i);
  for (std::size_t i = 0; i < m_panels; ++i) h += ",panel_" + std::to_string(i);
  for (std::size_t i = 0; i < m_panels; ++i) h += ",angle_" + std::to_string(i);
  h += ",tx_bytes,failsafe\n";
  return h;
}

std::string export_trace(std::span<const TraceRow> rows) {
  const std::size_t n = rows.empty() ? 0 : rows.front().base.size();
  const std::size_t m = rows.empty() ? 0 : rows.front().panels.size();
  std::string out = trace_header(n, m);
  for (const auto& r : rows) {
    out += std::to_string(r.tick);
    out += ',';
    append_real(out, r.t_s);
    out += r.occupied ? ",1," : ",0,";
    if (r.centroid_x) append_real(out, *r.centroid_x);
    out += ',';
    if (r.region) out += std::to_string(*r.region);
    out += ',';
    out += std::to_string(r.dwell_ms);
    for (const auto* vec : {&r.base, &r.panels, &r.angles}) {
      for (const double v : *vec) {
        out += ',';
        append_real(out, v);
      }
    }
    out += ',';
    out += std::to_string(r.tx_bytes);
    out += r.failsafe ? ",1\n" : ",0\n";
  }
  return out;
}

std::vector<TraceRow> parse_trace(std::string_view csv) {
  std::vector<TraceRow> rows;
  std::vector<std::string_view> header;
  std::size_t n = 0;
  std::size_t m = 0;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const auto fields = split(line, ',');
    if (header.empty()) {
      header = fields;
      n = count_prefix(header, "base_");
      m = count_prefix(header, "panel_");
      if (header.size() != 8 + n + 2 * m || header.front() != "tick") throw ParseError(line_no, "unrecognized trace header");
      continue;
    }
    if (fields.size() != header.size()) throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields");

    TraceRow r;
    r.tick = parse_number<std::uint64_t>(fields[0], line_no);
    r.t_s = parse_number<double>(fields[1], line_no);
    r.occupied = parse_number<int>(fields[2], line_no) != 0;
    if (!fields[3].empty()) r.centroid_x = parse_number<double>(fields[3], line_no);
    if (!fields[4].empty()) r.region = parse_number<int>(fields[4], line_no);
    r.dwell_ms = parse_number<std::int64_t>(fields[5], line_no);
    std::size_t f = 6;
    for (std::size_t i = 0; i < n; ++i) r.base.push_back(parse_number<double>(fields[f++], line_no));
    for (std::size_t i = 0; i < m; ++i) r.panels.push_back(parse_number<double>(fields[f++], line_no));
    for (std::size_t i = 0; i < m; ++i) r.angles.push_back(parse_number<double>(fields[f++], line_no));
    r.tx_bytes = parse_number<std::size_t>(fields[f++], line_no);
    r.failsafe = parse_number<int>(fields[f], line_no) != 0;
    rows.push_back(std::move(r));
  }
  if (header.empty()) throw ParseError(0, "empty trace");
  return rows;
}

}  // namespace wavewall::sim
