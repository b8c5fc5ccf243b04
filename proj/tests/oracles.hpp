#pragma once

// Independent reference implementations used only by tests. Each one is a
// deliberately naive restatement of a rule, written without calling into the
// code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace oracle {

/// Bit-at-a-time shift register, poly 0x07, init 0, MSB first, no xor-out.
inline std::uint8_t crc8_bitwise(std::span<const std::uint8_t> data) {
  unsigned reg = 0;
  for (const std::uint8_t byte : data) {
    for (int bit = 7; bit >= 0; --bit) {
      const unsigned in = (byte >> bit) & 1u;
      const unsigned top = (reg >> 7) & 1u;
      reg = (reg << 1) & 0xFFu;
      if (top ^ in) reg ^= 0x07u;
    }
  }
  return static_cast<std::uint8_t>(reg);
}

struct Centroid {
  std::size_t count = 0;
  double activity = 0.0;
  std::optional<double> centroid;
};

/// Double loop over every pixel; centroid is the mean pixel-center column.
inline Centroid brute_force_presence(const std::vector<double>& mean, const std::vector<std::uint8_t>& px, int width,
                                     int height, double threshold) {
  Centroid out;
  double col_centers = 0.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      const double d = static_cast<double>(px[i]) - mean[i];
      if ((d < 0 ? -d : d) > threshold) {
        ++out.count;
        col_centers += (x + 0.5) / width;
      }
    }
  }
  out.activity = static_cast<double>(out.count) / (static_cast<double>(width) * height);
  if (out.count > 0) out.centroid = col_centers / static_cast<double>(out.count);
  return out;
}

/// Naive four-phase wave update on a copy.
inline std::vector<double> wave_step(std::vector<double> b, std::optional<int> occ, double dt, double rise,
                                     double decay, double coupling) {
  const int n = static_cast<int>(b.size());
  for (int i = 0; i < n; ++i) {
    if (occ && *occ == i) {
      b[i] = b[i] + rise * dt;
      if (b[i] > 1.0) b[i] = 1.0;
    } else {
      b[i] = b[i] - decay * dt;
      if (b[i] < 0.0) b[i] = 0.0;
    }
  }
  std::vector<double> padded(n + 2);
  padded[0] = b[0];
  padded[n + 1] = b[n - 1];
  for (int i = 0; i < n; ++i) padded[i + 1] = b[i];
  std::vector<double> next(n);
  for (int i = 0; i < n; ++i) {
    next[i] = padded[i + 1] + coupling * dt * (padded[i] + padded[i + 2] - 2.0 * padded[i + 1]);
    if (next[i] < 0.0) next[i] = 0.0;
    if (next[i] > 1.0) next[i] = 1.0;
  }
  return next;
}

/// Hat-function interpolation of region heights at normalized position x.
inline double interpolate(const std::vector<double>& base, double x) {
  const int n = static_cast<int>(base.size());
  double total = 0.0;
  double weight = 0.0;
  for (int i = 0; i < n; ++i) {
    const double center = (i + 0.5) / n;
    const double w = std::max(0.0, 1.0 - std::fabs(x - center) * n);
    total += w * base[i];
    weight += w;
  }
  if (x <= 0.5 / n) return base.front();
  if (x >= (n - 0.5) / n) return base.back();
  return total / weight;
}

struct OccEvent {
  bool occupied;
  int region;
  std::int64_t now;
};

struct OccResult {
  std::optional<int> current;
  std::int64_t dwell = 0;
};

/// Replays a whole observation sequence with plain local variables.
inline OccResult occupancy_reference(const std::vector<OccEvent>& events, std::int64_t debounce,
                                     std::int64_t vacancy) {
  int current = -1;
  std::int64_t dwell = 0;
  int cand = -1;
  std::int64_t cand_since = 0;
  std::int64_t last_seen = -1;
  std::int64_t prev = -1;
  for (const auto& e : events) {
    const std::int64_t elapsed = prev < 0 ? 0 : e.now - prev;
    prev = e.now;
    if (!e.occupied) {
      cand = -1;
      if (current >= 0 && (last_seen < 0 || e.now - last_seen >= vacancy)) {
        current = -1;
        dwell = 0;
      }
      continue;
    }
    last_seen = e.now;
    if (e.region == current) {
      dwell += elapsed;
      cand = -1;
    } else if (e.region == cand) {
      if (e.now - cand_since >= debounce) {
        current = e.region;
        dwell = 0;
        cand = -1;
      }
    } else {
      cand = e.region;
      cand_since = e.now;
    }
  }
  OccResult r;
  if (current >= 0) r.current = current;
  r.dwell = dwell;
  return r;
}

}  // namespace oracle
