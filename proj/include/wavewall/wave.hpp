#pragma once

// Per-region wave dynamics. Base heights rise under dwell, decay when the
// region is empty and diffuse between neighbors; a ripple is layered on top
// only when rendering panel heights, so it never feeds back into the state.

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace wavewall::wave {

struct WaveParams {
  double rise_rate = 0.25;         // height units / s
  double decay_rate = 0.15;        // height units / s
  double coupling = 0.1;           // 1 / s
  double ripple_amplitude = 0.15;  // fraction of local base height
  double ripple_frequency = 0.4;   // Hz
  double ripple_wavenumber = std::numbers::pi / 4.0;  // rad / panel
};

/// Throws ConfigError on negative terms, zero rise_rate, or coupling * dt > 0.5.
void validate(const WaveParams& params, double dt);

struct WaveState {
  std::vector<double> base;  // one height per region, each in [0, 1]
  double phase = 0.0;        // [0, 2 pi)
  std::uint64_t tick = 0;

  static WaveState dormant(int n_regions);

  friend bool operator==(const WaveState&, const WaveState&) = default;
};

/// One explicit diffusion step with reflective ends:
/// b_i += coupling_dt * (b_{i-1} + b_{i+1} - 2 b_i), b_{-1} = b_0, b_n = b_{n-1}.
void diffuse(std::span<double> base, double coupling_dt);

/// rise -> decay -> diffuse -> clamp, then advance the ripple phase.
WaveState step_wave(WaveState state, std::optional<int> occupied, double dt, const WaveParams& params);

/// Piecewise-linear interpolation of region heights sampled at region centers
/// (i + 0.5) / n, held constant beyond the outermost centers. `x` in [0, 1].
double sample_base(std::span<const double> base, double x);

/// Heights for `m_panels` evenly spaced panels (centers at (j + 0.5) / m).
std::vector<double> render_profile(const WaveState& state, int m_panels, const WaveParams& params);

}  // namespace wavewall::wave
