#include "wavewall/wave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavewall/error.hpp"

namespace wavewall::wave {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_non_negative(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string("wave.") + field, "must be a finite value >= 0");
}

}  // namespace

void validate(const WaveParams& params, double dt) {
  require_non_negative(params.rise_rate, "rise_rate");
  require_non_negative(params.decay_rate, "decay_rate");
  require_non_negative(params.coupling, "coupling");
  require_non_negative(params.ripple_amplitude, "ripple_amplitude");
  require_non_negative(params.ripple_frequency, "ripple_frequency");
  require_non_negative(params.ripple_wavenumber, "ripple_wavenumber");
  if (params.rise_rate <= 0.0) throw ConfigError("wave.rise_rate", "must be strictly positive");
  if (params.coupling * dt > 0.5) {
    throw ConfigError("wave.coupling", "coupling * dt must not exceed 0.5 (explicit diffusion stability)");
  }
}

WaveState WaveState::dormant(int n_regions) {
  if (n_regions < 2) throw InvalidInput("n_regions must be at least 2");
  return WaveState{std::vector<double>(static_cast<std::size_t>(n_regions), 0.0), 0.0, 0};
}

void diffuse(std::span<double> base, double coupling_dt) {
  const std::size_t n = base.size();
  if (n == 0 || coupling_dt == 0.0) return;
  std::vector<double> prev(base.begin(), base.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double left = prev[i == 0 ? 0 : i - 1];
    const double right = prev[i + 1 == n ? n - 1 : i + 1];
    base[i] = prev[i] + coupling_dt * (left + right - 2.0 * prev[i]);
  }
}

WaveState step_wave(WaveState state, std::optional<int> occupied, double dt, const WaveParams& params) {
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  validate(params, dt);
  const int n = static_cast<int>(state.base.size());
  if (occupied && (*occupied < 0 || *occupied >= n)) {
    throw InvalidInput("occupied region " + std::to_string(*occupied) + " outside [0, " + std::to_string(n) + ")");
  }

  for (int i = 0; i < n; ++i) {
    double& b = state.base[static_cast<std::size_t>(i)];
    if (occupied == i) {
      b = std::min(1.0, b + params.rise_rate * dt);
    } else {
      b = std::max(0.0, b - params.decay_rate * dt);
    }
  }
  diffuse(state.base, params.coupling * dt);
  for (double& b : state.base) b = std::clamp(b, 0.0, 1.0);

  state.phase = std::fmod(state.phase + kTwoPi * params.ripple_frequency * dt, kTwoPi);
  if (state.phase < 0.0) state.phase += kTwoPi;
  ++state.tick;
  return state;
}

double sample_base(std::span<const double> base, double x) {
  const std::size_t n = base.size();
  if (n == 0) throw InvalidInput("empty base vector");
  // Position in units of region index, where region i's center sits at i.
  const double u = x * static_cast<double>(n) - 0.5;
  if (u <= 0.0) return base.front();
  if (u >= static_cast<double>(n - 1)) return base.back();
  const auto lo = static_cast<std::size_t>(std::floor(u));
  const double frac = u - static_cast<double>(lo);
  return base[lo] + frac * (base[lo + 1] - base[lo]);
}

std::vector<double> render_profile(const WaveState& state, int m_panels, const WaveParams& params) {
  if (m_panels < static_cast<int>(state.base.size())) throw InvalidInput("m_panels must be at least n_regions");
  std::vector<double> heights(static_cast<std::size_t>(m_panels));
  for (int j = 0; j < m_panels; ++j) {
    const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(m_panels);
    const double local = sample_base(state.base, x);
    const double ripple = params.ripple_amplitude * local * std::sin(state.phase + params.ripple_wavenumber * j);
    heights[static_cast<std::size_t>(j)] = std::clamp(local + ripple, 0.0, 1.0);
  }
  return heights;
}

}  // namespace wavewall::wave
