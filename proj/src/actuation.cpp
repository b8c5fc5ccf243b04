#include "wavewall/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavewall/error.hpp"

namespace wavewall::actuation {

void validate(const ServoCalibration& calib) {
  if (!(calib.angle_min < calib.angle_max)) throw ConfigError("angle_min", "must be below angle_max");
  if (calib.pulse_min == calib.pulse_max) throw ConfigError("pulse_min", "must differ from pulse_max");
  for (const int p : {calib.pulse_min, calib.pulse_max}) {
    if (p < kPulseFloorUs || p > kPulseCeilUs) {
      throw ConfigError(p == calib.pulse_min ? "pulse_min" : "pulse_max",
                        "must lie in [" + std::to_string(kPulseFloorUs) + ", " + std::to_string(kPulseCeilUs) + "] us");
    }
  }
}

void validate(const ActuatorLimits& limits) {
  if (!(limits.max_speed > 0.0) || !std::isfinite(limits.max_speed)) {
    throw ConfigError("actuator.max_speed", "must be strictly positive");
  }
}

double height_to_angle(double h, const ServoCalibration& calib) {
  if (!(h >= 0.0 && h <= 1.0)) throw InvalidInput("height must lie in [0, 1]");
  const double span = calib.angle_max - calib.angle_min;
  return calib.inverted ? calib.angle_max - h * span : calib.angle_min + h * span;
}

std::vector<double> slew_limit(std::span<const double> prev, std::span<const double> target, double dt,
                               const ActuatorLimits& limits) {
  if (prev.size() != target.size()) throw InvalidInput("slew_limit: angle vectors differ in length");
  if (!(dt > 0.0)) throw InvalidInput("slew_limit: dt must be positive");
  const double step = limits.max_speed * dt;
  std::vector<double> out(prev.size());
  for (std::size_t i = 0; i < prev.size(); ++i) {
    const double diff = target[i] - prev[i];
    if (std::fabs(diff) <= step) {
      out[i] = target[i];
    } else {
      double next = diff > 0.0 ? prev[i] + step : prev[i] - step;
      // Rounding of prev +/- step can overshoot the bound by an ulp.
      while (std::fabs(next - prev[i]) > step) next = std::nextafter(next, prev[i]);
      out[i] = next;
    }
  }
  return out;
}

std::uint16_t angle_to_pulse(double angle, const ServoCalibration& calib) {
  if (!(angle >= calib.angle_min && angle <= calib.angle_max)) {
    throw InvalidInput("angle " + std::to_string(angle) + " outside calibrated range");
  }
  const double frac = (angle - calib.angle_min) / (calib.angle_max - calib.angle_min);
  const double pulse = calib.pulse_min + frac * (calib.pulse_max - calib.pulse_min);
  const double rounded = std::floor(pulse + 0.5);
  const double lo = std::min(calib.pulse_min, calib.pulse_max);
  const double hi = std::max(calib.pulse_min, calib.pulse_max);
  return static_cast<std::uint16_t>(std::clamp(rounded, lo, hi));
}

}  // namespace wavewall::actuation
