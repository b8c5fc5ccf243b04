#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wavewall::actuation {

inline constexpr int kPulseFloorUs = 500;
inline constexpr int kPulseCeilUs = 2500;

/// Safe mechanical window of one servo and the pulse widths at its ends.
/// The living-hinge lift is treated as linear in between.
struct ServoCalibration {
  double angle_min = 10.0;  // degrees
  double angle_max = 80.0;
  int pulse_min = 1000;  // microseconds at angle_min
  int pulse_max = 2000;  // microseconds at angle_max
  bool inverted = false;

  friend bool operator==(const ServoCalibration&, const ServoCalibration&) = default;
};

void validate(const ServoCalibration& calib);

struct ActuatorLimits {
  double max_speed = 60.0;  // degrees / s
};

void validate(const ActuatorLimits& limits);

double height_to_angle(double h, const ServoCalibration& calib);

/// Moves each angle toward its target by at most max_speed * dt.
std::vector<double> slew_limit(std::span<const double> prev, std::span<const double> target, double dt,
                               const ActuatorLimits& limits);

/// Linear angle -> pulse map, rounded half-up and clamped to the pulse window.
std::uint16_t angle_to_pulse(double angle, const ServoCalibration& calib);

/// Angle of the fully lowered panel (height 0).
inline double rest_angle(const ServoCalibration& calib) { return height_to_angle(0.0, calib); }

}  // namespace wavewall::actuation
