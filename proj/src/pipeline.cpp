#include "wavewall/pipeline.hpp"

#include <cmath>

#include "wavewall/actuation.hpp"
#include "wavewall/error.hpp"

namespace wavewall {

std::int64_t tick_time_ms(std::uint64_t tick, int tick_hz) noexcept {
  return std::llround(static_cast<double>(tick) * 1000.0 / static_cast<double>(tick_hz));
}

Pipeline::Pipeline(RuntimeConfig config)
    : config_(std::move(config)), wave_(wave::WaveState::dormant(std::max(config_.n_regions, 2))) {
  validate(config_);
  wave_ = wave::WaveState::dormant(config_.n_regions);
  rest_angles_.reserve(config_.servos.size());
  for (const auto& s : config_.servos) rest_angles_.push_back(actuation::rest_angle(s));
  angles_ = rest_angles_;
}

void Pipeline::prime_background(const vision::Frame& plate) {
  background_ = vision::init_background(plate, config_.vision.alpha);
}

std::vector<std::uint16_t> Pipeline::rest_pulses() const {
  std::vector<std::uint16_t> out;
  out.reserve(rest_angles_.size());
  for (std::size_t i = 0; i < rest_angles_.size(); ++i) {
    out.push_back(actuation::angle_to_pulse(rest_angles_[i], config_.servos[i]));
  }
  return out;
}

protocol::Message Pipeline::rest_message() {
  const auto pulses = rest_pulses();
  return protocol::set_targets(next_seq(), pulses);
}

void Pipeline::reconfigure(RuntimeConfig config) {
  validate(config);
  const auto& v = config.vision;
  if (config.tick_hz != config_.tick_hz || config.n_regions != config_.n_regions ||
      config.m_panels != config_.m_panels || v.frame_width != config_.vision.frame_width ||
      v.frame_height != config_.vision.frame_height || config.servos != config_.servos) {
    throw ConfigError("", "live reconfiguration cannot change pipeline geometry");
  }
  config_ = std::move(config);
}

TickOutput Pipeline::step(const std::optional<vision::Frame>& frame, std::int64_t now_ms) {
  const auto& cfg = config_;
  const double dt = cfg.dt();
  TickOutput out;
  out.tick = tick_;
  out.now_ms = now_ms;
  out.presence.timestamp_ms = now_ms;

  if (frame) {
    if (!background_) {
      background_ = vision::init_background(*frame, cfg.vision.alpha);
      out.presence.timestamp_ms = frame->timestamp_ms;
    } else {
      out.presence = vision::detect_presence(*background_, *frame, cfg.vision.diff_threshold, cfg.vision.min_activity);
      background_ = vision::update_background_selective(std::move(*background_), *frame, cfg.vision.diff_threshold,
                                                        cfg.vision.alpha, cfg.vision.foreground_alpha);
    }
  }

  std::optional<int> raw_region;
  if (out.presence.occupied) raw_region = vision::quantize_region(*out.presence.centroid_x, cfg.n_regions);
  occupancy_ = occupancy::update_occupancy(occupancy_, out.presence, raw_region, now_ms, cfg.occupancy);
  out.region = occupancy_.current_region;
  out.dwell_ms = occupancy_.dwell_ms;

  wave_ = wave::step_wave(std::move(wave_), occupancy_.current_region, dt, cfg.wave);
  out.base = wave_.base;
  out.panels = wave::render_profile(wave_, cfg.m_panels, cfg.wave);

  std::vector<double> targets(out.panels.size());
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = actuation::height_to_angle(out.panels[i], cfg.servos[i]);
  angles_ = actuation::slew_limit(angles_, targets, dt, cfg.actuator);
  out.angles = angles_;
  out.pulses.reserve(angles_.size());
  for (std::size_t i = 0; i < angles_.size(); ++i) out.pulses.push_back(actuation::angle_to_pulse(angles_[i], cfg.servos[i]));

  bool idle = last_sent_angles_.has_value();
  if (idle) {
    for (std::size_t i = 0; i < angles_.size() && idle; ++i) {
      idle = std::fabs(angles_[i] - (*last_sent_angles_)[i]) < kHeartbeatDeadbandDeg;
    }
  }
  if (idle) {
    out.message = protocol::heartbeat(next_seq());
  } else {
    out.message = protocol::set_targets(next_seq(), out.pulses);
    last_sent_angles_ = angles_;
  }
  out.wire = protocol::encode(out.message);
  ++tick_;
  return out;
}

}  // namespace wavewall
