#pragma once

// One tick of the host pipeline: vision -> occupancy -> wave -> render ->
// actuation -> wire frame. Shared by the simulator and the live control loop
// so both produce identical traces for identical inputs.

#include <cstdint>
#include <optional>
#include <vector>

#include "wavewall/config.hpp"
#include "wavewall/protocol.hpp"
#include "wavewall/vision.hpp"

namespace wavewall {

/// Scheduled time of tick `k` in whole milliseconds.
std::int64_t tick_time_ms(std::uint64_t tick, int tick_hz) noexcept;

struct TickOutput {
  std::uint64_t tick = 0;
  std::int64_t now_ms = 0;
  vision::PresenceObservation presence;
  std::optional<int> region;  // committed (debounced) region
  std::int64_t dwell_ms = 0;
  std::vector<double> base;
  std::vector<double> panels;
  std::vector<double> angles;
  std::vector<std::uint16_t> pulses;
  protocol::Message message;
  std::vector<std::uint8_t> wire;
};

class Pipeline {
 public:
  /// Throws ConfigError if `config` is invalid.
  explicit Pipeline(RuntimeConfig config);

  /// Seeds the background model from an empty-scene frame. Without a plate
  /// the first frame passed to `step` becomes the background.
  void prime_background(const vision::Frame& plate);
  void clear_background() noexcept { background_.reset(); }

  /// Runs one tick at `now_ms`. A missing frame counts as an unoccupied view.
  TickOutput step(const std::optional<vision::Frame>& frame, std::int64_t now_ms);

  /// SET_TARGETS commanding every panel fully lowered, bypassing slew limits.
  protocol::Message rest_message();

  /// Swaps in new tunables. Geometry (tick rate, region/panel counts, frame
  /// size, servo list) must not change.
  void reconfigure(RuntimeConfig config);

  const RuntimeConfig& config() const noexcept { return config_; }
  const std::vector<double>& rest_angles() const noexcept { return rest_angles_; }
  std::vector<std::uint16_t> rest_pulses() const;
  std::uint64_t ticks() const noexcept { return tick_; }

 private:
  std::uint8_t next_seq() noexcept { return seq_++; }

  RuntimeConfig config_;
  std::optional<vision::BackgroundModel> background_;
  occupancy::OccupancyState occupancy_;
  wave::WaveState wave_;
  std::vector<double> rest_angles_;
  std::vector<double> angles_;
  std::optional<std::vector<double>> last_sent_angles_;
  std::uint8_t seq_ = 0;
  std::uint64_t tick_ = 0;
};

/// Angles within this many degrees of the last SET_TARGETS go out as a HEARTBEAT.
inline constexpr double kHeartbeatDeadbandDeg = 0.1;

}  // namespace wavewall
