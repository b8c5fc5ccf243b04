#pragma once

// Behavioral reference of the servo controller firmware: receive state
// machine plus the failsafe watchdog. Time is always supplied by the caller.

#include <cstdint>
#include <span>
#include <vector>

#include "wavewall/protocol.hpp"

namespace wavewall::protocol {

inline constexpr std::int64_t kDefaultFailsafeTimeoutMs = 500;

struct DeviceModel {
  std::vector<std::uint16_t> current_pulses;
  std::vector<std::uint16_t> rest_pulses;
  std::int64_t last_valid_rx_ms = 0;
  std::int64_t last_step_ms = 0;
  bool failsafe_engaged = false;
  std::int64_t failsafe_timeout_ms = kDefaultFailsafeTimeoutMs;

  std::uint8_t tx_seq = 0;
  std::uint64_t engagements = 0;
  std::uint64_t acks_sent = 0;
  StreamDecoder rx;

  /// Device powered up at `now` holding the rest pose.
  static DeviceModel boot(std::vector<std::uint16_t> rest_pulses, std::int64_t now,
                          std::int64_t failsafe_timeout_ms = kDefaultFailsafeTimeoutMs);
};

struct DeviceStep {
  DeviceModel model;
  std::vector<std::uint8_t> tx;
};

/// Feeds `rx` to the device at time `now`.
///
/// Each valid SET_TARGETS (with one pulse per servo) applies the pulses and is
/// answered with an ACK echoing its seq; a valid HEARTBEAT only feeds the
/// watchdog. Any valid frame clears an engaged failsafe. When more than
/// `failsafe_timeout_ms` passes without one, the device drops to the rest pose
/// and reports FAILSAFE_TRIGGERED once for that engagement.
DeviceStep device_step(DeviceModel model, std::span<const std::uint8_t> rx, std::int64_t now);

}  // namespace wavewall::protocol
