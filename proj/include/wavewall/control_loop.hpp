#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "wavewall/clock.hpp"
#include "wavewall/config.hpp"
#include "wavewall/frame_source.hpp"
#include "wavewall/mailbox.hpp"
#include "wavewall/telemetry.hpp"
#include "wavewall/trace.hpp"
#include "wavewall/transport.hpp"

namespace wavewall::runtime {

/// Control messages from any thread; drained by the loop between ticks.
using ControlChannel = DrainQueue<ControlMessage>;

struct LoopHooks {
  std::function<void(const sim::TraceRow&)> on_row;
  std::function<void(std::shared_ptr<const TelemetrySnapshot>)> on_snapshot;
  std::function<void(const std::string&)> on_control_error;
};

struct LoopOptions {
  Mode initial_mode = Mode::Live;
  std::optional<std::uint64_t> max_ticks;
};

struct LoopStats {
  std::uint64_t ticks = 0;
  std::uint64_t set_targets_sent = 0;
  std::uint64_t heartbeats_sent = 0;
  std::uint64_t send_failures = 0;
  std::uint64_t frames_received = 0;
  std::uint64_t frames_rejected = 0;
  std::uint64_t acks_received = 0;
  std::uint64_t failsafe_reports = 0;
  std::uint64_t control_applied = 0;
  std::uint64_t control_rejected = 0;
};

/// Runs the live pipeline at `config.tick_hz` until `stop` is set or
/// `options.max_ticks` ticks have run, then sends the rest pose.
///
/// Per tick: apply queued control messages (all or nothing per message,
/// before any processing), take the newest frame (or synthesize one from the
/// virtual visitor), step the pipeline, send SET_TARGETS or HEARTBEAT, read
/// device replies, then publish a snapshot and trace row.
LoopStats control_loop(const RuntimeConfig& config, FrameSource& frames, Transport& transport,
                       ControlChannel& control, Clock& clock, const std::atomic<bool>& stop, const LoopHooks& hooks = {},
                       const LoopOptions& options = {});

}  // namespace wavewall::runtime
