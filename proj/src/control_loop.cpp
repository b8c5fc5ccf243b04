#include "wavewall/control_loop.hpp"

#include <type_traits>
#include <variant>

#include "wavewall/pipeline.hpp"
#include "wavewall/scenario.hpp"
#include "wavewall/simulator.hpp"

namespace wavewall::runtime {
namespace {

struct LoopState {
  Mode mode;
  std::optional<double> virtual_x;
  bool host_failsafe = false;
};

void reset_vision_for(Mode mode, Pipeline& pipeline, FrameSource& frames) {
  const auto& v = pipeline.config().vision;
  if (mode == Mode::Virtual) {
    pipeline.prime_background(sim::synthesize_frame(std::nullopt, v.frame_width, v.frame_height));
  } else if (auto plate = frames.background_plate()) {
    pipeline.prime_background(*plate);
  } else {
    pipeline.clear_background();
  }
}

void apply_control(std::vector<ControlMessage> messages, Pipeline& pipeline, FrameSource& frames, LoopState& state,
                   LoopStats& stats, const LoopHooks& hooks) {
  if (messages.empty()) return;
  RuntimeConfig next = pipeline.config();
  const Mode mode_before = state.mode;
  for (auto& msg : messages) {
    try {
      std::visit(
          [&](auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SetParam>) {
              set_parameter(next, m.name, m.value);
            } else if constexpr (std::is_same_v<T, VirtualVisitor>) {
              state.virtual_x = m.x;
            } else {
              state.mode = m.mode;
            }
          },
          msg);
      ++stats.control_applied;
    } catch (const std::exception& e) {
      ++stats.control_rejected;
      if (hooks.on_control_error) hooks.on_control_error(e.what());
    }
  }
  pipeline.reconfigure(std::move(next));
  if (state.mode != mode_before) reset_vision_for(state.mode, pipeline, frames);
}

}  // namespace

LoopStats control_loop(const RuntimeConfig& config, FrameSource& frames, Transport& transport,
                       ControlChannel& control, Clock& clock, const std::atomic<bool>& stop, const LoopHooks& hooks,
                       const LoopOptions& options) {
  Pipeline pipeline(config);
  LoopState state{options.initial_mode, std::nullopt};
  reset_vision_for(state.mode, pipeline, frames);
  protocol::StreamDecoder replies;
  LoopStats stats;
  const std::int64_t start = clock.now_ms();

  for (std::uint64_t k = 0; !stop.load() && (!options.max_ticks || k < *options.max_ticks); ++k) {
    const std::int64_t now = start + tick_time_ms(k, config.tick_hz);
    clock.sleep_until_ms(now);

    apply_control(control.drain(), pipeline, frames, state, stats, hooks);
    const auto& cfg = pipeline.config();

    // Always drain the source so a stale camera frame never outlives a mode switch.
    std::optional<vision::Frame> frame = frames.poll(k, now);
    if (frame) ++stats.frames_received;
    if (state.mode == Mode::Virtual) {
      frame = sim::synthesize_frame(state.virtual_x, cfg.vision.frame_width, cfg.vision.frame_height, now);
    } else if (frame && (frame->width != cfg.vision.frame_width || frame->height != cfg.vision.frame_height)) {
      frame.reset();  // wrong geometry counts as no frame
      ++stats.frames_rejected;
    }

    const TickOutput out = pipeline.step(frame, now);
    if (transport.send(out.wire, now)) {
      ++(out.message.type == protocol::MsgType::SetTargets ? stats.set_targets_sent : stats.heartbeats_sent);
    } else {
      ++stats.send_failures;
    }
    for (const auto& reply : replies.push(transport.receive(now))) {
      if (reply.type == protocol::MsgType::Ack) {
        ++stats.acks_received;
        state.host_failsafe = false;
      } else if (reply.type == protocol::MsgType::FailsafeTriggered) {
        ++stats.failsafe_reports;
        state.host_failsafe = true;
      }
    }
    const bool failsafe = transport.device_failsafe().value_or(state.host_failsafe);

    if (hooks.on_row) hooks.on_row(sim::make_row(out, cfg.tick_hz, out.wire.size(), failsafe));
    if (hooks.on_snapshot) {
      auto snap = std::make_shared<TelemetrySnapshot>();
      snap->tick = out.tick;
      snap->t_s = static_cast<double>(out.tick) / cfg.tick_hz;
      snap->mode = state.mode;
      snap->occupied = out.presence.occupied;
      snap->centroid_x = out.presence.centroid_x;
      snap->activity_ratio = out.presence.activity_ratio;
      snap->region = out.region;
      snap->dwell_ms = out.dwell_ms;
      snap->n_regions = cfg.n_regions;
      snap->base = out.base;
      snap->panels = out.panels;
      snap->angles = out.angles;
      if (state.mode == Mode::Virtual) snap->virtual_x = state.virtual_x;
      snap->link_up = transport.link_up();
      snap->failsafe = failsafe;
      hooks.on_snapshot(std::move(snap));
    }
    ++stats.ticks;
  }

  const auto rest = protocol::encode(pipeline.rest_message());
  const std::int64_t end = start + tick_time_ms(stats.ticks, config.tick_hz);
  clock.sleep_until_ms(end);
  if (transport.send(rest, end)) {
    ++stats.set_targets_sent;
  } else {
    ++stats.send_failures;
  }
  return stats;
}

}  // namespace wavewall::runtime
