#include "wavewall/simulator.hpp"

namespace wavewall::sim {

TraceRow make_row(const TickOutput& out, int tick_hz, std::size_t tx_bytes, bool failsafe) {
  TraceRow row;
  row.tick = out.tick;
  row.t_s = static_cast<double>(out.tick) / tick_hz;
  row.occupied = out.presence.occupied;
  row.centroid_x = out.presence.centroid_x;
  row.region = out.region;
  row.dwell_ms = out.dwell_ms;
  row.base = out.base;
  row.panels = out.panels;
  row.angles = out.angles;
  row.tx_bytes = tx_bytes;
  row.failsafe = failsafe;
  return row;
}

std::vector<TraceRow> run_scenario(const Scenario& scenario, const RuntimeConfig& config) {
  validate(scenario);
  const RuntimeConfig cfg = scenario_config(scenario, config);
  Pipeline pipeline(cfg);
  ScenarioCamera camera(scenario, cfg.vision.frame_width, cfg.vision.frame_height);
  pipeline.prime_background(camera.plate());
  auto device = protocol::DeviceModel::boot(pipeline.rest_pulses(), 0, cfg.device.failsafe_timeout_ms);

  const std::uint64_t ticks = scenario.tick_count();
  std::vector<TraceRow> rows;
  rows.reserve(ticks);
  for (std::uint64_t k = 0; k < ticks; ++k) {
    const std::int64_t now = tick_time_ms(k, cfg.tick_hz);
    const auto out = pipeline.step(camera.frame_at(k, now), now);
    auto step = protocol::device_step(std::move(device), out.wire, now);
    device = std::move(step.model);
    rows.push_back(make_row(out, cfg.tick_hz, out.wire.size(), device.failsafe_engaged));
  }
  return rows;
}

}  // namespace wavewall::sim
