#pragma once

#include <vector>

#include "wavewall/config.hpp"
#include "wavewall/device.hpp"
#include "wavewall/pipeline.hpp"
#include "wavewall/scenario.hpp"
#include "wavewall/trace.hpp"

namespace wavewall::sim {

TraceRow make_row(const TickOutput& out, int tick_hz, std::size_t tx_bytes, bool failsafe);

/// Fixed-timestep run of the whole pipeline against the device model on a
/// loopback link. Throws ConfigError before the first tick if the scenario's
/// effective configuration is invalid.
std::vector<TraceRow> run_scenario(const Scenario& scenario, const RuntimeConfig& config);

}  // namespace wavewall::sim
