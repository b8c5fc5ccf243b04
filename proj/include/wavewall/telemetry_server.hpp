#pragma once

// Telemetry endpoint: one TCP port serving
//   GET /ws  (WebSocket upgrade) snapshots out, control messages in
//   GET /... static console assets from `static_dir`, when configured
// All socket work happens on one internal I/O thread.

#include <cstdint>
#include <memory>
#include <string>

#include "wavewall/control_loop.hpp"
#include "wavewall/telemetry.hpp"

namespace wavewall::runtime {

class TelemetryServer {
 public:
  /// `bind` is "host:port"; port 0 picks a free port.
  TelemetryServer(std::string bind, std::string static_dir, ControlChannel& control);
  ~TelemetryServer();
  TelemetryServer(const TelemetryServer&) = delete;
  TelemetryServer& operator=(const TelemetryServer&) = delete;

  /// Binds and starts serving; throws std::runtime_error if binding fails.
  void start();
  void stop();

  std::uint16_t port() const;

  /// Broadcasts to every connected client; new clients get the latest one.
  void publish(std::shared_ptr<const TelemetrySnapshot> snapshot);

  std::size_t client_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wavewall::runtime
