#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavewall/config.hpp"
#include "wavewall/device.hpp"

namespace wavewall::runtime {

class Transport {
 public:
  virtual ~Transport() = default;

  /// Returns false when the bytes could not be delivered.
  virtual bool send(std::span<const std::uint8_t> bytes, std::int64_t now_ms) = 0;

  /// Bytes that arrived from the device since the last call.
  virtual std::vector<std::uint8_t> receive(std::int64_t now_ms) = 0;

  virtual bool link_up() const = 0;

  /// Device failsafe state when the transport can observe it directly.
  virtual std::optional<bool> device_failsafe() const { return std::nullopt; }

  virtual std::string describe() const = 0;
};

/// In-process link to the device reference model.
class LoopbackTransport final : public Transport {
 public:
  LoopbackTransport(std::vector<std::uint16_t> rest_pulses, std::int64_t boot_ms, std::int64_t failsafe_timeout_ms);

  bool send(std::span<const std::uint8_t> bytes, std::int64_t now_ms) override;
  std::vector<std::uint8_t> receive(std::int64_t now_ms) override;
  bool link_up() const override { return true; }
  std::optional<bool> device_failsafe() const override { return device_.failsafe_engaged; }
  std::string describe() const override { return "loopback"; }

  const protocol::DeviceModel& device() const noexcept { return device_; }

 private:
  protocol::DeviceModel device_;
  std::vector<std::uint8_t> inbound_;
};

/// Appends every outbound byte to a file; nothing ever comes back.
class FileTransport final : public Transport {
 public:
  explicit FileTransport(const std::filesystem::path& path);

  bool send(std::span<const std::uint8_t> bytes, std::int64_t now_ms) override;
  std::vector<std::uint8_t> receive(std::int64_t) override { return {}; }
  bool link_up() const override { return static_cast<bool>(out_); }
  std::string describe() const override { return "file:" + path_.string(); }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Raw 8N1 serial character device. On a write or read failure the port is
/// closed and reopened after an exponential backoff (100 ms doubling to 5 s);
/// the device's own failsafe covers the gap.
class SerialTransport final : public Transport {
 public:
  SerialTransport(std::string path, int baud);
  ~SerialTransport() override;
  SerialTransport(const SerialTransport&) = delete;
  SerialTransport& operator=(const SerialTransport&) = delete;

  bool send(std::span<const std::uint8_t> bytes, std::int64_t now_ms) override;
  std::vector<std::uint8_t> receive(std::int64_t now_ms) override;
  bool link_up() const override { return fd_ >= 0; }
  std::string describe() const override { return "serial:" + path_; }

  std::int64_t backoff_ms() const noexcept { return backoff_ms_; }

 private:
  bool ensure_open(std::int64_t now_ms);
  void fail(std::int64_t now_ms);

  std::string path_;
  int baud_;
  int fd_ = -1;
  std::int64_t retry_at_ms_ = 0;
  std::int64_t backoff_ms_ = 0;
};

inline constexpr std::int64_t kInitialBackoffMs = 100;
inline constexpr std::int64_t kMaxBackoffMs = 5000;

/// Opens the transport named by `config.transport`.
std::unique_ptr<Transport> make_transport(const RuntimeConfig& config, std::vector<std::uint16_t> rest_pulses,
                                          std::int64_t now_ms);

}  // namespace wavewall::runtime
