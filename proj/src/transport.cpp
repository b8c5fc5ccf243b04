#include "wavewall/transport.hpp"

#include <fcntl.h>
#include <termios.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>

#include "wavewall/error.hpp"

namespace wavewall::runtime {
namespace {

speed_t to_speed(int baud) {
  switch (baud) {
    case 9600: return B9600;
    case 19200: return B19200;
    case 38400: return B38400;
    case 57600: return B57600;
    case 115200: return B115200;
    case 230400: return B230400;
    default: throw ConfigError("transport.baud", "unsupported baud rate " + std::to_string(baud));
  }
}

}  // namespace

LoopbackTransport::LoopbackTransport(std::vector<std::uint16_t> rest_pulses, std::int64_t boot_ms,
                                     std::int64_t failsafe_timeout_ms)
    : device_(protocol::DeviceModel::boot(std::move(rest_pulses), boot_ms, failsafe_timeout_ms)) {}

bool LoopbackTransport::send(std::span<const std::uint8_t> bytes, std::int64_t now_ms) {
  auto step = protocol::device_step(std::move(device_), bytes, now_ms);
  device_ = std::move(step.model);
  inbound_.insert(inbound_.end(), step.tx.begin(), step.tx.end());
  return true;
}

std::vector<std::uint8_t> LoopbackTransport::receive(std::int64_t now_ms) {
  send({}, now_ms);  // lets the watchdog run even when the host is silent
  return std::exchange(inbound_, {});
}

FileTransport::FileTransport(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw ConfigError("transport.path", "cannot open " + path.string());
}

bool FileTransport::send(std::span<const std::uint8_t> bytes, std::int64_t) {
  out_.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out_.flush();
  return static_cast<bool>(out_);
}

SerialTransport::SerialTransport(std::string path, int baud) : path_(std::move(path)), baud_(baud) {
  to_speed(baud_);
  ensure_open(0);
}

SerialTransport::~SerialTransport() {
  if (fd_ >= 0) ::close(fd_);
}

bool SerialTransport::ensure_open(std::int64_t now_ms) {
  if (fd_ >= 0) return true;
  if (now_ms < retry_at_ms_) return false;
  const int fd = ::open(path_.c_str(), O_RDWR | O_NOCTTY | O_NONBLOCK);
  if (fd < 0) {
    fail(now_ms);
    return false;
  }
  termios tio{};
  if (::tcgetattr(fd, &tio) != 0) {
    ::close(fd);
    fail(now_ms);
    return false;
  }
  ::cfmakeraw(&tio);
  tio.c_cflag &= ~static_cast<tcflag_t>(PARENB | CSTOPB | CSIZE);
  tio.c_cflag |= CS8 | CLOCAL | CREAD;
  tio.c_cc[VMIN] = 0;
  tio.c_cc[VTIME] = 0;
  const speed_t speed = to_speed(baud_);
  ::cfsetispeed(&tio, speed);
  ::cfsetospeed(&tio, speed);
  if (::tcsetattr(fd, TCSANOW, &tio) != 0) {
    ::close(fd);
    fail(now_ms);
    return false;
  }
  fd_ = fd;
  backoff_ms_ = 0;
  return true;
}

void SerialTransport::fail(std::int64_t now_ms) {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  backoff_ms_ = backoff_ms_ == 0 ? kInitialBackoffMs : std::min(backoff_ms_ * 2, kMaxBackoffMs);
  retry_at_ms_ = now_ms + backoff_ms_;
}

bool SerialTransport::send(std::span<const std::uint8_t> bytes, std::int64_t now_ms) {
  if (!ensure_open(now_ms)) return false;
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::write(fd_, bytes.data() + done, bytes.size() - done);
    if (n > 0) {
      done += static_cast<std::size_t>(n);
    } else if (n < 0 && errno == EINTR) {
      continue;
    } else if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      return false;  // output buffer full; drop this frame rather than stall the tick
    } else {
      fail(now_ms);
      return false;
    }
  }
  return true;
}

std::vector<std::uint8_t> SerialTransport::receive(std::int64_t now_ms) {
  std::vector<std::uint8_t> out;
  if (!ensure_open(now_ms)) return out;
  std::uint8_t buf[256];
  while (true) {
    const ssize_t n = ::read(fd_, buf, sizeof(buf));
    if (n > 0) {
      out.insert(out.end(), buf, buf + n);
    } else if (n < 0 && errno == EINTR) {
      continue;
    } else if (n == 0 || errno == EAGAIN || errno == EWOULDBLOCK) {
      break;
    } else {
      fail(now_ms);
      break;
    }
  }
  return out;
}

std::unique_ptr<Transport> make_transport(const RuntimeConfig& config, std::vector<std::uint16_t> rest_pulses,
                                          std::int64_t now_ms) {
  switch (config.transport.kind) {
    case TransportKind::Loopback:
      return std::make_unique<LoopbackTransport>(std::move(rest_pulses), now_ms, config.device.failsafe_timeout_ms);
    case TransportKind::File:
      return std::make_unique<FileTransport>(config.transport.path);
    case TransportKind::Serial:
      return std::make_unique<SerialTransport>(config.transport.path, config.transport.baud);
  }
  throw ConfigError("transport.kind", "unknown transport");
}

}  // namespace wavewall::runtime
