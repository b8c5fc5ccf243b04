#pragma once

#include <chrono>
#include <cstdint>

namespace wavewall::runtime {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ms() = 0;
  virtual void sleep_until_ms(std::int64_t t) = 0;
};

/// Wall time measured from construction.
class SteadyClock final : public Clock {
 public:
  SteadyClock() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t now_ms() override;
  void sleep_until_ms(std::int64_t t) override;

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Jumps straight to the requested time; for tests and offline runs.
class SimulatedClock final : public Clock {
 public:
  std::int64_t now_ms() override { return now_; }
  void sleep_until_ms(std::int64_t t) override {
    if (t > now_) now_ = t;
  }

 private:
  std::int64_t now_ = 0;
};

}  // namespace wavewall::runtime
