#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <thread>
#include <vector>

#include "wavewall/mailbox.hpp"
#include "wavewall/scenario.hpp"
#include "wavewall/vision.hpp"

namespace wavewall::runtime {

class FrameSource {
 public:
  virtual ~FrameSource() = default;

  /// Latest frame available at tick `tick`, if any newer than the last poll.
  virtual std::optional<vision::Frame> poll(std::uint64_t tick, std::int64_t now_ms) = 0;

  /// Empty-scene frame to seed the background, when the source has one.
  virtual std::optional<vision::Frame> background_plate() { return std::nullopt; }
};

class NullFrameSource final : public FrameSource {
 public:
  std::optional<vision::Frame> poll(std::uint64_t, std::int64_t) override { return std::nullopt; }
};

/// Consumer side of a latest-frame-wins mailbox filled by a producer thread.
class MailboxFrameSource : public FrameSource {
 public:
  MailboxFrameSource() : mailbox_(std::make_shared<LatestMailbox<vision::Frame>>()) {}

  std::optional<vision::Frame> poll(std::uint64_t, std::int64_t) override { return mailbox_->take(); }

  std::shared_ptr<LatestMailbox<vision::Frame>> mailbox() const { return mailbox_; }

 private:
  std::shared_ptr<LatestMailbox<vision::Frame>> mailbox_;
};

/// Renders a scenario frame for exactly the tick being processed.
class ScenarioFrameSource final : public FrameSource {
 public:
  ScenarioFrameSource(const sim::Scenario& scenario, int width, int height) : camera_(scenario, width, height) {}

  std::optional<vision::Frame> poll(std::uint64_t tick, std::int64_t now_ms) override {
    return camera_.frame_at(tick, now_ms);
  }
  std::optional<vision::Frame> background_plate() override { return camera_.plate(); }

 private:
  sim::ScenarioCamera camera_;
};

/// Replays a directory of .pgm files (sorted by name, looping) into a mailbox
/// from its own thread at `fps`. The first file serves as the background plate.
class PgmDirectorySource final : public MailboxFrameSource {
 public:
  PgmDirectorySource(const std::filesystem::path& dir, double fps);
  ~PgmDirectorySource() override;

  std::optional<vision::Frame> background_plate() override { return frames_.front(); }

 private:
  std::vector<vision::Frame> frames_;
  std::atomic<bool> stop_{false};
  std::thread producer_;
};

}  // namespace wavewall::runtime
