#include <algorithm>
#include <chrono>
#include <thread>

#include "wavewall/clock.hpp"
#include "wavewall/error.hpp"
#include "wavewall/frame_source.hpp"
#include "wavewall/pgm.hpp"

namespace wavewall::runtime {

std::int64_t SteadyClock::now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
}

void SteadyClock::sleep_until_ms(std::int64_t t) { std::this_thread::sleep_until(start_ + std::chrono::milliseconds(t)); }

PgmDirectorySource::PgmDirectorySource(const std::filesystem::path& dir, double fps) {
  if (!(fps > 0.0)) throw InvalidInput("frame rate must be positive");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InvalidInput("no .pgm frames in " + dir.string());
  for (const auto& f : files) frames_.push_back(vision::read_pgm(f));

  producer_ = std::thread([this, fps, mailbox = mailbox()] {
    const auto period = std::chrono::duration<double>(1.0 / fps);
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; !stop_.load(); ++i) {
      const auto due = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(period * i);
      std::this_thread::sleep_until(due);
      vision::Frame frame = frames_[i % frames_.size()];
      frame.timestamp_ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      mailbox->put(std::move(frame));
    }
  });
}

PgmDirectorySource::~PgmDirectorySource() {
  stop_ = true;
  if (producer_.joinable()) producer_.join();
}

}  // namespace wavewall::runtime
