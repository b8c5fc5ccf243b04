#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

namespace wavewall::runtime {

/// Capacity-1 slot: a new value replaces an unread one.
template <typename T>
class LatestMailbox {
 public:
  void put(T value) {
    std::lock_guard lock(mu_);
    if (slot_) ++dropped_;
    slot_ = std::move(value);
  }

  std::optional<T> take() {
    std::lock_guard lock(mu_);
    std::optional<T> out = std::move(slot_);
    slot_.reset();
    return out;
  }

  std::uint64_t dropped() const {
    std::lock_guard lock(mu_);
    return dropped_;
  }

 private:
  mutable std::mutex mu_;
  std::optional<T> slot_;
  std::uint64_t dropped_ = 0;
};

/// Unbounded multi-producer queue drained in one go by the consumer.
template <typename T>
class DrainQueue {
 public:
  void push(T value) {
    std::lock_guard lock(mu_);
    items_.push_back(std::move(value));
  }

  std::vector<T> drain() {
    std::lock_guard lock(mu_);
    std::vector<T> out(std::make_move_iterator(items_.begin()), std::make_move_iterator(items_.end()));
    items_.clear();
    return out;
  }

 private:
  std::mutex mu_;
  std::deque<T> items_;
};

}  // namespace wavewall::runtime
