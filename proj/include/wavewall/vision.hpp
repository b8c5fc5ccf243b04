#pragma once

// Presence sensing from grayscale frames: a running per-pixel background
// model, frame differencing against it, and the horizontal centroid of the
// resulting foreground mask.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wavewall/kernels.hpp"

namespace wavewall::vision {

inline constexpr int kMinFrameDim = 8;

struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major luma
  std::int64_t timestamp_ms = 0;

  std::size_t size() const noexcept { return pixels.size(); }
};

/// Throws InvalidInput unless width, height >= kMinFrameDim and the pixel
/// buffer is exactly width * height.
void validate(const Frame& frame);

class BackgroundModel {
 public:
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double alpha() const noexcept { return alpha_; }
  std::span<const double> mean() const noexcept { return mean_; }

 private:
  BackgroundModel(int w, int h, std::vector<double> mean, double alpha)
      : width_(w), height_(h), mean_(std::move(mean)), alpha_(alpha) {}

  friend BackgroundModel init_background(const Frame&, double);
  friend BackgroundModel update_background(BackgroundModel, const Frame&, double);
  friend BackgroundModel update_background_selective(BackgroundModel, const Frame&, double, double, double);

  int width_;
  int height_;
  std::vector<double> mean_;
  double alpha_;
};

inline constexpr double kDefaultAlpha = 0.02;

BackgroundModel init_background(const Frame& frame, double alpha = kDefaultAlpha);

/// Exponential moving average toward `frame`: mean' = (1 - alpha) mean + alpha pixel.
/// Takes the model by value so callers can move it through without copying.
BackgroundModel update_background(BackgroundModel model, const Frame& frame, double alpha);

/// Blend toward `frame`, using `fg_alpha` for pixels that currently differ
/// from the mean by more than `diff_threshold` and `bg_alpha` elsewhere.
/// A small `fg_alpha` keeps a standing visitor in the foreground for minutes
/// while still absorbing permanent scene changes.
BackgroundModel update_background_selective(BackgroundModel model, const Frame& frame, double diff_threshold,
                                            double bg_alpha, double fg_alpha);

struct PresenceObservation {
  bool occupied = false;
  std::optional<double> centroid_x;  // [0, 1], set iff occupied
  double activity_ratio = 0.0;
  std::int64_t timestamp_ms = 0;
};

PresenceObservation detect_presence(const BackgroundModel& model, const Frame& frame, double diff_threshold,
                                    double min_activity);

/// 0-based band index of a normalized horizontal position; band 1 is the
/// second from the left.
int quantize_region(double centroid_x, int n_regions);

}  // namespace wavewall::vision
