#include "wavewall/vision.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavewall/error.hpp"

namespace wavewall::vision {
namespace {

void check_match(const BackgroundModel& model, const Frame& frame) {
  validate(frame);
  if (frame.width != model.width() || frame.height != model.height()) {
    throw InvalidInput("frame is " + std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                       " but background model is " + std::to_string(model.width()) + "x" +
                       std::to_string(model.height()));
  }
}

void check_alpha(double alpha, const char* name) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

void validate(const Frame& frame) {
  if (frame.width < kMinFrameDim || frame.height < kMinFrameDim) {
    throw InvalidInput("frame dimensions must be at least " + std::to_string(kMinFrameDim) + "x" +
                       std::to_string(kMinFrameDim));
  }
  if (frame.pixels.size() != static_cast<std::size_t>(frame.width) * static_cast<std::size_t>(frame.height)) {
    throw InvalidInput("pixel buffer length does not match width * height");
  }
}

BackgroundModel init_background(const Frame& frame, double alpha) {
  validate(frame);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in (0, 1]");
  std::vector<double> mean(frame.pixels.begin(), frame.pixels.end());
  return BackgroundModel(frame.width, frame.height, std::move(mean), alpha);
}

BackgroundModel update_background(BackgroundModel model, const Frame& frame, double alpha) {
  check_match(model, frame);
  check_alpha(alpha, "alpha");
  kernels::active_kernels().ema_update(model.mean_, frame.pixels, alpha);
  return model;
}

BackgroundModel update_background_selective(BackgroundModel model, const Frame& frame, double diff_threshold,
                                            double bg_alpha, double fg_alpha) {
  check_match(model, frame);
  check_alpha(bg_alpha, "bg_alpha");
  check_alpha(fg_alpha, "fg_alpha");
  kernels::active_kernels().selective_update(model.mean_, frame.pixels, diff_threshold, bg_alpha, fg_alpha);
  return model;
}

PresenceObservation detect_presence(const BackgroundModel& model, const Frame& frame, double diff_threshold,
                                    double min_activity) {
  check_match(model, frame);
  if (!(diff_threshold > 0.0 && diff_threshold < 255.0)) throw InvalidInput("diff_threshold must lie in (0, 255)");
  if (!(min_activity > 0.0 && min_activity < 1.0)) throw InvalidInput("min_activity must lie in (0, 1)");

  const auto stats = kernels::active_kernels().foreground_stats(model.mean(), frame.pixels,
                                                                static_cast<std::size_t>(frame.width), diff_threshold);
  PresenceObservation obs;
  obs.timestamp_ms = frame.timestamp_ms;
  obs.activity_ratio = static_cast<double>(stats.count) / static_cast<double>(frame.pixels.size());
  obs.occupied = stats.count > 0 && obs.activity_ratio >= min_activity;
  if (obs.occupied) {
    // Pixel-center convention: column c covers [c, c + 1), centered at c + 0.5.
    const double count = static_cast<double>(stats.count);
    const double centers = static_cast<double>(stats.column_sum) + 0.5 * count;
    obs.centroid_x = std::clamp(centers / (count * static_cast<double>(frame.width)), 0.0, 1.0);
  }
  return obs;
}

int quantize_region(double centroid_x, int n_regions) {
  if (n_regions < 2) throw InvalidInput("n_regions must be at least 2");
  if (!(centroid_x >= 0.0 && centroid_x <= 1.0)) throw InvalidInput("centroid_x must lie in [0, 1]");
  const int idx = static_cast<int>(std::floor(centroid_x * n_regions));
  return std::min(idx, n_regions - 1);
}

}  // namespace wavewall::vision
