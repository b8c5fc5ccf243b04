#include "wavewall/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "kernel_impl.hpp"

namespace wavewall::kernels {
namespace {

void ema_update(std::span<double> mean, std::span<const std::uint8_t> pixels, double alpha) {
  const double keep = 1.0 - alpha;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    mean[i] = std::clamp(keep * mean[i] + alpha * static_cast<double>(pixels[i]), 0.0, 255.0);
  }
}

void selective_update(std::span<double> mean, std::span<const std::uint8_t> pixels, double threshold,
                      double bg_alpha, double fg_alpha) {
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double p = static_cast<double>(pixels[i]);
    const double a = std::fabs(p - mean[i]) > threshold ? fg_alpha : bg_alpha;
    mean[i] = std::clamp((1.0 - a) * mean[i] + a * p, 0.0, 255.0);
  }
}

ForegroundStats foreground_stats(std::span<const double> mean, std::span<const std::uint8_t> pixels,
                                 std::size_t width, double threshold) {
  ForegroundStats stats;
  const std::size_t rows = width == 0 ? 0 : pixels.size() / width;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t base = r * width;
    for (std::size_t c = 0; c < width; ++c) {
      if (std::fabs(static_cast<double>(pixels[base + c]) - mean[base + c]) > threshold) {
        ++stats.count;
        stats.column_sum += c;
      }
    }
  }
  return stats;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{Isa::Scalar, &ema_update, &selective_update, &foreground_stats};
  return table;
}

}  // namespace wavewall::kernels
