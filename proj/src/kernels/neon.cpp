// AArch64 Advanced SIMD variant; NEON is mandatory there, so no runtime probe.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "kernel_impl.hpp"

namespace wavewall::kernels::detail {
namespace {

inline float64x2_t load_u8x2(const std::uint8_t* p) {
  return vcombine_f64(vdup_n_f64(static_cast<double>(p[0])), vdup_n_f64(static_cast<double>(p[1])));
}

inline float64x2_t clamp_f64(float64x2_t v) {
  return vminq_f64(vmaxq_f64(v, vdupq_n_f64(0.0)), vdupq_n_f64(255.0));
}

void ema_update(std::span<double> mean, std::span<const std::uint8_t> pixels, double alpha) {
  const double keep = 1.0 - alpha;
  const float64x2_t vkeep = vdupq_n_f64(keep);
  const float64x2_t valpha = vdupq_n_f64(alpha);
  const std::size_t n = mean.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t m = vld1q_f64(mean.data() + i);
    const float64x2_t p = load_u8x2(pixels.data() + i);
    vst1q_f64(mean.data() + i, clamp_f64(vaddq_f64(vmulq_f64(vkeep, m), vmulq_f64(valpha, p))));
  }
  for (; i < n; ++i) {
    mean[i] = std::clamp(keep * mean[i] + alpha * static_cast<double>(pixels[i]), 0.0, 255.0);
  }
}

void selective_update(std::span<double> mean, std::span<const std::uint8_t> pixels, double threshold,
                      double bg_alpha, double fg_alpha) {
  const float64x2_t vthr = vdupq_n_f64(threshold);
  const float64x2_t vbg = vdupq_n_f64(bg_alpha);
  const float64x2_t vfg = vdupq_n_f64(fg_alpha);
  const float64x2_t one = vdupq_n_f64(1.0);
  const std::size_t n = mean.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t m = vld1q_f64(mean.data() + i);
    const float64x2_t p = load_u8x2(pixels.data() + i);
    const uint64x2_t fg = vcgtq_f64(vabdq_f64(p, m), vthr);
    const float64x2_t a = vbslq_f64(fg, vfg, vbg);
    vst1q_f64(mean.data() + i, clamp_f64(vaddq_f64(vmulq_f64(vsubq_f64(one, a), m), vmulq_f64(a, p))));
  }
  for (; i < n; ++i) {
    const double p = static_cast<double>(pixels[i]);
    const double a = std::fabs(p - mean[i]) > threshold ? fg_alpha : bg_alpha;
    mean[i] = std::clamp((1.0 - a) * mean[i] + a * p, 0.0, 255.0);
  }
}

ForegroundStats foreground_stats(std::span<const double> mean, std::span<const std::uint8_t> pixels,
                                 std::size_t width, double threshold) {
  ForegroundStats stats;
  const std::size_t rows = width == 0 ? 0 : pixels.size() / width;
  const float64x2_t vthr = vdupq_n_f64(threshold);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* m = mean.data() + r * width;
    const std::uint8_t* px = pixels.data() + r * width;
    uint64x2_t cnt = vdupq_n_u64(0);
    uint64x2_t cols_acc = vdupq_n_u64(0);
    uint64x2_t cols = vcombine_u64(vdup_n_u64(0), vdup_n_u64(1));
    const uint64x2_t step = vdupq_n_u64(2);
    std::size_t c = 0;
    for (; c + 2 <= width; c += 2) {
      const uint64x2_t fg = vcgtq_f64(vabdq_f64(load_u8x2(px + c), vld1q_f64(m + c)), vthr);
      cnt = vsubq_u64(cnt, fg);  // all-ones lanes == -1
      cols_acc = vaddq_u64(cols_acc, vandq_u64(fg, cols));
      cols = vaddq_u64(cols, step);
    }
    stats.count += vgetq_lane_u64(cnt, 0) + vgetq_lane_u64(cnt, 1);
    stats.column_sum += vgetq_lane_u64(cols_acc, 0) + vgetq_lane_u64(cols_acc, 1);
    for (; c < width; ++c) {
      if (std::fabs(static_cast<double>(px[c]) - m[c]) > threshold) {
        ++stats.count;
        stats.column_sum += c;
      }
    }
  }
  return stats;
}

}  // namespace

const KernelTable& neon_kernels() noexcept {
  static const KernelTable table{Isa::Neon, &ema_update, &selective_update, &foreground_stats};
  return table;
}

}  // namespace wavewall::kernels::detail
