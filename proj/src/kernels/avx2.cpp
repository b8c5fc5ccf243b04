// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "kernel_impl.hpp"

namespace wavewall::kernels::detail {
namespace {

inline __m256d load_u8x4(const std::uint8_t* p) {
  std::int32_t packed;
  std::memcpy(&packed, p, sizeof(packed));
  return _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(_mm_cvtsi32_si128(packed)));
}

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline __m256d clamp_pd(__m256d v) {
  return _mm256_min_pd(_mm256_max_pd(v, _mm256_setzero_pd()), _mm256_set1_pd(255.0));
}

void ema_update(std::span<double> mean, std::span<const std::uint8_t> pixels, double alpha) {
  const double keep = 1.0 - alpha;
  const __m256d vkeep = _mm256_set1_pd(keep);
  const __m256d valpha = _mm256_set1_pd(alpha);
  const std::size_t n = mean.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_loadu_pd(mean.data() + i);
    const __m256d p = load_u8x4(pixels.data() + i);
    _mm256_storeu_pd(mean.data() + i, clamp_pd(_mm256_add_pd(_mm256_mul_pd(vkeep, m), _mm256_mul_pd(valpha, p))));
  }
  for (; i < n; ++i) {
    mean[i] = std::clamp(keep * mean[i] + alpha * static_cast<double>(pixels[i]), 0.0, 255.0);
  }
}

void selective_update(std::span<double> mean, std::span<const std::uint8_t> pixels, double threshold,
                      double bg_alpha, double fg_alpha) {
  const __m256d vthr = _mm256_set1_pd(threshold);
  const __m256d vbg = _mm256_set1_pd(bg_alpha);
  const __m256d vfg = _mm256_set1_pd(fg_alpha);
  const __m256d one = _mm256_set1_pd(1.0);
  const std::size_t n = mean.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_loadu_pd(mean.data() + i);
    const __m256d p = load_u8x4(pixels.data() + i);
    const __m256d fg = _mm256_cmp_pd(abs_pd(_mm256_sub_pd(p, m)), vthr, _CMP_GT_OQ);
    const __m256d a = _mm256_blendv_pd(vbg, vfg, fg);
    const __m256d blended = _mm256_add_pd(_mm256_mul_pd(_mm256_sub_pd(one, a), m), _mm256_mul_pd(a, p));
    _mm256_storeu_pd(mean.data() + i, clamp_pd(blended));
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
  const __m256d vthr = _mm256_set1_pd(threshold);
  const __m256d step = _mm256_set1_pd(4.0);
  // Column indices stay far below 2^53, so double accumulation is exact.
  __m256d col_acc = _mm256_setzero_pd();
  std::uint64_t count = 0;
  std::uint64_t tail_sum = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* m = mean.data() + r * width;
    const std::uint8_t* px = pixels.data() + r * width;
    __m256d cols = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    std::size_t c = 0;
    for (; c + 4 <= width; c += 4) {
      const __m256d diff = abs_pd(_mm256_sub_pd(load_u8x4(px + c), _mm256_loadu_pd(m + c)));
      const __m256d fg = _mm256_cmp_pd(diff, vthr, _CMP_GT_OQ);
      count += static_cast<std::uint64_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(fg))));
      col_acc = _mm256_add_pd(col_acc, _mm256_and_pd(fg, cols));
      cols = _mm256_add_pd(cols, step);
    }
    for (; c < width; ++c) {
      if (std::fabs(static_cast<double>(px[c]) - m[c]) > threshold) {
        ++count;
        tail_sum += c;
      }
    }
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, col_acc);
  stats.count = count;
  stats.column_sum = tail_sum + static_cast<std::uint64_t>(lanes[0]) + static_cast<std::uint64_t>(lanes[1]) +
                     static_cast<std::uint64_t>(lanes[2]) + static_cast<std::uint64_t>(lanes[3]);
  return stats;
}

}  // namespace

const KernelTable& avx2_kernels() noexcept {
  static const KernelTable table{Isa::Avx2, &ema_update, &selective_update, &foreground_stats};
  return table;
}

}  // namespace wavewall::kernels::detail
