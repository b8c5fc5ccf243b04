#pragma once

// Per-pixel inner loops of the vision stage. Each instruction set provides the
// same table of kernels; `active_kernels()` picks the best one the CPU
// supports. All variants produce bit-identical results to the scalar table.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace wavewall::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

struct ForegroundStats {
  std::uint64_t count = 0;
  // Sum of 0-based column indices over foreground pixels.
  std::uint64_t column_sum = 0;

  friend bool operator==(const ForegroundStats&, const ForegroundStats&) = default;
};

struct KernelTable {
  Isa isa;

  // mean[i] = clamp((1 - alpha) * mean[i] + alpha * pixels[i], 0, 255)
  void (*ema_update)(std::span<double> mean, std::span<const std::uint8_t> pixels, double alpha);

  // Same blend, but pixels with |pixel - mean| > threshold use fg_alpha.
  void (*selective_update)(std::span<double> mean, std::span<const std::uint8_t> pixels,
                           double threshold, double bg_alpha, double fg_alpha);

  // Counts pixels with |pixel - mean| > threshold over a row-major image.
  ForegroundStats (*foreground_stats)(std::span<const double> mean, std::span<const std::uint8_t> pixels,
                                      std::size_t width, double threshold);
};

const KernelTable& scalar_kernels() noexcept;

/// Every table compiled in and runnable on this CPU, scalar first.
std::vector<const KernelTable*> available_kernels();

/// Fastest supported table. `WAVEWALL_KERNELS=scalar|avx2|neon` overrides the
/// choice when that variant is available.
const KernelTable& active_kernels();

}  // namespace wavewall::kernels
