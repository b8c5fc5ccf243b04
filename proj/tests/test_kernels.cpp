#include <doctest.h>

#include <cstring>
#include <random>

#include "wavewall/kernels.hpp"

using namespace wavewall::kernels;

namespace {

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct Case {
  std::size_t width;
  std::size_t height;
  std::vector<double> mean;
  std::vector<std::uint8_t> pixels;
};

Case random_case(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 41);  // odd widths exercise the scalar tails
  Case c{dim(rng), dim(rng), {}, {}};
  std::uniform_real_distribution<double> m(0.0, 255.0);
  std::uniform_int_distribution<int> p(0, 255);
  for (std::size_t i = 0; i < c.width * c.height; ++i) {
    c.mean.push_back(i % 7 == 0 ? std::floor(m(rng)) : m(rng));
    c.pixels.push_back(static_cast<std::uint8_t>(p(rng)));
  }
  return c;
}

}  // namespace

TEST_CASE("every kernel table is bit-identical to the scalar reference") {
  const auto& ref = scalar_kernels();
  const auto tables = available_kernels();
  REQUIRE(tables.front() == &ref);
  MESSAGE("kernel variants available: " << tables.size() << ", active: " << isa_name(active_kernels().isa));

  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Case c = random_case(rng);
    const double alpha = trial == 0 ? 1.0 : unit(rng);
    const double fg_alpha = unit(rng) * alpha;
    const double threshold = 1.0 + unit(rng) * 100.0;

    auto ema_ref = c.mean;
    ref.ema_update(ema_ref, c.pixels, alpha);
    auto sel_ref = c.mean;
    ref.selective_update(sel_ref, c.pixels, threshold, alpha, fg_alpha);
    const auto stats_ref = ref.foreground_stats(c.mean, c.pixels, c.width, threshold);

    for (const KernelTable* t : tables) {
      CAPTURE(isa_name(t->isa));
      auto ema = c.mean;
      t->ema_update(ema, c.pixels, alpha);
      CHECK(bit_equal(ema, ema_ref));
      auto sel = c.mean;
      t->selective_update(sel, c.pixels, threshold, alpha, fg_alpha);
      CHECK(bit_equal(sel, sel_ref));
      CHECK(t->foreground_stats(c.mean, c.pixels, c.width, threshold) == stats_ref);
    }
  }
}

TEST_CASE("foreground stats on a hand-built image") {
  // 5 wide, 2 rows; foreground at (row 0, col 1) and (row 1, col 4).
  std::vector<double> mean(10, 100.0);
  std::vector<std::uint8_t> px(10, 100);
  px[1] = 200;
  px[9] = 0;
  for (const KernelTable* t : available_kernels()) {
    const auto s = t->foreground_stats(mean, px, 5, 50.0);
    CHECK(s.count == 2);
    CHECK(s.column_sum == 5);
  }
}

TEST_CASE("threshold comparison is strict") {
  std::vector<double> mean(8, 100.0);
  std::vector<std::uint8_t> px(8, 150);
  for (const KernelTable* t : available_kernels()) {
    CHECK(t->foreground_stats(mean, px, 8, 50.0).count == 0);
    CHECK(t->foreground_stats(mean, px, 8, 49.999).count == 8);
  }
}
