#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wavewall/error.hpp"
#include "wavewall/occupancy.hpp"

using namespace wavewall;
using namespace wavewall::occupancy;

namespace {

vision::PresenceObservation seen(double x) { return {true, x, 0.1, 0}; }
vision::PresenceObservation empty() { return {}; }

struct Driver {
  OccupancyParams params;
  OccupancyState state;
  void occupied(int region, std::int64_t now) { state = update_occupancy(state, seen(0.5), region, now, params); }
  void vacant(std::int64_t now) { state = update_occupancy(state, empty(), std::nullopt, now, params); }
};

}  // namespace

TEST_CASE("steady visitor commits after the debounce and accrues dwell") {
  Driver d;
  for (std::int64_t t = 0; t <= 1000; t += 100) d.occupied(2, t);
  REQUIRE(d.state.current_region == 2);
  // committed at t = 300, then 700 ms of dwell
  CHECK(d.state.dwell_ms == 700);

  Driver e;
  for (std::int64_t t = 0; t <= 1300; t += 100) e.occupied(2, t);
  CHECK(e.state.dwell_ms == 1000);
}

TEST_CASE("a visit shorter than the debounce never commits") {
  Driver d;
  for (std::int64_t t = 0; t <= 250; t += 50) d.occupied(1, t);
  CHECK_FALSE(d.state.current_region.has_value());
  d.vacant(300);
  CHECK_FALSE(d.state.current_region.has_value());
  CHECK_FALSE(d.state.candidate_region.has_value());
}

TEST_CASE("flicker between two regions faster than the debounce keeps the committed region") {
  Driver d;
  for (std::int64_t t = 0; t <= 600; t += 100) d.occupied(0, t);
  REQUIRE(d.state.current_region == 0);
  for (std::int64_t t = 700; t <= 5000; t += 100) {
    d.occupied((t / 100) % 2 == 0 ? 1 : 2, t);
    CHECK(d.state.current_region == 0);
  }
}

TEST_CASE("vacancy only after the timeout") {
  Driver d;
  for (std::int64_t t = 0; t <= 1000; t += 100) d.occupied(3, t);
  REQUIRE(d.state.current_region == 3);
  for (std::int64_t t = 1100; t < 2500; t += 100) {
    d.vacant(t);
    CHECK(d.state.current_region == 3);
  }
  d.vacant(2500);
  CHECK_FALSE(d.state.current_region.has_value());
  CHECK(d.state.dwell_ms == 0);
}

TEST_CASE("dwell is zero whenever no region is committed") {
  std::mt19937_64 rng(11);
  Driver d;
  std::int64_t t = 0;
  for (int i = 0; i < 5000; ++i) {
    t += std::uniform_int_distribution<int>(0, 120)(rng);
    if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) d.vacant(t);
    else d.occupied(std::uniform_int_distribution<int>(0, 3)(rng), t);
    if (!d.state.current_region) CHECK(d.state.dwell_ms == 0);
    CHECK(d.state.dwell_ms >= 0);
  }
}

TEST_CASE("matches the reference interpreter on random observation sequences") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const OccupancyParams params{std::uniform_int_distribution<int>(1, 400)(rng),
                                 std::uniform_int_distribution<int>(1, 2000)(rng)};
    Driver d{params, {}};
    std::vector<oracle::OccEvent> events;
    std::int64_t t = std::uniform_int_distribution<int>(0, 1000)(rng);
    // Sticky regions make commits likely; occasional jumps and gaps exercise the rest.
    int region = 0;
    for (int i = 0; i < 200; ++i) {
      t += std::uniform_int_distribution<int>(0, 100)(rng);
      const int roll = std::uniform_int_distribution<int>(0, 19)(rng);
      if (roll == 0) region = std::uniform_int_distribution<int>(0, 4)(rng);
      const bool occupied = roll > 2;
      events.push_back({occupied, region, t});
      if (occupied) d.occupied(region, t);
      else d.vacant(t);
      const auto ref = oracle::occupancy_reference(events, params.debounce_ms, params.vacancy_timeout_ms);
      REQUIRE(d.state.current_region == ref.current);
      REQUIRE(d.state.dwell_ms == ref.dwell);
    }
  }
}

TEST_CASE("time going backwards is rejected") {
  Driver d;
  d.occupied(1, 100);
  CHECK_THROWS_AS(d.occupied(1, 99), InvalidInput);
  d.occupied(1, 100);  // equal timestamps are fine
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(OccupancyParams{0, 100}), ConfigError);
  CHECK_THROWS_AS(validate(OccupancyParams{10, -1}), ConfigError);
  try {
    validate(OccupancyParams{0, 100});
  } catch (const ConfigError& e) {
    CHECK(e.field() == "occupancy.debounce_ms");
  }
}
