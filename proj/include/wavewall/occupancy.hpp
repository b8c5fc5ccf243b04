#pragma once

#include <cstdint>
#include <optional>

#include "wavewall/vision.hpp"

namespace wavewall::occupancy {

struct OccupancyParams {
  std::int64_t debounce_ms = 300;
  std::int64_t vacancy_timeout_ms = 1500;
};

void validate(const OccupancyParams& params);

struct OccupancyState {
  std::optional<int> current_region;
  std::int64_t dwell_ms = 0;  // 0 whenever current_region is empty
  std::optional<int> candidate_region;
  std::int64_t candidate_since_ms = 0;
  std::optional<std::int64_t> last_occupied_ms;
  std::optional<std::int64_t> last_update_ms;

  friend bool operator==(const OccupancyState&, const OccupancyState&) = default;
};

/// Advances the hysteresis state by one observation at time `now`.
///
/// - The same region as current accrues dwell by the time since the last update.
/// - A different region becomes the candidate and is committed (dwell reset)
///   once it has been observed without interruption for `debounce_ms`. Any other
///   observation, occupied or not, restarts the candidate window.
/// - After `vacancy_timeout_ms` without an occupied observation the state is vacant.
///
/// `region` is the quantized band of `obs.centroid_x`; it is ignored when the
/// observation is unoccupied. Throws InvalidInput if `now` goes backwards.
OccupancyState update_occupancy(const OccupancyState& state, const vision::PresenceObservation& obs,
                                std::optional<int> region, std::int64_t now, const OccupancyParams& params);

}  // namespace wavewall::occupancy
