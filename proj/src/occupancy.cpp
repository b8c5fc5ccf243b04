#include "wavewall/occupancy.hpp"

#include "wavewall/error.hpp"

namespace wavewall::occupancy {

void validate(const OccupancyParams& params) {
  if (params.debounce_ms <= 0) throw ConfigError("occupancy.debounce_ms", "must be strictly positive");
  if (params.vacancy_timeout_ms <= 0) throw ConfigError("occupancy.vacancy_timeout_ms", "must be strictly positive");
}

OccupancyState update_occupancy(const OccupancyState& state, const vision::PresenceObservation& obs,
                                std::optional<int> region, std::int64_t now, const OccupancyParams& params) {
  const auto latest = [&](std::optional<std::int64_t> t) { return t && now < *t; };
  if (latest(state.last_update_ms) || latest(state.last_occupied_ms) ||
      (state.candidate_region && now < state.candidate_since_ms)) {
    throw InvalidInput("occupancy update time went backwards");
  }

  OccupancyState next = state;
  const std::int64_t elapsed = state.last_update_ms ? now - *state.last_update_ms : 0;
  next.last_update_ms = now;

  if (obs.occupied && region) {
    next.last_occupied_ms = now;
    if (next.current_region == region) {
      next.dwell_ms += elapsed;
      next.candidate_region.reset();
    } else if (next.candidate_region == region) {
      if (now - next.candidate_since_ms >= params.debounce_ms) {
        next.current_region = region;
        next.dwell_ms = 0;
        next.candidate_region.reset();
      }
    } else {
      next.candidate_region = region;
      next.candidate_since_ms = now;
    }
    return next;
  }

  next.candidate_region.reset();
  if (next.current_region &&
      (!next.last_occupied_ms || now - *next.last_occupied_ms >= params.vacancy_timeout_ms)) {
    next.current_region.reset();
    next.dwell_ms = 0;
  }
  return next;
}

}  // namespace wavewall::occupancy
