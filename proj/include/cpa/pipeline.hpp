#pragma once

// Cleaning and per-trip processing shared by the CLI subcommands.

#include <span>
#include <string>
#include <vector>

#include "cpa/corridor_model.hpp"
#include "cpa/error.hpp"
#include "cpa/ingest.hpp"
#include "cpa/matching.hpp"
#include "cpa/metrics.hpp"
#include "cpa/parallel.hpp"

namespace cpa {

struct IngestTally {
  std::size_t waypoints = 0;
  std::size_t journeys = 0;
  std::size_t outside_corridor = 0;  // no waypoint near the corridor or in a fence
  std::size_t truncated = 0;
  FilterTally rejected;
  std::size_t kept = 0;
};

struct CleanResult {
  std::vector<Journey> journeys;
  IngestTally tally;
};

/// assemble -> clip -> filter. Idempotent: cleaning the waypoints of a
/// cleaned set returns the same set.
inline CleanResult clean_journeys(std::span<const Waypoint> waypoints, const CorridorModel& model,
                                  const FilterOptions& filter = {}, double max_offset_ft = kDefaultMaxOffsetFt) {
  CleanResult r;
  r.tally.waypoints = waypoints.size();
  auto assembled = assemble_journeys(waypoints);
  r.tally.journeys = assembled.size();
  auto clipped = parallel_map(assembled.size(),
                              [&](std::size_t i) { return clip_to_geofences(assembled[i], model, max_offset_ft); });
  std::vector<Journey> inside;
  for (auto& c : clipped) {
    if (!c.journey) {
      ++r.tally.outside_corridor;
      continue;
    }
    if (c.truncated) ++r.tally.truncated;
    inside.push_back(std::move(*c.journey));
  }
  auto filtered = filter_journeys(std::move(inside), filter);
  r.tally.rejected = filtered.rejected;
  r.tally.kept = filtered.kept.size();
  r.journeys = std::move(filtered.kept);
  return r;
}

inline std::vector<MatchedJourney> match_all(std::span<const Journey> journeys, const CorridorModel& model) {
  return parallel_map(journeys.size(), [&](std::size_t i) { return match_journey(journeys[i], model); });
}

struct TripResults {
  std::vector<TripRecord> trips;
  std::vector<std::string> skipped;  // zero distance or duration
};

inline TripResults compute_trips(std::span<const MatchedJourney> journeys, const CorridorModel& model,
                                 double interval_s = kDefaultSampleInterval) {
  auto results = parallel_map(journeys.size(), [&](std::size_t i) -> std::optional<TripRecord> {
    try {
      return compute_trip(journeys[i], model, interval_s);
    } catch (const DegenerateInputError&) {
      return std::nullopt;
    }
  });
  TripResults out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i]) out.trips.push_back(std::move(*results[i]));
    else out.skipped.push_back(journeys[i].journey_id);
  }
  return out;
}

}  // namespace cpa
