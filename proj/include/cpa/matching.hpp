#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "cpa/corridor_model.hpp"
#include "cpa/error.hpp"
#include "cpa/ingest.hpp"

namespace cpa {

inline const std::string kUnknownLabel = "unknown";

enum class Direction { increasing, decreasing, ambiguous };

struct MatchedSample {
  double t = 0.0;            // epoch s
  double milepost_ft = 0.0;  // in [0, L]
  double speed_mph = 0.0;
  friend bool operator==(const MatchedSample&, const MatchedSample&) = default;
};

struct MatchedJourney {
  std::string journey_id;
  std::vector<MatchedSample> samples;
  Direction direction = Direction::ambiguous;
  std::string origin = kUnknownLabel;
  std::string destination = kUnknownLabel;
  LatLon first_point;  // raw endpoints, kept for O-D classification
  LatLon last_point;

  bool has_known_endpoints() const { return origin != kUnknownLabel && destination != kUnknownLabel; }
  std::pair<std::string, std::string> od() const { return {origin, destination}; }
};

inline std::string direction_label(Direction d, const CorridorModel& model) {
  switch (d) {
    case Direction::increasing: return model.direction_labels().increasing;
    case Direction::decreasing: return model.direction_labels().decreasing;
    case Direction::ambiguous: break;
  }
  return "ambiguous";
}

/// Net displacement below which no direction is assigned.
inline constexpr double kMinDirectionalDisplacementFt = 500.0;

/// Snaps every waypoint to the centerline and assigns a direction from the
/// net milepost change. O-D labels stay "unknown" until classify_od.
inline MatchedJourney map_match(const Journey& journey, const CorridorModel& model,
                                double min_net_ft = kMinDirectionalDisplacementFt) {
  MatchedJourney m;
  m.journey_id = journey.journey_id;
  m.samples.reserve(journey.waypoints.size());
  for (const auto& w : journey.waypoints) {
    const auto pos = linear_reference(LatLon{w.lat, w.lon}, model);
    m.samples.push_back({w.timestamp, pos.milepost_ft, w.speed_mph});
  }
  if (!journey.waypoints.empty()) {
    m.first_point = {journey.waypoints.front().lat, journey.waypoints.front().lon};
    m.last_point = {journey.waypoints.back().lat, journey.waypoints.back().lon};
    const double net = m.samples.back().milepost_ft - m.samples.front().milepost_ft;
    if (net >= min_net_ft) m.direction = Direction::increasing;
    else if (net <= -min_net_ft) m.direction = Direction::decreasing;
  }
  return m;
}

/// (origin, destination): fences containing the first and last waypoint.
inline std::pair<std::string, std::string> classify_od(const MatchedJourney& matched,
                                                       std::span<const Geofence> fences) {
  auto o = locate_geofence(matched.first_point, fences);
  auto d = locate_geofence(matched.last_point, fences);
  return {o.value_or(kUnknownLabel), d.value_or(kUnknownLabel)};
}

/// map_match followed by classify_od against the model's fences.
inline MatchedJourney match_journey(const Journey& journey, const CorridorModel& model) {
  MatchedJourney m = map_match(journey, model);
  std::tie(m.origin, m.destination) = classify_od(m, model.geofences());
  return m;
}

/// Journey counts per (origin, destination). Unknown-endpoint journeys are
/// tallied separately and never enter a cell.
class ODMatrix {
 public:
  using Key = std::pair<std::string, std::string>;

  explicit ODMatrix(std::vector<std::string> labels = {}) : labels_(std::move(labels)) {}

  void add(const std::string& origin, const std::string& destination, std::size_t n = 1) {
    if (origin == kUnknownLabel || destination == kUnknownLabel) {
      unknown_ += n;
      return;
    }
    counts_[{origin, destination}] += n;
    for (const auto* l : {&origin, &destination}) {
      if (std::find(labels_.begin(), labels_.end(), *l) == labels_.end()) extra_.insert(*l);
    }
  }

  std::size_t count(const std::string& o, const std::string& d) const {
    auto it = counts_.find({o, d});
    return it == counts_.end() ? 0 : it->second;
  }

  std::size_t row_total(const std::string& o) const {
    std::size_t s = 0;
    for (const auto& [k, v] : counts_) s += k.first == o ? v : 0;
    return s;
  }

  std::size_t column_total(const std::string& d) const {
    std::size_t s = 0;
    for (const auto& [k, v] : counts_) s += k.second == d ? v : 0;
    return s;
  }

  std::size_t grand_total() const {
    std::size_t s = 0;
    for (const auto& [k, v] : counts_) s += v;
    return s;
  }

  std::size_t unknown_endpoints() const { return unknown_; }
  const std::map<Key, std::size_t>& cells() const { return counts_; }

  /// Declared labels first, then any others seen, sorted.
  std::vector<std::string> labels() const {
    std::vector<std::string> out = labels_;
    out.insert(out.end(), extra_.begin(), extra_.end());
    return out;
  }

  friend bool operator==(const ODMatrix& a, const ODMatrix& b) {
    return a.counts_ == b.counts_ && a.unknown_ == b.unknown_;
  }

 private:
  std::vector<std::string> labels_;
  std::set<std::string> extra_;
  std::map<Key, std::size_t> counts_;
  std::size_t unknown_ = 0;
};

inline ODMatrix build_od_matrix(std::span<const MatchedJourney> journeys, std::vector<std::string> labels = {}) {
  ODMatrix m(std::move(labels));
  for (const auto& j : journeys) m.add(j.origin, j.destination);
  return m;
}

inline std::vector<std::string> fence_labels(const CorridorModel& model) {
  std::vector<std::string> out;
  for (const auto& f : model.geofences()) out.push_back(f.label);
  return out;
}

/// Set Z of O-D paths.
class PathSet {
 public:
  enum class Kind { all, end_to_end, explicit_pairs };

  static PathSet all() { return PathSet(Kind::all, {}); }
  static PathSet end_to_end(const CorridorModel& model) {
    return PathSet(Kind::end_to_end, {model.end_to_end().begin(), model.end_to_end().end()});
  }
  /// Throws ConfigError when a label is not a fence of the model.
  static PathSet of(const std::vector<std::pair<std::string, std::string>>& pairs, const CorridorModel& model) {
    for (const auto& [o, d] : pairs) {
      if (!model.has_fence(o)) throw ConfigError("unknown origin label '" + o + "' in path set");
      if (!model.has_fence(d)) throw ConfigError("unknown destination label '" + d + "' in path set");
    }
    return PathSet(Kind::explicit_pairs, {pairs.begin(), pairs.end()});
  }

  /// "all", "end-to-end" or "O:D,O:D,...".
  static PathSet parse(std::string_view text, const CorridorModel& model) {
    if (text == "all") return all();
    if (text == "end-to-end" || text == "e2e") return end_to_end(model);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::size_t pos = 0;
    while (pos <= text.size() && !text.empty()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      const std::string_view item = text.substr(pos, comma - pos);
      const std::size_t colon = item.find(':');
      if (colon == std::string_view::npos || colon == 0 || colon + 1 == item.size())
        throw ConfigError("malformed path '" + std::string(item) + "', expected ORIGIN:DESTINATION");
      pairs.emplace_back(std::string(item.substr(0, colon)), std::string(item.substr(colon + 1)));
      pos = comma + 1;
    }
    return of(pairs, model);
  }

  Kind kind() const { return kind_; }
  bool is_all() const { return kind_ == Kind::all; }
  const std::set<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

  bool contains(const std::string& o, const std::string& d) const {
    return kind_ == Kind::all || pairs_.count({o, d}) > 0;
  }

  /// Short tag used in output file names.
  std::string tag() const {
    switch (kind_) {
      case Kind::all: return "all";
      case Kind::end_to_end: return "e2e";
      case Kind::explicit_pairs: break;
    }
    return "custom";
  }

 private:
  PathSet(Kind k, std::set<std::pair<std::string, std::string>> pairs) : kind_(k), pairs_(std::move(pairs)) {}
  Kind kind_;
  std::set<std::pair<std::string, std::string>> pairs_;
};

/// Journeys whose (O, D) lies in Z. Z = all keeps unknown-endpoint journeys.
inline std::vector<MatchedJourney> select_paths(std::span<const MatchedJourney> journeys, const PathSet& z) {
  std::vector<MatchedJourney> out;
  for (const auto& j : journeys) {
    if (z.contains(j.origin, j.destination)) out.push_back(j);
  }
  return out;
}

}  // namespace cpa
