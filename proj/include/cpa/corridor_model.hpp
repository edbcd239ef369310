#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpa/error.hpp"
#include "cpa/geometry.hpp"
#include "cpa/units.hpp"

namespace cpa {

struct Intersection {
  std::string name;
  double milepost_ft = 0.0;
};

struct Geofence {
  std::string label;
  std::vector<LatLon> polygon;
};

struct PlanEntry {
  std::string name;
  double start_tod = 0.0;  // s after midnight, inclusive
  double end_tod = 0.0;    // s after midnight, exclusive
  double cycle_s = 0.0;

  bool contains(double tod) const { return start_tod <= tod && tod < end_tod; }
};

/// Time-of-day schedule of coordinated timing plans. Gaps are legal.
class TimingPlan {
 public:
  TimingPlan() = default;

  /// Validates and sorts by start time. Throws ConfigError on overlap,
  /// start >= end, non-positive cycle or duplicate names.
  explicit TimingPlan(std::vector<PlanEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const PlanEntry& a, const PlanEntry& b) { return a.start_tod < b.start_tod; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (!(e.cycle_s > 0.0)) throw ConfigError("timing plan '" + e.name + "': cycle length must be > 0", "/timing_plan");
      if (!(e.start_tod < e.end_tod))
        throw ConfigError("timing plan '" + e.name + "': start must precede end", "/timing_plan");
      if (e.start_tod < 0.0 || e.end_tod > kSecondsPerDay)
        throw ConfigError("timing plan '" + e.name + "': window must lie within one day", "/timing_plan");
      if (i > 0 && entries_[i - 1].end_tod > e.start_tod)
        throw ConfigError("timing plan '" + entries_[i - 1].name + "' overlaps '" + e.name + "'", "/timing_plan");
      for (std::size_t j = 0; j < i; ++j) {
        if (entries_[j].name == e.name) throw ConfigError("duplicate timing plan name '" + e.name + "'", "/timing_plan");
      }
    }
  }

  const std::vector<PlanEntry>& entries() const { return entries_; }

  const PlanEntry* find(std::string_view name) const {
    for (const auto& e : entries_) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }

 private:
  std::vector<PlanEntry> entries_;
};

/// The plan entry whose [start, end) window contains tod, if any.
inline std::optional<PlanEntry> plan_for(double tod, const TimingPlan& plan) {
  for (const auto& e : plan.entries()) {
    if (e.contains(tod)) return e;
  }
  return std::nullopt;
}

/// Label of the first fence (in list order) containing the point.
inline std::optional<std::string> locate_geofence(LatLon p, std::span<const Geofence> fences) {
  for (const auto& f : fences) {
    if (polygon_contains(f.polygon, p)) return f.label;
  }
  return std::nullopt;
}

struct LinearPosition {
  double milepost_ft = 0.0;
  double offset_ft = 0.0;
};

struct DirectionLabels {
  std::string increasing = "EB";
  std::string decreasing = "WB";
};

struct CorridorSpec {
  std::vector<LatLon> vertices;
  std::vector<Intersection> intersections;
  double speed_limit_mph = 0.0;
  DirectionLabels direction_labels;
  std::vector<Geofence> geofences;
  TimingPlan timing_plan;
  std::vector<std::pair<std::string, std::string>> end_to_end;
  double utc_offset_s = 0.0;
};

/// Immutable corridor description with linear referencing.
class CorridorModel {
 public:
  /// Validates every invariant; throws ConfigError on violation.
  explicit CorridorModel(CorridorSpec spec) : spec_(std::move(spec)) {
    if (spec_.vertices.size() < 2) throw ConfigError("corridor needs at least 2 vertices", "/vertices");
    for (std::size_t i = 0; i < spec_.vertices.size(); ++i) {
      const auto& v = spec_.vertices[i];
      if (!std::isfinite(v.lat) || !std::isfinite(v.lon) || std::abs(v.lat) > 90.0 ||
          std::abs(v.lon) > 180.0)
        throw ConfigError("corridor vertex out of range", "/vertices/" + std::to_string(i));
    }
    frame_ = LocalFrame(vertex_centroid(spec_.vertices));
    planar_.reserve(spec_.vertices.size());
    for (const auto& v : spec_.vertices) planar_.push_back(frame_.to_planar(v));
    cumulative_.assign(1, 0.0);
    for (std::size_t i = 1; i < planar_.size(); ++i) {
      const double seg = std::hypot(planar_[i].x - planar_[i - 1].x, planar_[i].y - planar_[i - 1].y);
      if (!(seg > 0.0)) throw ConfigError("zero-length corridor segment", "/vertices/" + std::to_string(i));
      cumulative_.push_back(cumulative_.back() + seg);
    }
    length_ft_ = cumulative_.back();

    if (!(spec_.speed_limit_mph > 0.0)) throw ConfigError("speed_limit_mph must be > 0", "/speed_limit_mph");
    for (std::size_t i = 0; i < spec_.intersections.size(); ++i) {
      const double mp = spec_.intersections[i].milepost_ft;
      if (!(mp >= 0.0 && mp <= length_ft_))
        throw ConfigError("intersection '" + spec_.intersections[i].name + "' milepost outside [0, length]",
                          "/intersections/" + std::to_string(i));
      if (i > 0 && !(mp > spec_.intersections[i - 1].milepost_ft))
        throw ConfigError("intersection mileposts must be strictly increasing",
                          "/intersections/" + std::to_string(i));
    }
    for (std::size_t i = 0; i < spec_.geofences.size(); ++i) {
      const auto& f = spec_.geofences[i];
      const std::string where = "/geofences/" + std::to_string(i);
      if (f.label.empty()) throw ConfigError("geofence label must be non-empty", where);
      if (f.label == "unknown") throw ConfigError("geofence label 'unknown' is reserved", where);
      if (f.polygon.size() < 3) throw ConfigError("geofence '" + f.label + "' needs at least 3 vertices", where);
      if (!polygon_is_simple(f.polygon)) throw ConfigError("geofence '" + f.label + "' is not a simple polygon", where);
      for (std::size_t j = 0; j < i; ++j) {
        if (spec_.geofences[j].label == f.label)
          throw ConfigError("duplicate geofence label '" + f.label + "'", where);
      }
    }
    for (std::size_t i = 0; i < spec_.end_to_end.size(); ++i) {
      const auto& [o, d] = spec_.end_to_end[i];
      if (!has_fence(o) || !has_fence(d))
        throw ConfigError("end_to_end pair " + o + "->" + d + " names an unknown geofence",
                          "/end_to_end/" + std::to_string(i));
    }
    if (spec_.direction_labels.increasing == spec_.direction_labels.decreasing)
      throw ConfigError("direction labels must differ", "/direction_labels");
  }

  double length_ft() const { return length_ft_; }
  double speed_limit_mph() const { return spec_.speed_limit_mph; }
  double speed_limit_fps() const { return mph_to_fps(spec_.speed_limit_mph); }
  const std::vector<LatLon>& vertices() const { return spec_.vertices; }
  const std::vector<double>& vertex_mileposts() const { return cumulative_; }
  const std::vector<Intersection>& intersections() const { return spec_.intersections; }
  const DirectionLabels& direction_labels() const { return spec_.direction_labels; }
  const std::vector<Geofence>& geofences() const { return spec_.geofences; }
  const TimingPlan& timing_plan() const { return spec_.timing_plan; }
  const std::vector<std::pair<std::string, std::string>>& end_to_end() const { return spec_.end_to_end; }
  double utc_offset_s() const { return spec_.utc_offset_s; }
  const LocalFrame& frame() const { return frame_; }
  const CorridorSpec& spec() const { return spec_; }

  bool has_fence(std::string_view label) const {
    for (const auto& f : spec_.geofences) {
      if (f.label == label) return true;
    }
    return false;
  }

  /// Time of day (s after local midnight) for an epoch timestamp.
  double time_of_day(double epoch_s) const {
    double tod = std::fmod(epoch_s + spec_.utc_offset_s, kSecondsPerDay);
    if (tod < 0.0) tod += kSecondsPerDay;
    return tod;
  }

  /// Planar point at a milepost along the centerline.
  PlanarPoint planar_at(double milepost_ft) const {
    const double mp = std::clamp(milepost_ft, 0.0, length_ft_);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), mp);
    std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    if (i >= planar_.size() - 1) i = planar_.size() - 2;
    const double seg = cumulative_[i + 1] - cumulative_[i];
    const double u = (mp - cumulative_[i]) / seg;
    return {planar_[i].x + u * (planar_[i + 1].x - planar_[i].x),
            planar_[i].y + u * (planar_[i + 1].y - planar_[i].y)};
  }

  LatLon latlon_at(double milepost_ft) const { return frame_.to_latlon(planar_at(milepost_ft)); }

  /// Unit tangent of the segment containing the milepost.
  PlanarPoint tangent_at(double milepost_ft) const {
    const double mp = std::clamp(milepost_ft, 0.0, length_ft_);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), mp);
    std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
    if (i >= planar_.size() - 1) i = planar_.size() - 2;
    const double seg = cumulative_[i + 1] - cumulative_[i];
    return {(planar_[i + 1].x - planar_[i].x) / seg, (planar_[i + 1].y - planar_[i].y) / seg};
  }

  LinearPosition linear_reference(PlanarPoint p) const {
    constexpr double tie_eps = 1e-9;
    LinearPosition best{0.0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i + 1 < planar_.size(); ++i) {
      const auto proj = project_onto_segment(p, planar_[i], planar_[i + 1]);
      const double mp = cumulative_[i] + proj.param * (cumulative_[i + 1] - cumulative_[i]);
      if (proj.distance < best.offset_ft - tie_eps ||
          (std::abs(proj.distance - best.offset_ft) <= tie_eps && mp < best.milepost_ft)) {
        best = {mp, proj.distance};
      }
    }
    best.milepost_ft = std::clamp(best.milepost_ft, 0.0, length_ft_);
    return best;
  }

 private:
  CorridorSpec spec_;
  LocalFrame frame_;
  std::vector<PlanarPoint> planar_;
  std::vector<double> cumulative_;
  double length_ft_ = 0.0;
};

/// Snap a point to the corridor centerline: (milepost, perpendicular offset).
inline LinearPosition linear_reference(LatLon p, const CorridorModel& model) {
  return model.linear_reference(model.frame().to_planar(p));
}

}  // namespace cpa
