#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpa/corridor_model.hpp"
#include "cpa/error.hpp"

namespace cpa {

struct Waypoint {
  std::string journey_id;
  double timestamp = 0.0;  // epoch seconds
  double lat = 0.0;
  double lon = 0.0;
  double speed_mph = 0.0;
  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Journey {
  std::string journey_id;
  std::vector<Waypoint> waypoints;  // strictly increasing timestamps
  friend bool operator==(const Journey&, const Journey&) = default;
};

struct RowDiagnostic {
  std::size_t line = 0;
  std::string message;
};

inline constexpr std::string_view kWaypointHeader = "journey_id,timestamp,lat,lon,speed_mph";

/// Vendor column names for the five canonical fields.
struct ColumnMap {
  std::string journey_id = "journey_id";
  std::string timestamp = "timestamp";
  std::string lat = "lat";
  std::string lon = "lon";
  std::string speed_mph = "speed_mph";
};

namespace detail {

/// Splits one CSV record; supports double-quoted fields with "" escapes.
inline bool split_csv(std::string_view line, std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) return false;
  out.push_back(std::move(field));
  return true;
}

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline void append_double(std::string& out, double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, p);
}

inline void append_csv_field(std::string& out, std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    out.append(s);
    return;
  }
  out += '"';
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace detail

/// Lazy waypoint CSV reader. Malformed rows are skipped and reported through
/// diagnostics(); only an unreadable stream or unusable header is fatal.
class WaypointReader {
 public:
  explicit WaypointReader(std::istream& in, ColumnMap columns = {}) : in_(in) {
    if (!in_) throw IoError("waypoint stream is not readable");
    std::string header;
    if (!std::getline(in_, header)) throw IoError("waypoint stream is empty (missing header)");
    line_ = 1;
    strip_cr(header);
    if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF) header.erase(0, 3);  // BOM
    std::vector<std::string> names;
    detail::split_csv(header, names);
    const std::string* wanted[5] = {&columns.journey_id, &columns.timestamp, &columns.lat, &columns.lon,
                                    &columns.speed_mph};
    for (int k = 0; k < 5; ++k) {
      auto it = std::find(names.begin(), names.end(), *wanted[k]);
      if (it == names.end()) throw IoError("waypoint header lacks column '" + *wanted[k] + "'");
      index_[k] = static_cast<std::size_t>(it - names.begin());
    }
    width_ = names.size();
  }

  std::optional<Waypoint> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      strip_cr(line);
      if (line.empty()) continue;
      if (auto w = parse_row(line)) return w;
    }
    if (in_.bad()) throw IoError("read failure at line " + std::to_string(line_));
    return std::nullopt;
  }

  const std::vector<RowDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static void strip_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  }

  std::optional<Waypoint> parse_row(const std::string& line) {
    if (!detail::split_csv(line, fields_)) return reject("unterminated quoted field");
    if (fields_.size() != width_)
      return reject("expected " + std::to_string(width_) + " fields, found " + std::to_string(fields_.size()));
    Waypoint w;
    w.journey_id = fields_[index_[0]];
    if (w.journey_id.empty()) return reject("empty journey_id");
    static constexpr const char* names[5] = {"journey_id", "timestamp", "lat", "lon", "speed_mph"};
    double* targets[5] = {nullptr, &w.timestamp, &w.lat, &w.lon, &w.speed_mph};
    for (int k = 1; k < 5; ++k) {
      auto v = detail::parse_double(fields_[index_[k]]);
      if (!v || !std::isfinite(*v)) return reject(std::string("non-numeric ") + names[k] + " '" + fields_[index_[k]] + "'");
      *targets[k] = *v;
    }
    if (std::abs(w.lat) > 90.0) return reject("lat out of range");
    if (std::abs(w.lon) > 180.0) return reject("lon out of range");
    if (w.speed_mph < 0.0) return reject("negative speed");
    return w;
  }

  std::optional<Waypoint> reject(std::string message) {
    diagnostics_.push_back({line_, std::move(message)});
    return std::nullopt;
  }

  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t index_[5] = {0, 0, 0, 0, 0};
  std::size_t width_ = 0;
  std::vector<std::string> fields_;
  std::vector<RowDiagnostic> diagnostics_;
};

/// Convenience: drain a reader.
inline std::vector<Waypoint> read_all(WaypointReader& reader) {
  std::vector<Waypoint> out;
  while (auto w = reader.next()) out.push_back(std::move(*w));
  return out;
}

/// Writes the canonical header and rows. Numbers use shortest round-trip
/// formatting, so parse(write(x)) reproduces every double bit for bit.
inline void write_waypoints(std::ostream& out, std::span<const Waypoint> waypoints) {
  std::string buf;
  buf.append(kWaypointHeader);
  buf += '\n';
  for (const auto& w : waypoints) {
    detail::append_csv_field(buf, w.journey_id);
    buf += ',';
    detail::append_double(buf, w.timestamp);
    buf += ',';
    detail::append_double(buf, w.lat);
    buf += ',';
    detail::append_double(buf, w.lon);
    buf += ',';
    detail::append_double(buf, w.speed_mph);
    buf += '\n';
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

inline void write_journeys(std::ostream& out, std::span<const Journey> journeys) {
  std::vector<Waypoint> all;
  for (const auto& j : journeys) all.insert(all.end(), j.waypoints.begin(), j.waypoints.end());
  write_waypoints(out, all);
}

/// Groups by journey_id (output ordered by id), sorts each group by time and
/// collapses exact duplicate timestamps to their first occurrence.
inline std::vector<Journey> assemble_journeys(std::span<const Waypoint> waypoints) {
  std::map<std::string, std::vector<Waypoint>> groups;
  for (const auto& w : waypoints) groups[w.journey_id].push_back(w);
  std::vector<Journey> out;
  out.reserve(groups.size());
  for (auto& [id, pts] : groups) {
    std::stable_sort(pts.begin(), pts.end(),
                     [](const Waypoint& a, const Waypoint& b) { return a.timestamp < b.timestamp; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Waypoint& a, const Waypoint& b) { return a.timestamp == b.timestamp; }),
              pts.end());
    out.push_back({id, std::move(pts)});
  }
  return out;
}

struct FilterOptions {
  std::size_t min_points = 5;
  double max_gap_s = 10.0;
};

enum class RejectReason { too_few_points, gap };

struct FilterTally {
  std::size_t too_few_points = 0;
  std::size_t gap = 0;
  std::size_t total() const { return too_few_points + gap; }
};

struct FilterResult {
  std::vector<Journey> kept;
  FilterTally rejected;
};

/// Why a journey fails the point-count / gap rules, if it does. A gap of
/// exactly max_gap_s passes.
inline std::optional<RejectReason> rejection_reason(const Journey& j, const FilterOptions& opt = {}) {
  if (j.waypoints.size() < opt.min_points) return RejectReason::too_few_points;
  for (std::size_t i = 1; i < j.waypoints.size(); ++i) {
    if (j.waypoints[i].timestamp - j.waypoints[i - 1].timestamp > opt.max_gap_s) return RejectReason::gap;
  }
  return std::nullopt;
}

inline FilterResult filter_journeys(std::vector<Journey> journeys, const FilterOptions& opt = {}) {
  FilterResult r;
  for (auto& j : journeys) {
    const auto reason = rejection_reason(j, opt);
    if (!reason) r.kept.push_back(std::move(j));
    else if (*reason == RejectReason::too_few_points) ++r.rejected.too_few_points;
    else ++r.rejected.gap;
  }
  return r;
}

struct ClipResult {
  std::optional<Journey> journey;
  bool truncated = false;  // a later qualifying run was dropped
};

inline constexpr double kDefaultMaxOffsetFt = 150.0;

/// Keeps the first maximal run of waypoints that are within max_offset_ft of
/// the centerline or inside any geofence.
inline ClipResult clip_to_geofences(const Journey& journey, const CorridorModel& model,
                                    std::span<const Geofence> fences, double max_offset_ft = kDefaultMaxOffsetFt) {
  auto qualifies = [&](const Waypoint& w) {
    const LatLon p{w.lat, w.lon};
    return linear_reference(p, model).offset_ft <= max_offset_ft || locate_geofence(p, fences).has_value();
  };
  const auto& pts = journey.waypoints;
  std::size_t begin = 0;
  while (begin < pts.size() && !qualifies(pts[begin])) ++begin;
  if (begin == pts.size()) return {};
  std::size_t end = begin;
  while (end < pts.size() && qualifies(pts[end])) ++end;
  bool truncated = false;
  for (std::size_t i = end; i < pts.size() && !truncated; ++i) truncated = qualifies(pts[i]);
  Journey out{journey.journey_id, {pts.begin() + static_cast<std::ptrdiff_t>(begin),
                                   pts.begin() + static_cast<std::ptrdiff_t>(end)}};
  return {std::move(out), truncated};
}

inline ClipResult clip_to_geofences(const Journey& journey, const CorridorModel& model,
                                    double max_offset_ft = kDefaultMaxOffsetFt) {
  return clip_to_geofences(journey, model, model.geofences(), max_offset_ft);
}

}  // namespace cpa
