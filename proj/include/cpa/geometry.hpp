#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace cpa {

struct LatLon {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
  friend bool operator==(const LatLon&, const LatLon&) = default;
};

/// Planar point in feet (x east, y north) in a LocalFrame.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Mean Earth radius in feet (6371008.8 m).
inline constexpr double kEarthRadiusFt = 6371008.8 / 0.3048;

/// Equirectangular projection about a fixed origin. Accurate to well under a
/// foot over a few miles, which is all a single arterial corridor needs.
class LocalFrame {
 public:
  LocalFrame() = default;
  explicit LocalFrame(LatLon origin)
      : origin_(origin), cos_lat_(std::cos(origin.lat * std::numbers::pi / 180.0)) {}

  PlanarPoint to_planar(LatLon p) const {
    constexpr double rad = std::numbers::pi / 180.0;
    return {kEarthRadiusFt * (p.lon - origin_.lon) * rad * cos_lat_,
            kEarthRadiusFt * (p.lat - origin_.lat) * rad};
  }

  LatLon to_latlon(PlanarPoint p) const {
    constexpr double deg = 180.0 / std::numbers::pi;
    return {origin_.lat + p.y / kEarthRadiusFt * deg,
            origin_.lon + p.x / (kEarthRadiusFt * cos_lat_) * deg};
  }

  LatLon origin() const { return origin_; }

 private:
  LatLon origin_{};
  double cos_lat_ = 1.0;
};

/// Centroid of the vertex set (not the area centroid).
inline LatLon vertex_centroid(std::span<const LatLon> pts) {
  LatLon c{};
  if (pts.empty()) return c;
  for (const auto& p : pts) {
    c.lat += p.lat;
    c.lon += p.lon;
  }
  c.lat /= static_cast<double>(pts.size());
  c.lon /= static_cast<double>(pts.size());
  return c;
}

struct SegmentProjection {
  double param = 0.0;     // in [0, 1] along the segment
  double distance = 0.0;  // perpendicular (or endpoint) distance
};

inline SegmentProjection project_onto_segment(PlanarPoint p, PlanarPoint a, PlanarPoint b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  const double qx = a.x + u * dx - p.x;
  const double qy = a.y + u * dy - p.y;
  return {u, std::hypot(qx, qy)};
}

namespace detail {

inline double cross(LatLon o, LatLon a, LatLon b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

inline bool on_segment(LatLon p, LatLon a, LatLon b) {
  constexpr double eps = 1e-12;
  if (std::abs(cross(a, b, p)) > eps) return false;
  return std::min(a.lon, b.lon) - eps <= p.lon && p.lon <= std::max(a.lon, b.lon) + eps &&
         std::min(a.lat, b.lat) - eps <= p.lat && p.lat <= std::max(a.lat, b.lat) + eps;
}

inline int orientation(LatLon a, LatLon b, LatLon c) {
  const double v = cross(a, b, c);
  return (v > 0.0) - (v < 0.0);
}

inline bool segments_intersect(LatLon p1, LatLon p2, LatLon q1, LatLon q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(q1, p1, p2)) return true;
  if (o2 == 0 && on_segment(q2, p1, p2)) return true;
  if (o3 == 0 && on_segment(p1, q1, q2)) return true;
  if (o4 == 0 && on_segment(p2, q1, q2)) return true;
  return false;
}

}  // namespace detail

/// Ray-casting containment; points on the boundary count as inside.
inline bool polygon_contains(std::span<const LatLon> poly, LatLon p) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const LatLon a = poly[i];
    const LatLon b = poly[j];
    if (detail::on_segment(p, a, b)) return true;
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double lon_at = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < lon_at) inside = !inside;
    }
  }
  return inside;
}

/// True when no two non-adjacent edges touch and no adjacent edges overlap.
inline bool polygon_is_simple(std::span<const LatLon> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (poly[i] == poly[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const LatLon a1 = poly[i];
    const LatLon a2 = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const LatLon b1 = poly[j];
      const LatLon b2 = poly[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges share one vertex; they must not fold back onto each other.
        const LatLon shared = (j == i + 1) ? a2 : a1;
        const LatLon other_a = (j == i + 1) ? a1 : a2;
        const LatLon other_b = (j == i + 1) ? b2 : b1;
        if (detail::orientation(other_a, shared, other_b) == 0) {
          const double dot = (other_a.lon - shared.lon) * (other_b.lon - shared.lon) +
                             (other_a.lat - shared.lat) * (other_b.lat - shared.lat);
          if (dot > 0.0) return false;
        }
        continue;
      }
      if (detail::segments_intersect(a1, a2, b1, b2)) return false;
    }
  }
  return true;
}

}  // namespace cpa
