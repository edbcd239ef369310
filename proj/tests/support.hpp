#pragma once

// Shared fixtures and independent reference implementations for the tests.
// Nothing here calls into the library code it is used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpa/corridor_model.hpp"
#include "cpa/matching.hpp"

namespace cpa::test {

inline constexpr double kMidnight = 1633305600.0;  // 2021-10-04 00:00 UTC
inline constexpr double kTestLengthFt = 13728.0;    // 2.6 mi

inline TimingPlan weekday_plan() {
  return TimingPlan({{"early-morning", 6.5 * 3600, 8 * 3600, 109},
                     {"morning-peak", 8 * 3600, 10.5 * 3600, 103},
                     {"midday", 10.5 * 3600, 14.5 * 3600, 115},
                     {"afternoon", 14.5 * 3600, 18 * 3600, 130},
                     {"evening", 18 * 3600, 22 * 3600, 103}});
}

/// Planar <-> lat/lon for a straight east-west line along `lat`, using the
/// spherical equirectangular formulas directly.
struct EastWestLine {
  double lat = 42.5;
  double west_lon = -90.7;
  double ft_per_deg_lat() const { return (6371008.8 / 0.3048) * std::numbers::pi / 180.0; }
  double ft_per_deg_lon() const { return ft_per_deg_lat() * std::cos(lat * std::numbers::pi / 180.0); }
  LatLon at(double x_ft, double y_ft = 0.0) const {
    return {lat + y_ft / ft_per_deg_lat(), west_lon + x_ft / ft_per_deg_lon()};
  }
};

inline std::vector<LatLon> box(const EastWestLine& line, double x0, double x1, double y0, double y1) {
  return {line.at(x0, y0), line.at(x1, y0), line.at(x1, y1), line.at(x0, y1)};
}

/// Straight 2.6 mi corridor: eight intersections, end fences "1E" (west
/// end, eastbound entry) and "8W" (east end), side fences "4N"/"4S" and
/// "8S" south of the last intersection.
inline CorridorSpec straight_spec(double length_ft = kTestLengthFt) {
  const EastWestLine line;
  CorridorSpec s;
  s.vertices = {line.at(0), line.at(length_ft)};
  const double step = length_ft / 9.0;
  for (int i = 1; i <= 8; ++i) s.intersections.push_back({"I" + std::to_string(i), std::round(step * i)});
  s.speed_limit_mph = 45.0;
  s.geofences = {{"1E", box(line, -300, 150, -80, 80)},
                 {"8W", box(line, length_ft - 150, length_ft + 300, -80, 80)},
                 {"4N", box(line, s.intersections[3].milepost_ft - 50, s.intersections[3].milepost_ft + 50, 60, 400)},
                 {"4S", box(line, s.intersections[3].milepost_ft - 50, s.intersections[3].milepost_ft + 50, -400, -60)},
                 {"8S", box(line, s.intersections[7].milepost_ft - 50, s.intersections[7].milepost_ft + 50, -400, -60)}};
  s.timing_plan = weekday_plan();
  s.end_to_end = {{"1E", "8W"}, {"8W", "1E"}};
  return s;
}

inline CorridorModel straight_model(double length_ft = kTestLengthFt) { return CorridorModel(straight_spec(length_ft)); }

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Textbook double-loop DFT; the phase index k*n is reduced mod N in integers.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& s) {
  const std::size_t n = s.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const long double angle = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * i) % n) /
                                static_cast<long double>(n);
      acc += static_cast<long double>(s[i]) * std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    out[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return out;
}

/// SOFT written straight from its definition on top of naive_dft.
inline double naive_soft(const std::vector<double>& s) {
  const auto x = naive_dft(s);
  const double p0 = std::norm(x[0]);
  double sum = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) sum += std::pow(std::norm(x[k]) / p0, 2);
  const double raw = 100.0 * (1.0 - std::sqrt(sum));
  return raw < 0.0 ? 0.0 : (raw > 100.0 ? 100.0 : raw);
}

struct Planar {
  double x;
  double y;
};

/// Milepost of the nearest point on a polyline, found by evaluating every
/// segment at 1 ft parameter steps.
inline double brute_force_milepost(const std::vector<Planar>& line, Planar p) {
  double best_d = INFINITY;
  double best_m = 0.0;
  double base = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double dx = line[i + 1].x - line[i].x;
    const double dy = line[i + 1].y - line[i].y;
    const double len = std::hypot(dx, dy);
    const auto steps = static_cast<int>(std::ceil(len));
    for (int k = 0; k <= steps; ++k) {
      const double u = std::min(1.0, k / len);
      const double d = std::hypot(line[i].x + u * dx - p.x, line[i].y + u * dy - p.y);
      if (d < best_d) {
        best_d = d;
        best_m = base + u * len;
      }
    }
    base += len;
  }
  return best_m;
}

/// Winding-number point-in-polygon on (lon, lat) coordinates.
inline bool winding_contains(const std::vector<LatLon>& poly, LatLon p) {
  int wn = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const LatLon a = poly[i];
    const LatLon b = poly[(i + 1) % poly.size()];
    const double side = (b.lon - a.lon) * (p.lat - a.lat) - (p.lon - a.lon) * (b.lat - a.lat);
    if (a.lat <= p.lat) {
      if (b.lat > p.lat && side > 0) ++wn;
    } else if (b.lat <= p.lat && side < 0) {
      --wn;
    }
  }
  return wn != 0;
}

/// Distinct (t-bin, x-bin) pixels a piecewise-linear trajectory visits,
/// found by sampling at the midpoints of a 0.01 s lattice. Inputs are
/// seconds after midnight (not epoch) to keep the sample times exact.
inline std::set<std::pair<long, long>> dense_ppd_pixels(const std::vector<std::pair<double, double>>& tod_x,
                                                        double plan_start, double plan_end, double cycle,
                                                        double dt, double dx, long n_x) {
  std::set<std::pair<long, long>> out;
  for (std::size_t i = 0; i + 1 < tod_x.size(); ++i) {
    const auto [t0, x0] = tod_x[i];
    const auto [t1, x1] = tod_x[i + 1];
    const auto samples = std::lround((t1 - t0) / 0.01);
    for (long j = 0; j < samples; ++j) {
      const double t = t0 + 0.005 + 0.01 * static_cast<double>(j);
      if (t < plan_start || t >= plan_end) continue;
      const double x = x0 + (x1 - x0) * (t - t0) / (t1 - t0);
      const double tau = t - cycle * std::floor(t / cycle);
      long xb = static_cast<long>(std::floor(x / dx));
      xb = std::max(0L, std::min(xb, n_x - 1));
      out.insert({static_cast<long>(std::floor(tau / dt)), xb});
    }
  }
  return out;
}

/// Random trajectory whose bin crossings fall on the 0.01 s lattice:
/// integer waypoint times, integer positions and per-leg displacement
/// dividing 100 * leg duration.
inline std::vector<std::pair<double, double>> lattice_trajectory(std::mt19937_64& rng, double start_tod,
                                                                 double length_ft, int legs) {
  std::uniform_int_distribution<int> dur(1, 3);
  std::uniform_int_distribution<int> coin(0, 9);
  std::vector<std::pair<double, double>> out;
  double t = start_tod;
  double x = std::floor(std::uniform_real_distribution<double>(0.0, length_ft)(rng));
  out.emplace_back(t, x);
  for (int i = 0; i < legs; ++i) {
    const int d = dur(rng);
    const int budget = 100 * d;
    std::vector<int> divisors;
    for (int k = 1; k <= budget; ++k) {
      if (budget % k == 0) divisors.push_back(k);
    }
    int step = 0;
    if (coin(rng) > 1) {
      step = divisors[std::uniform_int_distribution<std::size_t>(0, divisors.size() - 1)(rng)];
      if (coin(rng) < 3) step = -step;
    }
    const double nx = std::clamp(x + step, 0.0, length_ft);
    if (nx != x + step) step = 0;
    t += d;
    x += step;
    out.emplace_back(t, x);
  }
  return out;
}

}  // namespace cpa::test
