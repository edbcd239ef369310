#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpa/corridor_model.hpp"
#include "cpa/error.hpp"
#include "cpa/matching.hpp"
#include "cpa/spectrum.hpp"
#include "cpa/units.hpp"

namespace cpa {

// ---------------------------------------------------------------------------
// Per-trip travel-time measures
// ---------------------------------------------------------------------------

struct TravelTimeAndDistance {
  double travel_time_s = 0.0;
  double distance_ft = 0.0;
};

/// Elapsed time between first and last sample and the net corridor distance
/// between them.
inline TravelTimeAndDistance trip_travel_time_and_distance(const MatchedJourney& m) {
  if (m.samples.size() < 2) throw DegenerateInputError("journey '" + m.journey_id + "' has fewer than 2 samples");
  const double t = m.samples.back().t - m.samples.front().t;
  if (!(t > 0.0)) throw DegenerateInputError("journey '" + m.journey_id + "' has zero duration");
  return {t, std::abs(m.samples.back().milepost_ft - m.samples.front().milepost_ft)};
}

/// Free-flow time over distance_ft at the posted limit.
inline double free_flow_time(double distance_ft, double speed_limit_mph) {
  if (!(distance_ft > 0.0)) throw DegenerateInputError("free-flow time needs a positive distance");
  if (!(speed_limit_mph > 0.0)) throw DegenerateInputError("free-flow time needs a positive speed limit");
  return distance_ft / mph_to_fps(speed_limit_mph);
}

inline double free_flow_time(double distance_ft, const CorridorModel& model) {
  return free_flow_time(distance_ft, model.speed_limit_mph());
}

/// Seconds per mile.
inline double travel_rate(double travel_time_s, double distance_ft) {
  if (!(distance_ft > 0.0)) throw DegenerateInputError("travel rate needs a positive distance");
  return travel_time_s / feet_to_miles(distance_ft);
}

inline double travel_time_index(double travel_time_s, double free_flow_s) {
  if (!(free_flow_s > 0.0)) throw DegenerateInputError("travel time index needs a positive free-flow time");
  return travel_time_s / free_flow_s;
}

/// Negative when the vehicle beat the limit; never clamped.
inline double delay(double travel_time_s, double free_flow_s) {
  if (!(free_flow_s > 0.0)) throw DegenerateInputError("delay needs a positive free-flow time");
  return travel_time_s - free_flow_s;
}

// ---------------------------------------------------------------------------
// SOFT
// ---------------------------------------------------------------------------

/// Uniformly sampled speed profile (ft/s).
struct SpeedSeries {
  double interval_s = 3.0;
  std::vector<double> values;
  std::size_t size() const { return values.size(); }
};

struct Spectrum {
  std::vector<std::complex<double>> coefficients;
  std::vector<double> powers;  // |X_k|^2
};

inline constexpr double kDefaultSampleInterval = 3.0;

/// Linear interpolation of reported speed onto t0 + n*interval,
/// n = 0..floor(span/interval).
inline SpeedSeries resample_speed(const MatchedJourney& m, double interval_s = kDefaultSampleInterval) {
  if (!(interval_s > 0.0)) throw DegenerateInputError("resampling interval must be positive");
  if (m.samples.size() < 2) throw DegenerateInputError("journey '" + m.journey_id + "' too short to resample");
  const double t0 = m.samples.front().t;
  const double span = m.samples.back().t - t0;
  if (span < 2.0 * interval_s)
    throw DegenerateInputError("journey '" + m.journey_id + "' spans less than two sampling intervals");
  const auto n = static_cast<std::size_t>(std::floor(span / interval_s + 1e-9)) + 1;
  SpeedSeries s{interval_s, {}};
  s.values.reserve(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::min(t0 + static_cast<double>(i) * interval_s, m.samples.back().t);
    while (seg + 2 < m.samples.size() && m.samples[seg + 1].t < t) ++seg;
    const auto& a = m.samples[seg];
    const auto& b = m.samples[seg + 1];
    const double u = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
    s.values.push_back(mph_to_fps(a.speed_mph + u * (b.speed_mph - a.speed_mph)));
  }
  return s;
}

inline Spectrum dft(const SpeedSeries& series) {
  if (series.size() < 2) throw DegenerateInputError("DFT needs at least 2 samples");
  Spectrum out;
  out.coefficients = Fft::forward(series.values);
  out.powers.reserve(out.coefficients.size());
  for (const auto& x : out.coefficients) out.powers.push_back(std::norm(x));
  return out;
}

/// Smoothness score in [0, 100]; 100 for a constant profile. The raw value
/// 100 (1 - sqrt(sum_{k>=1} (P_k / P_0)^2)) can go negative for strongly
/// oscillating profiles and is clamped.
inline double soft(const SpeedSeries& series) {
  const Spectrum spec = dft(series);
  const double p0 = spec.powers[0];
  if (!(p0 > 0.0)) throw UndefinedMetricError("SOFT is undefined for an all-zero speed series");
  double sum = 0.0;
  for (std::size_t k = 1; k < spec.powers.size(); ++k) {
    const double r = spec.powers[k] / p0;
    sum += r * r;
  }
  return std::clamp(100.0 * (1.0 - std::sqrt(sum)), 0.0, 100.0);
}

// ---------------------------------------------------------------------------
// Per-trip record
// ---------------------------------------------------------------------------

struct TripMetrics {
  double travel_time_s = 0.0;
  double distance_ft = 0.0;
  double free_flow_s = 0.0;
  double travel_rate_s_per_mi = 0.0;
  double tti = 0.0;
  double delay_s = 0.0;
  std::optional<double> soft;  // absent when the trip is too short or all-zero
};

struct TripRecord {
  std::string journey_id;
  std::string origin;
  std::string destination;
  Direction direction = Direction::ambiguous;
  double start_epoch = 0.0;
  double start_tod = 0.0;
  TripMetrics metrics;
};

/// All per-trip measures. Throws DegenerateInputError for zero duration or
/// zero net distance.
inline TripRecord compute_trip(const MatchedJourney& m, const CorridorModel& model,
                               double interval_s = kDefaultSampleInterval) {
  const auto [t, d] = trip_travel_time_and_distance(m);
  TripRecord r;
  r.journey_id = m.journey_id;
  r.origin = m.origin;
  r.destination = m.destination;
  r.direction = m.direction;
  r.start_epoch = m.samples.front().t;
  r.start_tod = model.time_of_day(r.start_epoch);
  auto& x = r.metrics;
  x.travel_time_s = t;
  x.distance_ft = d;
  x.free_flow_s = free_flow_time(d, model);
  x.travel_rate_s_per_mi = travel_rate(t, d);
  x.tti = travel_time_index(t, x.free_flow_s);
  x.delay_s = delay(t, x.free_flow_s);
  if (m.samples.back().t - m.samples.front().t >= 2.0 * interval_s) {
    try {
      x.soft = soft(resample_speed(m, interval_s));
    } catch (const UndefinedMetricError&) {
      x.soft.reset();
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Aggregation over O-D paths
// ---------------------------------------------------------------------------

using OdKey = std::pair<std::string, std::string>;

struct PathMean {
  std::size_t count = 0;
  double mean = 0.0;
};

struct CompositeResult {
  double value = 0.0;
  std::vector<OdKey> paths_used;
  std::vector<OdKey> missing_paths;  // named in Z but never observed
};

/// Sum over paths in Z of the per-path mean delay. Paths of an explicit Z with
/// no observations are skipped and listed in missing_paths.
inline CompositeResult composite_total_delay(const std::map<OdKey, std::vector<double>>& delays_by_path,
                                             const PathSet& z) {
  CompositeResult r;
  for (const auto& [key, delays] : delays_by_path) {
    if (!z.contains(key.first, key.second) || delays.empty()) continue;
    double sum = 0.0;
    for (double d : delays) sum += d;
    r.value += sum / static_cast<double>(delays.size());
    r.paths_used.push_back(key);
  }
  if (!z.is_all()) {
    for (const auto& key : z.pairs()) {
      auto it = delays_by_path.find(key);
      if (it == delays_by_path.end() || it->second.empty()) r.missing_paths.push_back(key);
    }
  }
  return r;
}

/// Count-weighted mean of per-path means, i.e. the pooled mean.
inline double weighted_average(std::span<const PathMean> paths) {
  if (paths.empty()) throw DegenerateInputError("weighted average over an empty path set");
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : paths) {
    num += static_cast<double>(p.count) * p.mean;
    den += static_cast<double>(p.count);
  }
  if (!(den > 0.0)) throw DegenerateInputError("weighted average with zero total count");
  return num / den;
}

/// Weighted average of the per-path means of `values`, restricted to Z.
/// nullopt when no path in Z has an observation.
inline std::optional<double> weighted_path_average(const std::map<OdKey, std::vector<double>>& values_by_path,
                                                   const PathSet& z) {
  std::vector<PathMean> means;
  for (const auto& [key, values] : values_by_path) {
    if (!z.contains(key.first, key.second) || values.empty()) continue;
    double sum = 0.0;
    for (double v : values) sum += v;
    means.push_back({values.size(), sum / static_cast<double>(values.size())});
  }
  if (means.empty()) return std::nullopt;
  return weighted_average(means);
}

struct BucketMetrics {
  std::size_t journeys = 0;
  std::optional<double> total_delay_s;
  std::optional<double> travel_rate_s_per_mi;
  std::optional<double> tti;
  std::optional<double> soft;
};

struct MetricsRow {
  std::string plan;
  std::string direction;
  BucketMetrics all;
  BucketMetrics end_to_end;
};

namespace detail {

inline BucketMetrics bucket_metrics(std::span<const TripRecord* const> trips, const PathSet& z) {
  std::map<OdKey, std::vector<double>> delays, rates, ttis, softs;
  BucketMetrics b;
  for (const TripRecord* t : trips) {
    if (!z.contains(t->origin, t->destination)) continue;
    const OdKey key{t->origin, t->destination};
    ++b.journeys;
    delays[key].push_back(t->metrics.delay_s);
    rates[key].push_back(t->metrics.travel_rate_s_per_mi);
    ttis[key].push_back(t->metrics.tti);
    if (t->metrics.soft) softs[key].push_back(*t->metrics.soft);
  }
  if (b.journeys == 0) return b;
  b.total_delay_s = composite_total_delay(delays, z).value;
  b.travel_rate_s_per_mi = weighted_path_average(rates, z);
  b.tti = weighted_path_average(ttis, z);
  b.soft = weighted_path_average(softs, z);
  return b;
}

}  // namespace detail

/// One row per (plan entry, direction), in plan order then increasing /
/// decreasing. Trips are bucketed by the plan containing their first sample;
/// trips outside every plan window, with an unknown endpoint, or without a
/// direction are left out.
inline std::vector<MetricsRow> metrics_by_plan_and_direction(std::span<const TripRecord> trips,
                                                             const CorridorModel& model) {
  const PathSet all = PathSet::all();
  const PathSet e2e = PathSet::end_to_end(model);
  std::vector<MetricsRow> rows;
  for (const auto& plan : model.timing_plan().entries()) {
    for (Direction dir : {Direction::increasing, Direction::decreasing}) {
      std::vector<const TripRecord*> bucket;
      for (const auto& t : trips) {
        if (t.direction != dir || !plan.contains(t.start_tod)) continue;
        if (t.origin == kUnknownLabel || t.destination == kUnknownLabel) continue;
        bucket.push_back(&t);
      }
      MetricsRow row{plan.name, direction_label(dir, model), {}, {}};
      row.all = detail::bucket_metrics(bucket, all);
      row.end_to_end = detail::bucket_metrics(bucket, e2e);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace cpa
