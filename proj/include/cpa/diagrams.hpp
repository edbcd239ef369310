#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cpa/corridor_model.hpp"
#include "cpa/error.hpp"
#include "cpa/ingest.hpp"
#include "cpa/matching.hpp"
#include "cpa/units.hpp"

namespace cpa {

/// Time in cycle, tau = t mod C in [0, C), with midnight as reference.
inline double cyclic_time(double t, double cycle_s) {
  double tau = std::fmod(t, cycle_s);
  if (tau < 0.0) tau += cycle_s;
  if (tau >= cycle_s) tau = 0.0;
  return tau;
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Discretization of a (time, milepost) field. Time bins cover [0, period);
/// the last spatial bin absorbs the remainder L - n_x * dx.
class GridSpec {
 public:
  GridSpec(double dt, double dx, double period, double length_ft)
      : dt_(dt), dx_(dx), period_(period), length_ft_(length_ft) {
    if (!(dt > 0.0) || !(dx > 0.0)) throw ConfigError("grid bin widths must be positive");
    if (!(period > 0.0)) throw ConfigError("grid period must be positive");
    n_x_ = static_cast<std::size_t>(std::floor(length_ft / dx));
    n_t_ = static_cast<std::size_t>(std::ceil(period / dt - 1e-9));
    if (n_x_ == 0) throw ConfigError("corridor is shorter than one spatial bin");
  }

  static GridSpec ppd(double cycle_s, double length_ft, double dt = 1.0, double dx = 100.0) {
    return {dt, dx, cycle_s, length_ft};
  }
  static GridSpec heatmap(double length_ft, double dt = 3600.0, double dx = 100.0) {
    return {dt, dx, kSecondsPerDay, length_ft};
  }

  double dt() const { return dt_; }
  double dx() const { return dx_; }
  double period() const { return period_; }
  double length_ft() const { return length_ft_; }
  std::size_t n_t() const { return n_t_; }
  std::size_t n_x() const { return n_x_; }
  std::size_t cells() const { return n_t_ * n_x_; }

  std::size_t t_bin(double tau) const {
    const auto b = static_cast<std::ptrdiff_t>(std::floor(tau / dt_));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(n_t_) - 1));
  }
  std::size_t x_bin(double milepost_ft) const {
    const auto b = static_cast<std::ptrdiff_t>(std::floor(milepost_ft / dx_));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(n_x_) - 1));
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double dt_;
  double dx_;
  double period_;
  double length_ft_;
  std::size_t n_t_ = 0;
  std::size_t n_x_ = 0;
};

/// Dense (t-bin, x-bin) array.
template <typename Cell>
class PixelGrid {
 public:
  explicit PixelGrid(GridSpec spec) : spec_(spec), cells_(spec.cells()) {}

  const GridSpec& spec() const { return spec_; }
  std::size_t n_t() const { return spec_.n_t(); }
  std::size_t n_x() const { return spec_.n_x(); }

  Cell& at(std::size_t t, std::size_t x) { return cells_[t * spec_.n_x() + x]; }
  const Cell& at(std::size_t t, std::size_t x) const { return cells_[t * spec_.n_x() + x]; }
  std::span<const Cell> cells() const { return cells_; }

  /// Cell-wise merge; both grids must share a spec.
  PixelGrid& operator+=(const PixelGrid& other) {
    if (!(spec_ == other.spec_)) throw ConfigError("cannot merge grids with different specs");
    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
    return *this;
  }

  friend bool operator==(const PixelGrid& a, const PixelGrid& b) {
    return a.spec_ == b.spec_ && a.cells_ == b.cells_;
  }

 private:
  GridSpec spec_;
  std::vector<Cell> cells_;
};

/// Platoon progression diagram: distinct journeys per pixel.
using PpdGrid = PixelGrid<std::uint32_t>;

struct SpeedCell {
  double speed_sum_mph = 0.0;
  std::uint32_t count = 0;

  std::optional<double> mean_mph() const {
    if (count == 0) return std::nullopt;
    return speed_sum_mph / count;
  }
  SpeedCell& operator+=(const SpeedCell& o) {
    speed_sum_mph += o.speed_sum_mph;
    count += o.count;
    return *this;
  }
  friend bool operator==(const SpeedCell&, const SpeedCell&) = default;
};

using HeatmapGrid = PixelGrid<SpeedCell>;

// ---------------------------------------------------------------------------
// Cyclic time-space diagram
// ---------------------------------------------------------------------------

struct CyclicPoint {
  double tau = 0.0;
  double milepost_ft = 0.0;
};

/// A run of points inside one cycle. When the run leaves through the
/// tau = C seam, exit_milepost_ft holds the interpolated milepost there.
struct CyclicPiece {
  std::vector<CyclicPoint> points;
  std::optional<double> exit_milepost_ft;
};

struct CyclicTrajectory {
  std::string journey_id;
  std::vector<CyclicPiece> pieces;
};

struct CyclicTsd {
  double cycle_s = 0.0;
  std::string plan;
  std::vector<CyclicTrajectory> trajectories;
};

/// Projects each journey in Z onto one representative cycle of the plan.
/// Samples outside the plan window are dropped; pieces split at every wrap.
inline CyclicTsd build_cyclic_tsd(std::span<const MatchedJourney> journeys, const CorridorModel& model,
                                  const PlanEntry& plan, const PathSet& z) {
  const double c = plan.cycle_s;
  CyclicTsd out{c, plan.name, {}};
  for (const auto& j : journeys) {
    if (!z.contains(j.origin, j.destination)) continue;
    CyclicTrajectory traj{j.journey_id, {}};
    CyclicPiece piece;
    bool have_prev = false;
    double prev_tod = 0.0;
    double prev_x = 0.0;
    auto flush = [&] {
      if (!piece.points.empty()) traj.pieces.push_back(std::move(piece));
      piece = {};
    };
    for (const auto& s : j.samples) {
      const double tod = model.time_of_day(s.t);
      if (!plan.contains(tod)) {
        flush();
        have_prev = false;
        continue;
      }
      const double tau = cyclic_time(tod, c);
      if (have_prev) {
        const double prev_cycle = std::floor(prev_tod / c);
        const double cycle = std::floor(tod / c);
        if (cycle == prev_cycle + 1.0) {
          // Crossed one seam: close at tau = C, reopen at tau = 0.
          const double seam = cycle * c;
          const double x_seam = prev_x + (s.milepost_ft - prev_x) * (seam - prev_tod) / (tod - prev_tod);
          piece.exit_milepost_ft = x_seam;
          flush();
          if (tau > 0.0) piece.points.push_back({0.0, x_seam});
        } else if (cycle != prev_cycle) {
          flush();
        }
      }
      piece.points.push_back({tau, s.milepost_ft});
      have_prev = true;
      prev_tod = tod;
      prev_x = s.milepost_ft;
    }
    flush();
    if (!traj.pieces.empty()) out.trajectories.push_back(std::move(traj));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Platoon progression diagram
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double kBinEps = 1e-9;

/// Marks every (t-bin, x-bin) the linear path (s0, x0) -> (s1, x1) occupies
/// for a positive duration, s in cycle time, half-open at s1.
inline void mark_segment(const GridSpec& g, double s0, double x0, double s1, double x1,
                         std::vector<std::size_t>& touched) {
  if (!(s1 > s0)) return;
  const double dt = g.dt();
  const double dx = g.dx();
  const double nx_max = static_cast<double>(g.n_x()) - 1.0;
  const auto x_at = [&](double s) { return x0 + (x1 - x0) * (s - s0) / (s1 - s0); };
  const auto k_begin = static_cast<std::ptrdiff_t>(std::floor(s0 / dt + kBinEps));
  const auto k_end = static_cast<std::ptrdiff_t>(std::ceil(s1 / dt - kBinEps));  // exclusive
  for (std::ptrdiff_t k = k_begin; k < k_end; ++k) {
    if (k < 0 || k >= static_cast<std::ptrdiff_t>(g.n_t())) continue;
    const double u0 = std::max(s0, static_cast<double>(k) * dt);
    const double u1 = std::min(s1, static_cast<double>(k + 1) * dt);
    if (!(u1 > u0)) continue;
    const double xa = (u0 == s0) ? x0 : x_at(u0);
    const double xb = (u1 == s1) ? x1 : x_at(u1);
    double lo = 0.0;
    double hi = 0.0;
    if (x1 == x0) {
      lo = hi = std::floor(xa / dx);
    } else if (x1 > x0) {
      lo = std::floor(xa / dx + kBinEps);
      hi = std::ceil(xb / dx - kBinEps) - 1.0;
    } else {
      lo = std::floor(xb / dx + kBinEps);
      hi = std::ceil(xa / dx - kBinEps) - 1.0;
    }
    lo = std::clamp(lo, 0.0, nx_max);
    hi = std::clamp(hi, 0.0, nx_max);
    for (auto b = static_cast<std::size_t>(lo); b <= static_cast<std::size_t>(hi); ++b)
      touched.push_back(static_cast<std::size_t>(k) * g.n_x() + b);
  }
}

}  // namespace detail

/// Cells one journey occupies in the PPD of a plan, as sorted flat indices.
/// The path is traversed continuously between samples and clipped to the
/// plan window; each cell appears at most once.
inline std::vector<std::size_t> ppd_cells(const MatchedJourney& j, const CorridorModel& model,
                                          const PlanEntry& plan, const GridSpec& g) {
  const double c = plan.cycle_s;
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i + 1 < j.samples.size(); ++i) {
    const auto& a = j.samples[i];
    const auto& b = j.samples[i + 1];
    const double duration = b.t - a.t;
    if (!(duration > 0.0)) continue;
    const double tod_a = model.time_of_day(a.t);
    const double tod_b = tod_a + duration;  // continuous across midnight
    const double lo = std::max(tod_a, plan.start_tod);
    const double hi = std::min(tod_b, plan.end_tod);
    if (!(hi > lo)) continue;
    const auto x_at = [&](double tod) { return a.milepost_ft + (b.milepost_ft - a.milepost_ft) * (tod - tod_a) / duration; };
    // Walk cycle by cycle.
    double cycle = std::floor(lo / c);
    double start = lo;
    while (start < hi) {
      const double seam = (cycle + 1.0) * c;
      const double stop = std::min(hi, seam);
      const double s0 = start - cycle * c;
      const double s1 = stop - cycle * c;
      const double x0 = start == tod_a ? a.milepost_ft : x_at(start);
      const double x1 = stop == tod_b ? b.milepost_ft : x_at(stop);
      detail::mark_segment(g, s0, x0, s1, x1, touched);
      start = stop;
      cycle += 1.0;
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  return touched;
}

/// Distinct-journey counts per pixel for the journeys in Z.
inline PpdGrid rasterize_into_ppd(std::span<const MatchedJourney> journeys, const CorridorModel& model,
                                  const PlanEntry& plan, const PathSet& z, const GridSpec& g) {
  if (std::abs(g.period() - plan.cycle_s) > 1e-9) throw ConfigError("PPD grid period must equal the plan cycle length");
  PpdGrid grid(g);
  for (const auto& j : journeys) {
    if (!z.contains(j.origin, j.destination)) continue;
    for (std::size_t idx : ppd_cells(j, model, plan, g)) ++grid.at(idx / g.n_x(), idx % g.n_x());
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Speed heat map
// ---------------------------------------------------------------------------

/// Mean reported waypoint speed per (time-of-day bin, x bin). Waypoints are
/// used as-is, without interpolation.
inline HeatmapGrid build_speed_heatmap(std::span<const MatchedJourney> journeys, const CorridorModel& model,
                                       const GridSpec& g) {
  HeatmapGrid grid(g);
  for (const auto& j : journeys) {
    for (const auto& s : j.samples) {
      auto& cell = grid.at(g.t_bin(model.time_of_day(s.t)), g.x_bin(s.milepost_ft));
      cell.speed_sum_mph += s.speed_mph;
      ++cell.count;
    }
  }
  return grid;
}

enum class QueueState { queued, not_queued, no_data };

inline constexpr double kDefaultQueueThresholdMph = 35.0;

/// Queued iff the mean is strictly below the threshold.
inline QueueState classify_queued(std::optional<double> mean_mph, double threshold_mph = kDefaultQueueThresholdMph) {
  if (!mean_mph) return QueueState::no_data;
  return *mean_mph < threshold_mph ? QueueState::queued : QueueState::not_queued;
}

inline QueueState classify_queued(const SpeedCell& cell, double threshold_mph = kDefaultQueueThresholdMph) {
  return classify_queued(cell.mean_mph(), threshold_mph);
}

inline const char* to_string(QueueState s) {
  switch (s) {
    case QueueState::queued: return "queued";
    case QueueState::not_queued: return "free";
    case QueueState::no_data: break;
  }
  return "no_data";
}

/// Journeys travelling in one direction.
inline std::vector<MatchedJourney> select_direction(std::span<const MatchedJourney> journeys, Direction d) {
  std::vector<MatchedJourney> out;
  for (const auto& j : journeys) {
    if (j.direction == d) out.push_back(j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cycle-length alignment
// ---------------------------------------------------------------------------

inline constexpr double kStopSpeedMph = 5.0;

/// Dispersion in cycle time of stop onsets. A stop onset is the first sample
/// of each run below stop_speed_mph; onsets are grouped by nearest
/// intersection and the count-weighted circular variance of tau under
/// `cycle_s` is returned (0 = perfectly aligned, 1 = uniform). Returns
/// nullopt when there are no stops.
inline std::optional<double> stop_phase_dispersion(std::span<const MatchedJourney> journeys,
                                                   const CorridorModel& model, double cycle_s,
                                                   double stop_speed_mph = kStopSpeedMph) {
  const auto& xs = model.intersections();
  const std::size_t groups = std::max<std::size_t>(xs.size(), 1);
  std::vector<std::complex<double>> sum(groups);
  std::vector<std::size_t> count(groups, 0);
  for (const auto& j : journeys) {
    bool stopped = false;
    for (const auto& s : j.samples) {
      const bool slow = s.speed_mph < stop_speed_mph;
      if (slow && !stopped) {
        std::size_t g = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double d = std::abs(xs[i].milepost_ft - s.milepost_ft);
          if (d < best) {
            best = d;
            g = i;
          }
        }
        const double angle = 2.0 * std::numbers::pi * cyclic_time(model.time_of_day(s.t), cycle_s) / cycle_s;
        sum[g] += std::polar(1.0, angle);
        ++count[g];
      }
      stopped = slow;
    }
  }
  double weighted = 0.0;
  std::size_t total = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    if (count[g] == 0) continue;
    weighted += static_cast<double>(count[g]) - std::abs(sum[g]);
    total += count[g];
  }
  if (total == 0) return std::nullopt;
  return weighted / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Long-form CSV export
// ---------------------------------------------------------------------------

inline void write_ppd_csv(std::ostream& out, const PpdGrid& grid) {
  std::string buf = "t_bin,x_bin,value\n";
  for (std::size_t t = 0; t < grid.n_t(); ++t) {
    for (std::size_t x = 0; x < grid.n_x(); ++x) {
      const auto v = grid.at(t, x);
      if (v == 0) continue;
      buf += std::to_string(t) + ',' + std::to_string(x) + ',' + std::to_string(v) + '\n';
    }
  }
  out << buf;
}

inline void write_heatmap_csv(std::ostream& out, const HeatmapGrid& grid, double threshold_mph) {
  std::string buf = "t_bin,x_bin,value,n,state\n";
  for (std::size_t t = 0; t < grid.n_t(); ++t) {
    for (std::size_t x = 0; x < grid.n_x(); ++x) {
      const auto& c = grid.at(t, x);
      if (c.count == 0) continue;
      buf += std::to_string(t) + ',' + std::to_string(x) + ',';
      detail::append_double(buf, *c.mean_mph());
      buf += ',' + std::to_string(c.count) + ',' + to_string(classify_queued(c, threshold_mph)) + '\n';
    }
  }
  out << buf;
}

inline void write_tsd_csv(std::ostream& out, const CyclicTsd& tsd) {
  std::string buf = "journey_id,piece,tau,milepost_ft\n";
  for (const auto& traj : tsd.trajectories) {
    for (std::size_t p = 0; p < traj.pieces.size(); ++p) {
      for (const auto& pt : traj.pieces[p].points) {
        detail::append_csv_field(buf, traj.journey_id);
        buf += ',' + std::to_string(p) + ',';
        detail::append_double(buf, pt.tau);
        buf += ',';
        detail::append_double(buf, pt.milepost_ft);
        buf += '\n';
      }
    }
  }
  out << buf;
}

}  // namespace cpa
