#pragma once

// Ground-truth corridor and trajectory generator.
//
// A straight east-west corridor with fixed-time signals. Vehicles cruise at
// the speed limit, brake to a full stop at a stop bar they would reach during
// red, wait for green (vertical queue: no car following, no discharge
// headway) and accelerate back to the limit. Side-street trips carry a short
// perpendicular leg inside the side-street geofence. Every generated vehicle
// is written to the ledger; a systematic subsample at the penetration rate
// is emitted as waypoints.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpa/corridor_io.hpp"
#include "cpa/corridor_model.hpp"
#include "cpa/diagrams.hpp"
#include "cpa/error.hpp"
#include "cpa/ingest.hpp"
#include "cpa/parallel.hpp"
#include "cpa/units.hpp"

namespace cpa::synth {

struct SignalTiming {
  double cycle_s = 100.0;
  double offset_s = 0.0;        // green starts at tau = offset
  double green_fraction = 0.5;  // in (0, 1]
};

struct SynthIntersection {
  std::string name;
  double milepost_ft = 0.0;
  SignalTiming signal;
};

struct Demand {
  std::string origin;
  std::string destination;
  double rate_vph = 0.0;
};

struct Scenario {
  LatLon west_end{42.5, -90.7};
  double length_ft = 11900.0;
  double speed_limit_mph = 45.0;
  std::vector<SynthIntersection> intersections;
  std::vector<Demand> demands;
  std::vector<PlanEntry> timing_plan;  // written to the corridor file; empty: one all-day plan at the first cycle
  double start_epoch = 1633305600.0;  // a midnight, UTC
  double demand_start_tod = 54000.0;
  double demand_end_tod = 61200.0;
  double penetration = 0.05;
  double waypoint_interval_s = 3.0;
  double lateral_noise_ft = 0.0;
  double speed_noise_mph = 0.0;
  double accel_fps2 = 8.0;
  double decel_fps2 = 10.0;
  double saturation_flow_vph = 1800.0;
  double side_leg_ft = 100.0;
  std::uint64_t seed = 1;
};

struct LedgerEntry {
  std::string journey_id;
  std::string origin;
  std::string destination;
  double entry_epoch = 0.0;
  double travel_time_s = 0.0;
  double distance_ft = 0.0;  // net corridor distance
  double delay_s = 0.0;      // signal delay: travel time minus free-flow time of the full path
  int stops = 0;
  bool emitted = false;
};

struct Output {
  std::vector<Waypoint> waypoints;  // ordered by journey_id, then time
  std::vector<LedgerEntry> ledger;  // ordered by journey_id
  CorridorSpec corridor;
};

// ---------------------------------------------------------------------------
// Labels and geometry
// ---------------------------------------------------------------------------

inline constexpr const char* kWestLabel = "W";
inline constexpr const char* kEastLabel = "E";

inline std::string north_label(std::size_t i) { return std::to_string(i + 1) + "N"; }
inline std::string south_label(std::size_t i) { return std::to_string(i + 1) + "S"; }

/// Builds the corridor description implied by a scenario: a straight line
/// due east from west_end, fences W/E at the ends and kN/kS per side street.
inline CorridorSpec corridor_for(const Scenario& sc) {
  CorridorSpec spec;
  const LocalFrame west(sc.west_end);
  spec.vertices = {sc.west_end, west.to_latlon({sc.length_ft, 0.0})};
  for (const auto& x : sc.intersections) spec.intersections.push_back({x.name, x.milepost_ft});
  spec.speed_limit_mph = sc.speed_limit_mph;
  spec.direction_labels = {"EB", "WB"};
  auto box = [&](double x0, double x1, double y0, double y1) {
    return std::vector<LatLon>{west.to_latlon({x0, y0}), west.to_latlon({x1, y0}), west.to_latlon({x1, y1}),
                               west.to_latlon({x0, y1})};
  };
  spec.geofences.push_back({kWestLabel, box(-250.0, 120.0, -60.0, 60.0)});
  spec.geofences.push_back({kEastLabel, box(sc.length_ft - 120.0, sc.length_ft + 250.0, -60.0, 60.0)});
  const double reach = sc.side_leg_ft + 60.0;
  for (std::size_t i = 0; i < sc.intersections.size(); ++i) {
    const double x = sc.intersections[i].milepost_ft;
    spec.geofences.push_back({north_label(i), box(x - 40.0, x + 40.0, 40.0, reach)});
    spec.geofences.push_back({south_label(i), box(x - 40.0, x + 40.0, -reach, -40.0)});
  }
  spec.end_to_end = {{kWestLabel, kEastLabel}, {kEastLabel, kWestLabel}};
  if (!sc.timing_plan.empty()) {
    spec.timing_plan = TimingPlan(sc.timing_plan);
  } else {
    const double c = sc.intersections.empty() ? 100.0 : sc.intersections.front().signal.cycle_s;
    spec.timing_plan = TimingPlan({{"synthetic", 0.0, kSecondsPerDay, c}});
  }
  return spec;
}

namespace detail {

struct Node {
  double milepost_ft = 0.0;
  int side = 0;  // +1 north leg, -1 south leg, 0 corridor end
};

inline std::optional<Node> node_of(const Scenario& sc, const std::string& label) {
  if (label == kWestLabel) return Node{0.0, 0};
  if (label == kEastLabel) return Node{sc.length_ft, 0};
  for (std::size_t i = 0; i < sc.intersections.size(); ++i) {
    if (label == north_label(i)) return Node{sc.intersections[i].milepost_ft, +1};
    if (label == south_label(i)) return Node{sc.intersections[i].milepost_ft, -1};
  }
  return std::nullopt;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Platform-independent draws on top of mt19937_64 (whose output sequence
/// is fixed by the standard, unlike the std:: distributions).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream))) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Constant-acceleration piece of a trip, in the trip's own along-path frame.
struct Phase {
  enum class Where { side_in, corridor, side_out } where = Where::corridor;
  double t0 = 0.0;
  double duration = 0.0;
  double s0 = 0.0;  // distance from the phase's reference (see position())
  double v0 = 0.0;
  double a = 0.0;
};

struct Trip {
  std::size_t demand = 0;
  double entry_epoch = 0.0;
  std::string origin;
  std::string destination;
  Node from;
  Node to;
  std::vector<Phase> phases;
  double end_epoch = 0.0;
  int stops = 0;
};

inline bool is_green(const SignalTiming& sig, double tod) {
  return cyclic_time(tod - sig.offset_s, sig.cycle_s) < sig.green_fraction * sig.cycle_s;
}

/// Start of the next green at or after tod.
inline double next_green(const SignalTiming& sig, double tod) {
  const double tau = cyclic_time(tod - sig.offset_s, sig.cycle_s);
  return tod + (sig.cycle_s - tau);
}

inline void plan_kinematics(const Scenario& sc, Trip& trip) {
  const double v = mph_to_fps(sc.speed_limit_mph);
  const double dir = trip.to.milepost_ft > trip.from.milepost_ft ? 1.0 : -1.0;
  const double total = std::abs(trip.to.milepost_ft - trip.from.milepost_ft);
  const double day0 = sc.start_epoch;
  double t = trip.entry_epoch;
  auto push = [&](Phase::Where w, double dur, double s0, double v0, double a) {
    if (dur > 0.0) trip.phases.push_back({w, t, dur, s0, v0, a});
    t += dur;
  };
  if (trip.from.side != 0) push(Phase::Where::side_in, sc.side_leg_ft / v, 0.0, v, 0.0);

  // Controlling stop bars strictly between entry and exit, in travel order.
  std::vector<std::pair<double, const SignalTiming*>> bars;
  for (const auto& x : sc.intersections) {
    const double s = (x.milepost_ft - trip.from.milepost_ft) * dir;
    if (s > 0.0 && s < total) bars.emplace_back(s, &x.signal);
  }
  std::sort(bars.begin(), bars.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  const double brake = v * v / (2.0 * sc.decel_fps2);
  const double launch = v * v / (2.0 * sc.accel_fps2);
  double s = 0.0;
  for (const auto& [bar, sig] : bars) {
    const double t_arrive = t + (bar - s) / v;
    if (is_green(*sig, t_arrive - day0)) continue;
    push(Phase::Where::corridor, (bar - brake - s) / v, s, v, 0.0);
    push(Phase::Where::corridor, v / sc.decel_fps2, bar - brake, v, -sc.decel_fps2);
    const double depart = std::max(t, day0 + next_green(*sig, t_arrive - day0));
    push(Phase::Where::corridor, depart - t, bar, 0.0, 0.0);
    push(Phase::Where::corridor, v / sc.accel_fps2, bar, 0.0, sc.accel_fps2);
    s = bar + launch;
    ++trip.stops;
  }
  push(Phase::Where::corridor, (total - s) / v, s, v, 0.0);
  if (trip.to.side != 0) push(Phase::Where::side_out, sc.side_leg_ft / v, 0.0, v, 0.0);
  trip.end_epoch = t;
}

struct KinematicState {
  PlanarPoint position;  // in the corridor's west-end frame
  double speed_fps = 0.0;
};

inline KinematicState state_at(const Scenario& sc, const Trip& trip, double epoch) {
  const double dir = trip.to.milepost_ft > trip.from.milepost_ft ? 1.0 : -1.0;
  const Phase* ph = &trip.phases.back();
  for (const auto& p : trip.phases) {
    if (epoch < p.t0 + p.duration) {
      ph = &p;
      break;
    }
  }
  const double dt = std::clamp(epoch - ph->t0, 0.0, ph->duration);
  const double s = ph->s0 + ph->v0 * dt + 0.5 * ph->a * dt * dt;
  const double speed = std::max(0.0, ph->v0 + ph->a * dt);
  switch (ph->where) {
    case Phase::Where::side_in:
      return {{trip.from.milepost_ft, trip.from.side * (sc.side_leg_ft - s)}, speed};
    case Phase::Where::side_out:
      return {{trip.to.milepost_ft, trip.to.side * s}, speed};
    case Phase::Where::corridor: break;
  }
  return {{trip.from.milepost_ft + dir * s, 0.0}, speed};
}

inline std::string journey_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%06zu", i);
  return buf;
}

inline void validate(const Scenario& sc) {
  if (!(sc.length_ft > 0.0)) throw ConfigError("scenario length_ft must be positive");
  if (!(sc.speed_limit_mph > 0.0)) throw ConfigError("scenario speed_limit_mph must be positive");
  if (!(sc.penetration >= 0.0 && sc.penetration <= 1.0)) throw ConfigError("penetration must lie in [0, 1]");
  if (!(sc.waypoint_interval_s > 0.0)) throw ConfigError("waypoint_interval_s must be positive");
  if (!(sc.accel_fps2 > 0.0) || !(sc.decel_fps2 > 0.0)) throw ConfigError("accelerations must be positive");
  if (sc.lateral_noise_ft < 0.0 || sc.speed_noise_mph < 0.0) throw ConfigError("noise levels must be >= 0");
  if (!(sc.demand_start_tod < sc.demand_end_tod)) throw ConfigError("demand window must be non-empty");
  const double v = mph_to_fps(sc.speed_limit_mph);
  const double clearance = v * v / (2.0 * sc.decel_fps2) + v * v / (2.0 * sc.accel_fps2);
  double prev = 0.0;
  for (std::size_t i = 0; i < sc.intersections.size(); ++i) {
    const auto& x = sc.intersections[i];
    if (!(x.signal.green_fraction > 0.0 && x.signal.green_fraction <= 1.0))
      throw ConfigError("green_fraction of '" + x.name + "' must lie in (0, 1]");
    if (!(x.signal.cycle_s > 0.0)) throw ConfigError("cycle_s of '" + x.name + "' must be positive");
    if (!(x.milepost_ft - prev >= clearance))
      throw ConfigError("intersection '" + x.name + "' is closer than the braking + launch distance to its neighbour");
    prev = x.milepost_ft;
  }
  if (!sc.intersections.empty() && !(sc.length_ft - prev >= clearance))
    throw ConfigError("last intersection is too close to the corridor end");
  for (const auto& d : sc.demands) {
    if (!(d.rate_vph >= 0.0)) throw ConfigError("demand rates must be >= 0");
    const auto o = node_of(sc, d.origin);
    const auto e = node_of(sc, d.destination);
    if (!o) throw ConfigError("unknown demand origin '" + d.origin + "'");
    if (!e) throw ConfigError("unknown demand destination '" + d.destination + "'");
    if (o->milepost_ft == e->milepost_ft) throw ConfigError("demand " + d.origin + "->" + d.destination + " has no corridor travel");
  }
  // Capacity: per intersection and direction, demand crossing the stop bar
  // must fit in saturation flow times green fraction.
  for (const auto& x : sc.intersections) {
    double eb = 0.0;
    double wb = 0.0;
    for (const auto& d : sc.demands) {
      const auto o = *node_of(sc, d.origin);
      const auto e = *node_of(sc, d.destination);
      const double lo = std::min(o.milepost_ft, e.milepost_ft);
      const double hi = std::max(o.milepost_ft, e.milepost_ft);
      if (x.milepost_ft > lo && x.milepost_ft < hi) (e.milepost_ft > o.milepost_ft ? eb : wb) += d.rate_vph;
    }
    const double capacity = sc.saturation_flow_vph * x.signal.green_fraction;
    if (eb > capacity || wb > capacity)
      throw InfeasibleScenarioError("demand through '" + x.name + "' exceeds green capacity of " +
                                    std::to_string(capacity) + " veh/h");
  }
}

}  // namespace detail

/// Runs a scenario. Same scenario (including seed) gives identical output.
inline Output generate(const Scenario& sc) {
  detail::validate(sc);
  Output out;
  out.corridor = corridor_for(sc);
  const CorridorModel model(out.corridor);

  // Arrivals: a Poisson stream per demand entry.
  std::vector<detail::Trip> trips;
  for (std::size_t k = 0; k < sc.demands.size(); ++k) {
    const auto& d = sc.demands[k];
    if (d.rate_vph <= 0.0) continue;
    detail::Rng rng(sc.seed, 0x100000000ull + k);
    const double rate = d.rate_vph / kSecondsPerHour;
    double t = sc.demand_start_tod + rng.exponential(rate);
    while (t < sc.demand_end_tod) {
      trips.push_back({k, sc.start_epoch + t, d.origin, d.destination, *detail::node_of(sc, d.origin),
                       *detail::node_of(sc, d.destination), {}, 0.0, 0});
      t += rng.exponential(rate);
    }
  }
  std::stable_sort(trips.begin(), trips.end(), [](const detail::Trip& a, const detail::Trip& b) {
    return a.entry_epoch != b.entry_epoch ? a.entry_epoch < b.entry_epoch : a.demand < b.demand;
  });

  const double v = mph_to_fps(sc.speed_limit_mph);
  const double p = sc.penetration;
  struct VehicleResult {
    LedgerEntry ledger;
    std::vector<Waypoint> waypoints;
  };
  auto results = parallel_map(trips.size(), [&](std::size_t i) {
    auto& trip = trips[i];
    detail::plan_kinematics(sc, trip);
    VehicleResult r;
    auto& e = r.ledger;
    e.journey_id = detail::journey_name(i);
    e.origin = trip.origin;
    e.destination = trip.destination;
    e.entry_epoch = trip.entry_epoch;
    e.travel_time_s = trip.end_epoch - trip.entry_epoch;
    e.distance_ft = std::abs(trip.to.milepost_ft - trip.from.milepost_ft);
    const double path_ft = e.distance_ft + (trip.from.side != 0 ? sc.side_leg_ft : 0.0) +
                           (trip.to.side != 0 ? sc.side_leg_ft : 0.0);
    e.delay_s = e.travel_time_s - path_ft / v;
    e.stops = trip.stops;
    e.emitted = std::floor(static_cast<double>(i + 1) * p) > std::floor(static_cast<double>(i) * p);
    if (!e.emitted) return r;

    detail::Rng rng(sc.seed, i);
    const LocalFrame west(sc.west_end);
    auto emit = [&](double epoch) {
      const auto st = detail::state_at(sc, trip, epoch);
      PlanarPoint pos = st.position;
      double speed = fps_to_mph(st.speed_fps);
      if (sc.lateral_noise_ft > 0.0) {
        pos.x += sc.lateral_noise_ft * rng.normal();
        pos.y += sc.lateral_noise_ft * rng.normal();
      }
      if (sc.speed_noise_mph > 0.0) speed = std::max(0.0, speed + sc.speed_noise_mph * rng.normal());
      const LatLon ll = west.to_latlon(pos);
      r.waypoints.push_back({e.journey_id, epoch, ll.lat, ll.lon, speed});
    };
    for (std::size_t n = 0;; ++n) {
      const double t = trip.entry_epoch + static_cast<double>(n) * sc.waypoint_interval_s;
      if (t >= trip.end_epoch - 1e-6) break;
      emit(t);
    }
    emit(trip.end_epoch);
    return r;
  });

  for (auto& r : results) {
    out.ledger.push_back(std::move(r.ledger));
    out.waypoints.insert(out.waypoints.end(), std::make_move_iterator(r.waypoints.begin()),
                         std::make_move_iterator(r.waypoints.end()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline void write_ledger(std::ostream& os, const std::vector<LedgerEntry>& ledger) {
  std::string buf = "journey_id,origin,destination,entry_epoch,travel_time_s,distance_ft,delay_s,stops,emitted\n";
  for (const auto& e : ledger) {
    buf += e.journey_id + ',' + e.origin + ',' + e.destination + ',';
    cpa::detail::append_double(buf, e.entry_epoch);
    buf += ',';
    cpa::detail::append_double(buf, e.travel_time_s);
    buf += ',';
    cpa::detail::append_double(buf, e.distance_ft);
    buf += ',';
    cpa::detail::append_double(buf, e.delay_s);
    buf += ',' + std::to_string(e.stops) + ',' + (e.emitted ? "1" : "0") + '\n';
  }
  os << buf;
}

inline std::vector<LedgerEntry> read_ledger(std::istream& is) {
  std::vector<LedgerEntry> out;
  std::string line;
  std::getline(is, line);
  std::vector<std::string> f;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    cpa::detail::split_csv(line, f);
    if (f.size() != 9) throw IoError("malformed ledger row: " + line);
    LedgerEntry e;
    e.journey_id = f[0];
    e.origin = f[1];
    e.destination = f[2];
    e.entry_epoch = cpa::detail::parse_double(f[3]).value_or(0.0);
    e.travel_time_s = cpa::detail::parse_double(f[4]).value_or(0.0);
    e.distance_ft = cpa::detail::parse_double(f[5]).value_or(0.0);
    e.delay_s = cpa::detail::parse_double(f[6]).value_or(0.0);
    e.stops = std::stoi(f[7]);
    e.emitted = f[8] == "1";
    out.push_back(std::move(e));
  }
  return out;
}

/// Scenario file (UTF-8 JSON). Every field is optional and defaults to the
/// Scenario member initializers.
inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc;
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  try {
    if (j.contains("west_end")) sc.west_end = cpa::detail::parse_latlon(j.at("west_end"), "/west_end");
    sc.length_ft = j.value("length_ft", sc.length_ft);
    sc.speed_limit_mph = j.value("speed_limit_mph", sc.speed_limit_mph);
    if (j.contains("intersections")) {
      for (const auto& x : j.at("intersections")) {
        SynthIntersection si;
        si.name = x.at("name").get<std::string>();
        si.milepost_ft = x.at("milepost_ft").get<double>();
        si.signal.cycle_s = x.value("cycle_s", si.signal.cycle_s);
        si.signal.offset_s = x.value("offset_s", si.signal.offset_s);
        si.signal.green_fraction = x.value("green_fraction", si.signal.green_fraction);
        sc.intersections.push_back(std::move(si));
      }
    }
    if (j.contains("demands")) {
      for (const auto& d : j.at("demands"))
        sc.demands.push_back({d.at("origin").get<std::string>(), d.at("destination").get<std::string>(),
                              d.at("rate_vph").get<double>()});
    }
    if (j.contains("timing_plan")) {
      const auto& tp = j.at("timing_plan");
      for (std::size_t i = 0; i < tp.size(); ++i) {
        const std::string where = "/timing_plan/" + std::to_string(i);
        sc.timing_plan.push_back({tp[i].at("name").get<std::string>(),
                                  cpa::detail::parse_time_of_day(tp[i].at("start"), where + "/start"),
                                  cpa::detail::parse_time_of_day(tp[i].at("end"), where + "/end"),
                                  tp[i].at("cycle_s").get<double>()});
      }
    }
    sc.start_epoch = j.value("start_epoch", sc.start_epoch);
    if (j.contains("demand_start")) sc.demand_start_tod = cpa::detail::parse_time_of_day(j.at("demand_start"), "/demand_start");
    if (j.contains("demand_end")) sc.demand_end_tod = cpa::detail::parse_time_of_day(j.at("demand_end"), "/demand_end");
    sc.penetration = j.value("penetration", sc.penetration);
    sc.waypoint_interval_s = j.value("waypoint_interval_s", sc.waypoint_interval_s);
    sc.lateral_noise_ft = j.value("lateral_noise_ft", sc.lateral_noise_ft);
    sc.speed_noise_mph = j.value("speed_noise_mph", sc.speed_noise_mph);
    sc.accel_fps2 = j.value("accel_fps2", sc.accel_fps2);
    sc.decel_fps2 = j.value("decel_fps2", sc.decel_fps2);
    sc.saturation_flow_vph = j.value("saturation_flow_vph", sc.saturation_flow_vph);
    sc.side_leg_ft = j.value("side_leg_ft", sc.side_leg_ft);
    sc.seed = j.value("seed", sc.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid scenario JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

// ---------------------------------------------------------------------------
// Stock scenarios
// ---------------------------------------------------------------------------

enum class OffsetPattern { aligned, anti_aligned };

/// Four signals 3300 ft apart with C = 100 s and 50 % green at 45 mph: the
/// half-cycle link travel time gives two-way progression when aligned, and
/// shifting every other signal by C/2 makes both directions stop at each one.
inline Scenario four_signal_arterial(OffsetPattern pattern, std::uint64_t seed = 7) {
  Scenario sc;
  sc.seed = seed;
  sc.length_ft = 11900.0;
  const double v = mph_to_fps(sc.speed_limit_mph);
  const double cycle = 100.0;
  for (int i = 0; i < 4; ++i) {
    SynthIntersection x;
    x.name = "S" + std::to_string(i + 1);
    x.milepost_ft = 1000.0 + 3300.0 * i;
    x.signal.cycle_s = cycle;
    x.signal.green_fraction = 0.5;
    x.signal.offset_s = std::fmod(x.milepost_ft / v, cycle);
    if (pattern == OffsetPattern::anti_aligned && i % 2 == 1) x.signal.offset_s = std::fmod(x.signal.offset_s + cycle / 2, cycle);
    sc.intersections.push_back(x);
  }
  sc.timing_plan = {{"afternoon", 52200.0, 64800.0, cycle}};
  sc.demand_start_tod = 54000.0;  // 15:00
  sc.demand_end_tod = 61200.0;    // 17:00, two hours
  sc.penetration = 0.05;
  sc.demands = {
      {kWestLabel, kEastLabel, 420.0}, {kEastLabel, kWestLabel, 420.0}, {"1N", kEastLabel, 60.0},
      {"2S", kWestLabel, 60.0},        {kWestLabel, "3S", 60.0},        {kEastLabel, "2N", 60.0},
      {"1S", "4N", 40.0},              {"4S", "1N", 40.0},
  };
  return sc;
}

}  // namespace cpa::synth
