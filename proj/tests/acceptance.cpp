// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <regex>
#include <sstream>

#include "cpa/cpa.hpp"
#include "support.hpp"

namespace {

using namespace cpa;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kDftRelTol = 1e-9;         // times N * max|s|
constexpr double kParsevalRelTol = 1e-9;
constexpr double kDftBudgetS = 5.0;
constexpr double kScaleInvarianceTol = 1e-9;
constexpr double kIdentityTol = 1e-9;
constexpr double kPpdBudgetS = 10.0;
constexpr double kEndToEndBudgetS = 60.0;
constexpr double kSampleIntervalS = 3.0;     // T0
constexpr double kDelayTolS = 2 * kSampleIntervalS;
constexpr double kCongruencePx = 0.01;
constexpr double kCycleMisfitS = 3.0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

// 1 ---------------------------------------------------------------------------

Outcome dft_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> len(2, 256);
  std::uniform_real_distribution<double> val(-80, 80);
  double worst = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> s(len(rng));
    double peak = 0, energy = 0;
    for (auto& v : s) {
      v = val(rng);
      peak = std::max(peak, std::abs(v));
      energy += v * v;
    }
    const auto n = static_cast<double>(s.size());
    const auto spec = dft(SpeedSeries{3.0, s});
    const auto ref = test::naive_dft(s);
    double err = 0, power = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      err = std::max(err, std::abs(spec.coefficients[k] - ref[k]));
      power += spec.powers[k];
    }
    worst = std::max(worst, err / (n * peak));
    o.require(err < kDftRelTol * n * peak, "coefficient error too large at N=" + std::to_string(s.size()));
    o.require(std::abs(power / n - energy) <= kParsevalRelTol * energy, "Parseval violated");
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < kDftBudgetS, "too slow");
  char buf[128];
  std::snprintf(buf, sizeof buf, "max err/(N max|s|) = %.3g, %.2f s", worst, elapsed);
  if (o.pass) o.detail = buf;
  return o;
}

// 2 ---------------------------------------------------------------------------

std::vector<double> stop_profile(int stops, std::size_t n) {
  std::vector<double> s(n, 66.0);
  for (int k = 0; k < stops; ++k) {
    const double center = (k + 0.5) * static_cast<double>(n) / stops;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::abs(static_cast<double>(i) - center);
      if (d < 5) s[i] = 0.0;
      else if (d < 10) s[i] = std::min(s[i], 66.0 * (d - 5) / 5);
    }
  }
  return s;
}

Outcome soft_boundary() {
  Outcome o;
  for (std::size_t n : {2u, 3u, 17u, 64u, 100u, 255u, 1024u})
    for (double c : {0.01, 1.0, 66.0, 5000.0})
      o.require(soft(SpeedSeries{3.0, std::vector<double>(n, c)}) == 100.0, "constant series not exactly 100");
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> v(0, 70), scale(0.001, 1000);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> s(3 + rng() % 300);
    for (auto& x : s) x = v(rng);
    const double a = soft(SpeedSeries{3.0, s});
    const double c = scale(rng);
    for (auto& x : s) x *= c;
    o.require(std::abs(soft(SpeedSeries{3.0, s}) - a) <= kScaleInvarianceTol, "not scale invariant");
  }
  const double one = soft(SpeedSeries{3.0, stop_profile(1, 120)});
  const double three = soft(SpeedSeries{3.0, stop_profile(3, 120)});
  o.require(three < one, "multi-stop profile does not score below single-stop");
  if (o.pass) o.detail = "single stop " + std::to_string(one) + " > three stops " + std::to_string(three);
  return o;
}

// 3 ---------------------------------------------------------------------------

MatchedJourney two_point_trip(double t, double x0, double x1) {
  MatchedJourney m;
  m.journey_id = "t";
  m.samples = {{test::kMidnight, x0, 30}, {test::kMidnight + t, x1, 30}};
  m.origin = "1E";
  m.destination = "8W";
  m.direction = x1 > x0 ? Direction::increasing : Direction::decreasing;
  return m;
}

Outcome metric_identities() {
  Outcome o;
  const auto model = test::straight_model();
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> x(0, test::kTestLengthFt), t(20, 1200);
  int n = 0;
  while (n < 1000) {
    const double a = x(rng), b = x(rng);
    if (std::abs(a - b) < 1) continue;
    const auto m = compute_trip(two_point_trip(t(rng), a, b), model).metrics;
    o.require(std::abs(m.delay_s - m.free_flow_s * (m.tti - 1)) <= kIdentityTol * std::max(1.0, m.travel_time_s),
              "d != t_f (T - 1)");
    o.require(std::abs(m.travel_rate_s_per_mi - m.tti * m.free_flow_s / feet_to_miles(m.distance_ft)) <=
                  kIdentityTol * m.travel_rate_s_per_mi,
              "r != T t_f / D");
    ++n;
  }
  // Exactly free-flow: 2.6 mi at 45 mph takes 208 s.
  const double tf = free_flow_time(test::kTestLengthFt, model.speed_limit_mph());
  o.require(travel_time_index(tf, tf) == 1.0 && delay(tf, tf) == 0.0, "free-flow case not (1, 0)");
  const auto m = compute_trip(two_point_trip(208, 0, test::kTestLengthFt), model).metrics;
  o.require(m.tti == 1.0 && m.delay_s == 0.0, "free-flow trip not (1, 0)");
  if (o.pass) o.detail = "1000 trips, free-flow case (1, 0)";
  return o;
}

// 4 ---------------------------------------------------------------------------

Outcome filtering() {
  Outcome o;
  const auto model = test::straight_model();
  const test::EastWestLine line;
  std::mt19937_64 rng(4004);
  std::vector<int> kind(100, 0);
  for (int i = 0; i < 7; ++i) kind[i] = 1;
  for (int i = 7; i < 12; ++i) kind[i] = 2;
  std::shuffle(kind.begin(), kind.end(), rng);
  std::vector<Waypoint> wps;
  for (int j = 0; j < 100; ++j) {
    const std::string id = "j" + std::to_string(j);
    const int points = kind[j] == 1 ? 1 + static_cast<int>(rng() % 4) : 10 + static_cast<int>(rng() % 30);
    const int gap_at = kind[j] == 2 ? 1 + static_cast<int>(rng() % (points - 1)) : -1;
    double t = test::kMidnight + 36000 + j * 600;
    for (int k = 0; k < points; ++k) {
      if (k > 0) t += (k == gap_at) ? 10.5 + static_cast<double>(rng() % 60) : 3.0;
      const auto p = line.at(500 + 100.0 * k);
      wps.push_back({id, t, p.lat, p.lon, 45});
    }
  }
  const auto r = clean_journeys(wps, model);
  o.require(r.journeys.size() == 88, "kept " + std::to_string(r.journeys.size()));
  o.require(r.tally.rejected.too_few_points == 7, "too-few " + std::to_string(r.tally.rejected.too_few_points));
  o.require(r.tally.rejected.gap == 5, "gap " + std::to_string(r.tally.rejected.gap));
  if (o.pass) o.detail = "kept 88, too-few 7, gap 5";
  return o;
}

// 5 ---------------------------------------------------------------------------

Outcome cyclic_transform() {
  Outcome o;
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> t(-1e7, 1e7), c(1, 400);
  for (int i = 0; i < 1000000; ++i) {
    // Times on a 1/64 s lattice and integer cycles keep t + C exact.
    const double tt = std::round(t(rng) * 64) / 64;
    const double cc = std::round(c(rng));
    const double tau = cyclic_time(tt, cc);
    if (!(tau >= 0.0 && tau < cc)) {
      o.require(false, "tau out of range");
      break;
    }
    if (cyclic_time(tt + cc, cc) != tau) {
      o.require(false, "tau(t + C) != tau(t)");
      break;
    }
  }
  o.require(cyclic_time(52200, 130) == 70, "tau(52200, 130) != 70");
  if (o.pass) o.detail = "1e6 samples, tau(52200, 130) = 70";
  return o;
}

// 6 ---------------------------------------------------------------------------

Outcome grid_dimensions() {
  Outcome o;
  const auto g = GridSpec::ppd(130, 13728, 1, 100);
  o.require(g.n_x() == 137, "N_x = " + std::to_string(g.n_x()));
  o.require(g.n_t() == 130 && g.cells() == 130 * 137, "PPD grid not 130 x 137");
  o.require(PpdGrid(g).cells().size() == 130 * 137, "PPD storage not 130 x 137");
  if (o.pass) o.detail = "N_x = 137, 130 x 137 cells";
  return o;
}

// 7 ---------------------------------------------------------------------------

Outcome ppd_oracle() {
  Outcome o;
  const auto model = test::straight_model();
  const auto plan = *model.timing_plan().find("afternoon");
  const auto g = GridSpec::ppd(plan.cycle_s, model.length_ft());
  std::mt19937_64 rng(7007);
  const auto t0 = Clock::now();
  std::size_t pixels = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const double start = plan.start_tod - 60 + static_cast<double>(rng() % 3600);
    const auto path = test::lattice_trajectory(rng, start, model.length_ft(), 150);
    MatchedJourney m;
    m.journey_id = "r" + std::to_string(rep);
    for (const auto& [t, x] : path) m.samples.push_back({test::kMidnight + t, x, 30});
    m.origin = "1E";
    m.destination = "8W";
    m.direction = Direction::increasing;
    std::set<std::pair<long, long>> got;
    for (auto idx : ppd_cells(m, model, plan, g))
      got.insert({static_cast<long>(idx / g.n_x()), static_cast<long>(idx % g.n_x())});
    const auto expected = test::dense_ppd_pixels(path, plan.start_tod, plan.end_tod, plan.cycle_s, g.dt(), g.dx(),
                                                 static_cast<long>(g.n_x()));
    o.require(got == expected, "journey " + std::to_string(rep) + " differs from oracle");
    pixels += expected.size();
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < kPpdBudgetS, "too slow");
  if (o.pass) o.detail = std::to_string(pixels) + " pixels, " + std::to_string(elapsed) + " s";
  return o;
}

// 8 ---------------------------------------------------------------------------

Outcome heatmap() {
  Outcome o;
  const auto model = test::straight_model();
  const auto g = GridSpec::heatmap(model.length_ft());
  std::mt19937_64 rng(8008);
  std::vector<MatchedJourney> js;
  std::map<std::pair<long, long>, std::pair<double, std::size_t>> oracle;
  double all_speeds = 0;
  for (int j = 0; j < 300; ++j) {
    MatchedJourney m;
    m.journey_id = std::to_string(j);
    double t = static_cast<double>(rng() % 86000);
    for (int k = 0; k < 50; ++k) {
      const double x = static_cast<double>(rng() % 13728);
      const double v = static_cast<double>(rng() % 280) / 4.0;
      m.samples.push_back({test::kMidnight + t, x, v});
      auto& cell = oracle[{static_cast<long>(t / 3600), std::min(static_cast<long>(x / 100), 136L)}];
      cell.first += v;
      ++cell.second;
      all_speeds += v;
      t = std::fmod(t + 3, 86400);
    }
    js.push_back(m);
  }
  const auto grid = build_speed_heatmap(js, model, g);
  double conserved = 0;
  std::size_t nonempty = 0;
  for (std::size_t t = 0; t < g.n_t(); ++t)
    for (std::size_t x = 0; x < g.n_x(); ++x) {
      const auto& c = grid.at(t, x);
      if (c.count == 0) continue;
      ++nonempty;
      const auto it = oracle.find({static_cast<long>(t), static_cast<long>(x)});
      if (it == oracle.end()) {
        o.require(false, "cell without oracle samples");
        continue;
      }
      o.require(c.count == it->second.second && *c.mean_mph() == it->second.first / static_cast<double>(it->second.second),
                "cell mean differs from group-by");
      conserved += *c.mean_mph() * static_cast<double>(c.count);
    }
  o.require(nonempty == oracle.size(), "cell count differs");
  o.require(conserved == all_speeds, "conservation not exact");
  o.require(classify_queued(std::nextafter(35.0, 0.0)) == QueueState::queued &&
                classify_queued(35.0) == QueueState::not_queued &&
                classify_queued(std::nextafter(35.0, 100.0)) == QueueState::not_queued,
            "threshold not strict at 35 mph");
  if (o.pass) o.detail = std::to_string(nonempty) + " cells exact, conservation exact";
  return o;
}

// 9 and 10 --------------------------------------------------------------------

struct ExperimentRun {
  std::map<std::string, std::string> files;  // name -> bytes
  std::vector<MetricsRow> rows;
  bool od_matches_ledger = true;
  double worst_delay_error_s = 0;
  std::size_t compared = 0;
  std::size_t missing = 0;
};

std::string text_of(const std::function<void(std::ostream&)>& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

ExperimentRun run_experiment(synth::OffsetPattern pattern) {
  ExperimentRun r;
  const auto sc = synth::four_signal_arterial(pattern, 2024);
  const auto out = synth::generate(sc);
  const CorridorModel model(out.corridor);
  const auto cleaned = clean_journeys(out.waypoints, model);
  const auto matched = match_all(cleaned.journeys, model);
  const auto trips = compute_trips(matched, model);
  r.rows = metrics_by_plan_and_direction(trips.trips, model);

  std::map<std::pair<std::string, std::string>, std::size_t> truth;
  std::map<std::string, const synth::LedgerEntry*> by_id;
  for (const auto& e : out.ledger) {
    if (!e.emitted) continue;
    ++truth[{e.origin, e.destination}];
    by_id[e.journey_id] = &e;
  }
  const auto od = build_od_matrix(matched, fence_labels(model));
  r.od_matches_ledger = od.cells() == truth && od.unknown_endpoints() == 0;

  for (const auto& t : trips.trips) {
    const auto it = by_id.find(t.journey_id);
    if (it == by_id.end()) {
      ++r.missing;
      continue;
    }
    r.worst_delay_error_s = std::max(r.worst_delay_error_s, std::abs(t.metrics.delay_s - it->second->delay_s));
    ++r.compared;
  }
  r.missing += by_id.size() - r.compared;

  r.files["waypoints.csv"] = text_of([&](std::ostream& s) { write_waypoints(s, out.waypoints); });
  r.files["ledger.csv"] = text_of([&](std::ostream& s) { synth::write_ledger(s, out.ledger); });
  std::string metrics_csv;
  for (const auto& row : r.rows) {
    metrics_csv += row.plan + ',' + row.direction;
    for (const auto* b : {&row.all, &row.end_to_end}) {
      metrics_csv += ',' + std::to_string(b->journeys);
      for (const auto& v : {b->total_delay_s, b->travel_rate_s_per_mi, b->tti, b->soft}) {
        metrics_csv += ',';
        if (v) detail::append_double(metrics_csv, *v);
      }
    }
    metrics_csv += '\n';
  }
  r.files["metrics.csv"] = metrics_csv;
  const auto plan = model.timing_plan().entries().front();
  const auto g = GridSpec::ppd(plan.cycle_s, model.length_ft());
  for (auto dir : {Direction::increasing, Direction::decreasing}) {
    const auto subset = select_direction(matched, dir);
    const std::string d = direction_label(dir, model);
    const auto tsd = build_cyclic_tsd(subset, model, plan, PathSet::all());
    const auto ppd = rasterize_into_ppd(subset, model, plan, PathSet::all(), g);
    const auto heat = build_speed_heatmap(subset, model, GridSpec::heatmap(model.length_ft()));
    RenderSpec hs;
    hs.threshold_overlay = true;
    r.files["tsd_" + d + ".svg"] = render_tsd(tsd, model);
    r.files["tsd_" + d + ".csv"] = text_of([&](std::ostream& s) { write_tsd_csv(s, tsd); });
    r.files["ppd_" + d + ".svg"] = render_ppd(ppd, model, {}, plan.name);
    r.files["ppd_" + d + ".csv"] = text_of([&](std::ostream& s) { write_ppd_csv(s, ppd); });
    r.files["heatmap_" + d + ".svg"] = render_heatmap(heat, model, hs);
    r.files["heatmap_" + d + ".csv"] = text_of([&](std::ostream& s) { write_heatmap_csv(s, heat, 35); });
  }
  // Cycle length for the congruence check in criterion 10.
  r.files["cycle"] = std::to_string(plan.cycle_s);
  return r;
}

Outcome end_to_end(ExperimentRun& aligned, ExperimentRun& anti) {
  Outcome o;
  const auto t0 = Clock::now();
  aligned = run_experiment(synth::OffsetPattern::aligned);
  anti = run_experiment(synth::OffsetPattern::anti_aligned);
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  for (std::size_t i = 0; i < aligned.rows.size(); ++i) {
    const auto& a = aligned.rows[i].all;
    const auto& b = anti.rows[i].all;
    if (a.journeys == 0 && b.journeys == 0) continue;
    const std::string where = aligned.rows[i].plan + " " + aligned.rows[i].direction;
    o.require(a.total_delay_s && b.total_delay_s && *b.total_delay_s > *a.total_delay_s,
              "(a) composite delay not higher for anti-aligned in " + where);
    o.require(a.soft && b.soft && *b.soft < *a.soft, "(b) SOFT not lower for anti-aligned in " + where);
    if (a.total_delay_s && b.total_delay_s && a.soft && b.soft)
      d << aligned.rows[i].direction << ": delay " << *a.total_delay_s << " vs " << *b.total_delay_s << ", SOFT "
        << *a.soft << " vs " << *b.soft << "; ";
  }
  o.require(aligned.od_matches_ledger && anti.od_matches_ledger, "(c) O-D matrix differs from ledger");
  o.require(aligned.missing == 0 && anti.missing == 0, "(d) emitted journey lost in the pipeline");
  const double worst = std::max(aligned.worst_delay_error_s, anti.worst_delay_error_s);
  o.require(worst <= kDelayTolS, "(d) per-journey delay error " + std::to_string(worst) + " s");
  o.require(elapsed < kEndToEndBudgetS, "run took " + std::to_string(elapsed) + " s");
  if (o.pass) {
    d << "max delay error " << worst << " s over " << aligned.compared + anti.compared << " journeys, " << elapsed
      << " s";
    o.detail = d.str();
  }
  return o;
}

std::vector<std::vector<std::pair<double, double>>> group_polylines(const std::string& svg, const std::string& group) {
  std::vector<std::vector<std::pair<double, double>>> out;
  const auto begin = svg.find("<g class=\"" + group + "\"");
  if (begin == std::string::npos) return out;
  const auto end = svg.find("</g>", begin);
  const std::string body = svg.substr(begin, end - begin);
  const std::regex re("points=\"([^\"]*)\"");
  for (std::sregex_iterator it(body.begin(), body.end(), re), e; it != e; ++it) {
    std::istringstream in((*it)[1].str());
    std::string tok;
    auto& line = out.emplace_back();
    while (in >> tok) {
      const auto comma = tok.find(',');
      line.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    }
  }
  return out;
}

Outcome determinism(const ExperimentRun& aligned, const ExperimentRun& anti) {
  Outcome o;
  const auto again_aligned = run_experiment(synth::OffsetPattern::aligned);
  const auto again_anti = run_experiment(synth::OffsetPattern::anti_aligned);
  std::size_t files = 0;
  for (const auto& [first, second] : {std::pair{&aligned, &again_aligned}, std::pair{&anti, &again_anti}}) {
    for (const auto& [name, bytes] : first->files) {
      const auto it = second->files.find(name);
      o.require(it != second->files.end() && it->second == bytes, name + " not byte-identical");
      ++files;
    }
  }
  // Second cycle is the first shifted right by exactly one cycle width.
  const RenderSpec spec;
  std::size_t lines = 0;
  for (const auto* run : {&aligned, &anti}) {
    const double cycle = std::stod(run->files.at("cycle"));
    const PlotLayout plot(spec, 2 * cycle, 1.0);
    const double shift = plot.x_of_time(cycle) - plot.x_of_time(0);
    for (const auto& [name, svg] : run->files) {
      if (name.rfind("tsd_", 0) != 0 || name.find(".svg") == std::string::npos) continue;
      const auto a = group_polylines(svg, "cycle-1");
      const auto b = group_polylines(svg, "cycle-2");
      o.require(!a.empty() && a.size() == b.size(), name + ": cycle groups differ in size");
      for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        o.require(a[i].size() == b[i].size(), name + ": polyline lengths differ");
        for (std::size_t k = 0; k < std::min(a[i].size(), b[i].size()); ++k) {
          o.require(std::abs(b[i][k].first - a[i][k].first - shift) <= kCongruencePx, name + ": x shift wrong");
          o.require(b[i][k].second == a[i][k].second, name + ": y differs");
        }
        ++lines;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(files) + " outputs identical, " + std::to_string(lines) + " congruent polylines";
  return o;
}

// 11 --------------------------------------------------------------------------

Outcome cycle_detection() {
  Outcome o;
  int wins = 0;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto sc = synth::four_signal_arterial(synth::OffsetPattern::anti_aligned, 500 + seed);
    sc.penetration = 0.2;
    sc.demand_end_tod = sc.demand_start_tod + 3600;
    const auto out = synth::generate(sc);
    const CorridorModel model(out.corridor);
    const auto matched = match_all(clean_journeys(out.waypoints, model).journeys, model);
    const double c = sc.intersections.front().signal.cycle_s;
    const auto at = stop_phase_dispersion(matched, model, c);
    const auto below = stop_phase_dispersion(matched, model, c - kCycleMisfitS);
    const auto above = stop_phase_dispersion(matched, model, c + kCycleMisfitS);
    const bool win = at && below && above && *at < *below && *at < *above;
    wins += win;
    if (seed == 1 && at && below && above) d << "seed 1: " << *below << " / " << *at << " / " << *above << "; ";
  }
  o.require(wins == 10, std::to_string(wins) + " of 10 seeds");
  if (o.pass) o.detail = d.str() + "10 of 10 seeds";
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      Outcome o;
      o.require(false, std::string("exception: ") + e.what());
      return o;
    }
  };
  report(1, "DFT oracle equivalence", guarded(dft_oracle));
  report(2, "SOFT boundary", guarded(soft_boundary));
  report(3, "travel-time identities", guarded(metric_identities));
  report(4, "filtering conformance", guarded(filtering));
  report(5, "cyclic transform", guarded(cyclic_transform));
  report(6, "grid dimensions", guarded(grid_dimensions));
  report(7, "PPD dense-sampling oracle", guarded(ppd_oracle));
  report(8, "heat map group-by", guarded(heatmap));
  ExperimentRun aligned, anti;
  report(9, "end-to-end synthetic experiment", guarded([&] { return end_to_end(aligned, anti); }));
  report(10, "determinism", guarded([&] { return determinism(aligned, anti); }));
  report(11, "wrong-cycle detection", guarded(cycle_detection));
  return failed == 0 ? 0 : 1;
}
