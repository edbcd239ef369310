#include <gtest/gtest.h>

#include <random>

#include "cpa/matching.hpp"
#include "cpa/synth.hpp"
#include "support.hpp"

namespace cpa {
namespace {

using test::EastWestLine;

Journey drive(const std::string& id, double x0, double x1, double y0 = 0, double y1 = 0, double v = 66) {
  const EastWestLine line;
  Journey j{id, {}};
  const double dist = std::abs(x1 - x0);
  const int n = static_cast<int>(dist / (3 * v)) + 1;
  for (int k = 0; k <= n; ++k) {
    const double u = static_cast<double>(k) / n;
    const double y = k == 0 ? y0 : (k == n ? y1 : 0.0);
    const auto p = line.at(x0 + u * (x1 - x0), y);
    j.waypoints.push_back({id, test::kMidnight + 50000 + 3.0 * k, p.lat, p.lon, 45});
  }
  return j;
}

TEST(MapMatch, EastboundAndWestbound) {
  const auto model = test::straight_model();
  const auto eb = match_journey(drive("eb", 0, test::kTestLengthFt), model);
  EXPECT_EQ(eb.direction, Direction::increasing);
  EXPECT_EQ(direction_label(eb.direction, model), "EB");
  for (std::size_t i = 1; i < eb.samples.size(); ++i) EXPECT_GT(eb.samples[i].milepost_ft, eb.samples[i - 1].milepost_ft);
  EXPECT_NEAR(eb.samples.front().milepost_ft, 0.0, 1e-6);
  EXPECT_NEAR(eb.samples.back().milepost_ft, test::kTestLengthFt, 1e-6);
  EXPECT_EQ(eb.od(), std::make_pair(std::string("1E"), std::string("8W")));

  const auto wb = match_journey(drive("wb", test::kTestLengthFt, 0), model);
  EXPECT_EQ(direction_label(wb.direction, model), "WB");
  EXPECT_EQ(wb.od(), std::make_pair(std::string("8W"), std::string("1E")));
}

TEST(MapMatch, ShortHopIsAmbiguous) {
  const auto model = test::straight_model();
  EXPECT_EQ(match_journey(drive("s", 5000, 5499.5), model).direction, Direction::ambiguous);
  EXPECT_EQ(match_journey(drive("s", 5000, 5500.5), model).direction, Direction::increasing);
}

TEST(MapMatch, NoisyDriveStaysNearTruth) {
  const auto model = test::straight_model();
  const EastWestLine line;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> noise(-30.0, 30.0);
  Journey clean{"c", {}}, noisy{"n", {}};
  for (int k = 0; k <= 200; ++k) {
    const double x = 66.0 * 3 * k * 0.5;
    const auto p = line.at(x);
    const auto q = line.at(x + noise(rng), noise(rng));
    clean.waypoints.push_back({"c", 3.0 * k, p.lat, p.lon, 45});
    noisy.waypoints.push_back({"n", 3.0 * k, q.lat, q.lon, 45});
  }
  const auto a = map_match(clean, model);
  const auto b = map_match(noisy, model);
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    EXPECT_NEAR(a.samples[i].milepost_ft, b.samples[i].milepost_ft, 50.0);
}

TEST(ClassifyOd, SideStreetDrivewayAndSelfCell) {
  const auto model = test::straight_model();
  const double x4 = model.intersections()[3].milepost_ft;
  const double x8 = model.intersections()[7].milepost_ft;
  // Enter at 1E, leave south at intersection 8.
  EXPECT_EQ(match_journey(drive("a", 0, x8, 0, -200), model).od(), std::make_pair(std::string("1E"), std::string("8S")));
  // Start from a driveway mid-block.
  EXPECT_EQ(match_journey(drive("b", 7000, test::kTestLengthFt), model).od(),
            std::make_pair(kUnknownLabel, std::string("8W")));
  // Wholly inside one fence.
  EXPECT_EQ(match_journey(drive("c", x4 - 20, x4 + 20, 200, 200), model).od(),
            std::make_pair(std::string("4N"), std::string("4N")));
}

TEST(ClassifyOd, ReversalSwapsLabels) {
  const auto model = test::straight_model();
  const double x4 = model.intersections()[3].milepost_ft;
  const auto fwd = drive("f", 0, x4, 0, 300);
  Journey rev = fwd;
  std::reverse(rev.waypoints.begin(), rev.waypoints.end());
  const auto a = classify_od(map_match(fwd, model), model.geofences());
  const auto b = classify_od(map_match(rev, model), model.geofences());
  EXPECT_EQ(a.first, b.second);
  EXPECT_EQ(a.second, b.first);
}

TEST(OdMatrix, EmptyAndTotals) {
  const auto model = test::straight_model();
  const auto empty = build_od_matrix({}, fence_labels(model));
  EXPECT_EQ(empty.grand_total(), 0u);
  EXPECT_EQ(empty.unknown_endpoints(), 0u);
  for (const auto& o : fence_labels(model))
    for (const auto& d : fence_labels(model)) EXPECT_EQ(empty.count(o, d), 0u);

  std::vector<MatchedJourney> js;
  js.push_back(match_journey(drive("1", 0, test::kTestLengthFt), model));
  js.push_back(match_journey(drive("2", 0, test::kTestLengthFt), model));
  js.push_back(match_journey(drive("3", test::kTestLengthFt, 0), model));
  js.push_back(match_journey(drive("4", 7000, 0), model));
  const auto od = build_od_matrix(js, fence_labels(model));
  EXPECT_EQ(od.count("1E", "8W"), 2u);
  EXPECT_EQ(od.count("8W", "1E"), 1u);
  EXPECT_EQ(od.unknown_endpoints(), 1u);
  EXPECT_EQ(od.grand_total() + od.unknown_endpoints(), js.size());
  EXPECT_EQ(od.row_total("1E"), 2u);
  EXPECT_EQ(od.column_total("1E"), 1u);
}

TEST(OdMatrix, RecoversGeneratorDemand) {
  auto sc = synth::four_signal_arterial(synth::OffsetPattern::aligned, 3);
  sc.penetration = 1.0;
  sc.demand_end_tod = sc.demand_start_tod + 1200;
  const auto out = synth::generate(sc);
  const CorridorModel model(out.corridor);
  std::vector<MatchedJourney> js;
  for (const auto& j : assemble_journeys(out.waypoints)) js.push_back(match_journey(j, model));
  const auto od = build_od_matrix(js, fence_labels(model));
  ODMatrix truth(fence_labels(model));
  for (const auto& e : out.ledger) truth.add(e.origin, e.destination);
  EXPECT_EQ(od, truth);
  EXPECT_EQ(od.unknown_endpoints(), 0u);
}

TEST(PathSet, SelectionRules) {
  const auto model = test::straight_model();
  std::vector<MatchedJourney> js;
  js.push_back(match_journey(drive("1", 0, test::kTestLengthFt), model));
  js.push_back(match_journey(drive("2", test::kTestLengthFt, 0), model));
  js.push_back(match_journey(drive("3", 0, model.intersections()[7].milepost_ft, 0, -200), model));
  js.push_back(match_journey(drive("4", 7000, 0), model));
  EXPECT_EQ(select_paths(js, PathSet::all()).size(), js.size());
  EXPECT_EQ(select_paths(js, PathSet::end_to_end(model)).size(), 2u);
  EXPECT_TRUE(select_paths(js, PathSet::of({}, model)).empty());
  const auto z = PathSet::parse("1E:8S,8W:1E", model);
  const auto sel = select_paths(js, z);
  ASSERT_EQ(sel.size(), 2u);
  EXPECT_EQ(sel[0].journey_id, "2");
  EXPECT_EQ(sel[1].journey_id, "3");
  EXPECT_EQ(PathSet::parse("e2e", model).tag(), "e2e");
  EXPECT_THROW(PathSet::parse("1E-8W", model), ConfigError);
  EXPECT_THROW(PathSet::parse("1E:9X", model), ConfigError);
}

TEST(PathSet, AllIsSupersetOfAnyZ) {
  const auto model = test::straight_model();
  const auto labels = fence_labels(model);
  std::mt19937_64 rng(12);
  std::vector<MatchedJourney> js;
  for (int i = 0; i < 100; ++i) {
    MatchedJourney m;
    m.journey_id = std::to_string(i);
    m.origin = labels[rng() % labels.size()];
    m.destination = i % 9 == 0 ? kUnknownLabel : labels[rng() % labels.size()];
    js.push_back(m);
  }
  const auto all = select_paths(js, PathSet::all());
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int k = 0; k < 5; ++k) pairs.emplace_back(labels[rng() % labels.size()], labels[rng() % labels.size()]);
    for (const auto& j : select_paths(js, PathSet::of(pairs, model))) {
      EXPECT_TRUE(std::any_of(all.begin(), all.end(), [&](const auto& a) { return a.journey_id == j.journey_id; }));
    }
  }
}

}  // namespace
}  // namespace cpa
