// cpa: corridor progression analytics over connected-vehicle waypoint files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "cpa/cpa.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
  std::string corridor;
  std::vector<std::string> inputs;
  std::string out = "out";
  std::string paths = "all";
  std::string plan;
  std::string direction;
  std::optional<double> dt;
  std::optional<double> dx;
  double threshold = cpa::kDefaultQueueThresholdMph;
  std::optional<std::uint64_t> seed;
  std::string scenario;
  std::string preset;
  std::string config;
};

Json config_json(const RunConfig& c) {
  Json j;
  j["corridor"] = c.corridor;
  j["input"] = c.inputs;
  j["paths"] = c.paths;
  j["plan"] = c.plan;
  j["direction"] = c.direction;
  j["dt"] = c.dt ? Json(*c.dt) : Json(nullptr);
  j["dx"] = c.dx ? Json(*c.dx) : Json(nullptr);
  j["threshold"] = c.threshold;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["scenario"] = c.scenario;
  j["preset"] = c.preset;
  return j;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cpa::IoError("cannot read '" + path.string() + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char b[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    hex += b;
  }
  return hex;
}

// Collects everything written during a run for the manifest.
class Run {
 public:
  Run(std::string subcommand, const RunConfig& cfg) : subcommand_(std::move(subcommand)), cfg_(cfg) {
    fs::create_directories(cfg_.out);
  }

  void input(const std::string& path) {
    if (!fs::exists(path)) throw cpa::IoError("input file '" + path + "' does not exist");
    inputs_.emplace_back(path, sha256_file(path));
  }

  std::ofstream& open(const std::string& name) {
    auto& f = streams_.emplace_back(fs::path(cfg_.out) / name, std::ios::binary);
    if (!f) throw cpa::IoError("cannot write '" + (fs::path(cfg_.out) / name).string() + "'");
    outputs_.push_back(name);
    return f;
  }

  void write(const std::string& name, const std::string& text) { open(name) << text; }
  void write(const std::string& name, const Json& j) { open(name) << j.dump(2) << '\n'; }

  void warn(const std::string& message) {
    std::cerr << "warning: " << message << '\n';
    warnings_.push_back(message);
  }

  void finish() {
    for (auto& f : streams_) {
      f.close();
      if (!f) throw cpa::IoError("write to output directory '" + cfg_.out + "' failed");
    }
    Json m;
    m["tool"] = "cpa";
    m["version"] = kToolVersion;
    m["subcommand"] = subcommand_;
    m["config"] = config_json(cfg_);
    Json ins = Json::array();
    for (const auto& [path, digest] : inputs_) ins.push_back({{"path", path}, {"sha256", digest}});
    m["inputs"] = ins;
    Json outs = Json::array();
    for (const auto& name : outputs_) outs.push_back({{"path", name}, {"sha256", sha256_file(fs::path(cfg_.out) / name)}});
    m["outputs"] = outs;
    m["warnings"] = warnings_;
    std::ofstream(fs::path(cfg_.out) / "manifest.json", std::ios::binary) << m.dump(2) << '\n';
  }

 private:
  std::string subcommand_;
  const RunConfig& cfg_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
  std::vector<std::string> warnings_;
  std::list<std::ofstream> streams_;
};

cpa::CorridorModel load_model(Run& run, const RunConfig& cfg) {
  if (cfg.corridor.empty()) throw cpa::ConfigError("--corridor is required");
  if (!fs::exists(cfg.corridor)) throw cpa::IoError("corridor file '" + cfg.corridor + "' does not exist");
  run.input(cfg.corridor);
  return cpa::load_corridor(cfg.corridor);
}

struct Loaded {
  std::vector<cpa::Waypoint> waypoints;
  std::vector<std::pair<std::string, cpa::RowDiagnostic>> diagnostics;
};

Loaded load_waypoints(Run& run, const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw cpa::ConfigError("at least one --input is required");
  Loaded out;
  for (const auto& path : cfg.inputs) {
    run.input(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cpa::IoError("cannot open '" + path + "'");
    cpa::WaypointReader reader(in);
    auto w = cpa::read_all(reader);
    out.waypoints.insert(out.waypoints.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
    for (const auto& d : reader.diagnostics()) out.diagnostics.emplace_back(path, d);
  }
  return out;
}

// Inputs -> cleaned, matched journeys. Warns when nothing survives.
std::vector<cpa::MatchedJourney> matched_input(Run& run, const RunConfig& cfg, const cpa::CorridorModel& model) {
  const auto loaded = load_waypoints(run, cfg);
  const auto cleaned = cpa::clean_journeys(loaded.waypoints, model);
  if (cleaned.journeys.empty()) run.warn("no journeys left after cleaning; outputs are empty");
  return cpa::match_all(cleaned.journeys, model);
}

std::vector<cpa::PlanEntry> selected_plans(const RunConfig& cfg, const cpa::CorridorModel& model) {
  if (cfg.plan.empty()) return model.timing_plan().entries();
  const auto* p = model.timing_plan().find(cfg.plan);
  if (!p) throw cpa::ConfigError("unknown plan '" + cfg.plan + "'", "/timing_plan");
  return {*p};
}

std::vector<cpa::Direction> selected_directions(const RunConfig& cfg, const cpa::CorridorModel& model) {
  using cpa::Direction;
  if (cfg.direction.empty()) return {Direction::increasing, Direction::decreasing};
  const auto& labels = model.direction_labels();
  if (cfg.direction == labels.increasing || cfg.direction == "increasing") return {Direction::increasing};
  if (cfg.direction == labels.decreasing || cfg.direction == "decreasing") return {Direction::decreasing};
  throw cpa::ConfigError("unknown direction '" + cfg.direction + "'; expected " + labels.increasing + " or " +
                         labels.decreasing);
}

void require_positive(const std::optional<double>& v, const char* name) {
  if (v && !(*v > 0.0)) throw cpa::ConfigError(std::string("--") + name + " must be positive");
}

std::string csv_number(double v) {
  std::string s;
  cpa::detail::append_double(s, v);
  return s;
}

std::string csv_optional(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void cmd_ingest(const RunConfig& cfg) {
  Run run("ingest", cfg);
  const auto model = load_model(run, cfg);
  const auto loaded = load_waypoints(run, cfg);
  const auto cleaned = cpa::clean_journeys(loaded.waypoints, model);
  if (cleaned.journeys.empty()) run.warn("no journeys left after cleaning; outputs are empty");
  std::vector<cpa::Waypoint> kept;
  for (const auto& j : cleaned.journeys) kept.insert(kept.end(), j.waypoints.begin(), j.waypoints.end());
  cpa::write_waypoints(run.open("journeys.csv"), kept);

  const auto& t = cleaned.tally;
  Json tally;
  tally["rows_rejected"] = loaded.diagnostics.size();
  tally["waypoints"] = t.waypoints;
  tally["journeys"] = t.journeys;
  tally["outside_corridor"] = t.outside_corridor;
  tally["truncated"] = t.truncated;
  tally["rejected"] = {{"too_few_points", t.rejected.too_few_points}, {"gap", t.rejected.gap}};
  tally["kept"] = t.kept;
  Json diags = Json::array();
  for (const auto& [file, d] : loaded.diagnostics) diags.push_back({{"file", file}, {"line", d.line}, {"message", d.message}});
  tally["row_diagnostics"] = diags;
  run.write("ingest_tally.json", tally);
  run.finish();
}

void cmd_od_matrix(const RunConfig& cfg) {
  Run run("od-matrix", cfg);
  const auto model = load_model(run, cfg);
  const auto matched = matched_input(run, cfg, model);
  const auto labels = cpa::fence_labels(model);
  const auto od = cpa::build_od_matrix(matched, labels);

  std::string csv = "origin";
  for (const auto& d : labels) csv += ',' + d;
  csv += ",total\n";
  for (const auto& o : labels) {
    csv += o;
    for (const auto& d : labels) csv += ',' + std::to_string(od.count(o, d));
    csv += ',' + std::to_string(od.row_total(o)) + '\n';
  }
  csv += "total";
  for (const auto& d : labels) csv += ',' + std::to_string(od.column_total(d));
  csv += ',' + std::to_string(od.grand_total()) + '\n';
  run.write("od_matrix.csv", csv);
  run.write("od_summary.json", Json{{"journeys", matched.size()},
                                    {"known_endpoints", od.grand_total()},
                                    {"unknown_endpoints", od.unknown_endpoints()}});
  run.finish();
}

void cmd_metrics(const RunConfig& cfg) {
  Run run("metrics", cfg);
  const auto model = load_model(run, cfg);
  const auto matched = matched_input(run, cfg, model);
  const auto trips = cpa::compute_trips(matched, model);
  const auto plans = selected_plans(cfg, model);
  const auto dirs = selected_directions(cfg, model);

  std::string csv = "plan,direction,cycle_s";
  for (const char* z : {"all", "e2e"})
    for (const char* m : {"journeys", "total_delay_s", "travel_rate_s_per_mi", "tti", "soft"})
      csv += std::string(",") + m + "_" + z;
  csv += '\n';
  for (const auto& row : cpa::metrics_by_plan_and_direction(trips.trips, model)) {
    const bool plan_ok = std::any_of(plans.begin(), plans.end(), [&](const auto& p) { return p.name == row.plan; });
    const bool dir_ok = std::any_of(dirs.begin(), dirs.end(),
                                    [&](auto d) { return cpa::direction_label(d, model) == row.direction; });
    if (!plan_ok || !dir_ok) continue;
    csv += row.plan + ',' + row.direction + ',' + csv_number(model.timing_plan().find(row.plan)->cycle_s);
    for (const auto* b : {&row.all, &row.end_to_end}) {
      csv += ',' + std::to_string(b->journeys) + ',' + csv_optional(b->total_delay_s) + ',' +
             csv_optional(b->travel_rate_s_per_mi) + ',' + csv_optional(b->tti) + ',' + csv_optional(b->soft);
    }
    csv += '\n';
  }
  run.write("metrics.csv", csv);

  std::string tcsv =
      "journey_id,origin,destination,direction,plan,start_epoch,travel_time_s,distance_ft,free_flow_s,"
      "travel_rate_s_per_mi,tti,delay_s,soft\n";
  for (const auto& t : trips.trips) {
    const auto plan = cpa::plan_for(t.start_tod, model.timing_plan());
    const auto& m = t.metrics;
    tcsv += t.journey_id + ',' + t.origin + ',' + t.destination + ',' + cpa::direction_label(t.direction, model) + ',' +
            (plan ? plan->name : std::string()) + ',' + csv_number(t.start_epoch) + ',' + csv_number(m.travel_time_s) +
            ',' + csv_number(m.distance_ft) + ',' + csv_number(m.free_flow_s) + ',' +
            csv_number(m.travel_rate_s_per_mi) + ',' + csv_number(m.tti) + ',' + csv_number(m.delay_s) + ',' +
            csv_optional(m.soft) + '\n';
  }
  run.write("trips.csv", tcsv);
  if (!trips.skipped.empty()) run.warn(std::to_string(trips.skipped.size()) + " journeys with zero distance or duration skipped");
  run.finish();
}

void cmd_tsd(const RunConfig& cfg) {
  Run run("tsd", cfg);
  const auto model = load_model(run, cfg);
  const auto matched = matched_input(run, cfg, model);
  const auto z = cpa::PathSet::parse(cfg.paths, model);
  for (const auto& plan : selected_plans(cfg, model)) {
    for (auto dir : selected_directions(cfg, model)) {
      const auto subset = cpa::select_direction(matched, dir);
      const auto tsd = cpa::build_cyclic_tsd(subset, model, plan, z);
      const std::string d = cpa::direction_label(dir, model);
      run.write(cpa::output_name("tsd", plan.name, d, z.tag()), cpa::render_tsd(tsd, model));
      cpa::write_tsd_csv(run.open(cpa::output_name("tsd", plan.name, d, z.tag(), "csv")), tsd);
    }
  }
  run.finish();
}

void cmd_ppd(const RunConfig& cfg) {
  Run run("ppd", cfg);
  require_positive(cfg.dt, "dt");
  require_positive(cfg.dx, "dx");
  const auto model = load_model(run, cfg);
  const auto matched = matched_input(run, cfg, model);
  const auto z = cpa::PathSet::parse(cfg.paths, model);
  for (const auto& plan : selected_plans(cfg, model)) {
    const auto g = cpa::GridSpec::ppd(plan.cycle_s, model.length_ft(), cfg.dt.value_or(1.0), cfg.dx.value_or(100.0));
    for (auto dir : selected_directions(cfg, model)) {
      const auto subset = cpa::select_direction(matched, dir);
      const auto grid = cpa::rasterize_into_ppd(subset, model, plan, z, g);
      const std::string d = cpa::direction_label(dir, model);
      run.write(cpa::output_name("ppd", plan.name, d, z.tag()), cpa::render_ppd(grid, model, {}, plan.name));
      cpa::write_ppd_csv(run.open(cpa::output_name("ppd", plan.name, d, z.tag(), "csv")), grid);
    }
  }
  run.finish();
}

void cmd_heatmap(const RunConfig& cfg) {
  Run run("heatmap", cfg);
  require_positive(cfg.dt, "dt");
  require_positive(cfg.dx, "dx");
  if (!(cfg.threshold > 0.0)) throw cpa::ConfigError("--threshold must be positive");
  const auto model = load_model(run, cfg);
  const auto matched = matched_input(run, cfg, model);
  const auto z = cpa::PathSet::parse(cfg.paths, model);
  const auto g = cpa::GridSpec::heatmap(model.length_ft(), cfg.dt.value_or(3600.0), cfg.dx.value_or(100.0));
  const auto in_z = cpa::select_paths(matched, z);
  cpa::RenderSpec spec;
  spec.threshold_overlay = true;
  spec.threshold_mph = cfg.threshold;
  for (auto dir : selected_directions(cfg, model)) {
    const auto subset = cpa::select_direction(in_z, dir);
    const auto grid = cpa::build_speed_heatmap(subset, model, g);
    const std::string d = cpa::direction_label(dir, model);
    run.write(cpa::output_name("heatmap", "day", d, z.tag()), cpa::render_heatmap(grid, model, spec, "Mean speed, " + d));
    cpa::write_heatmap_csv(run.open(cpa::output_name("heatmap", "day", d, z.tag(), "csv")), grid, cfg.threshold);
  }
  run.finish();
}

void cmd_synth(const RunConfig& cfg) {
  Run run("synth", cfg);
  cpa::synth::Scenario sc;
  if (!cfg.scenario.empty()) {
    run.input(cfg.scenario);
    sc = cpa::synth::load_scenario(cfg.scenario);
  } else if (cfg.preset == "aligned" || cfg.preset.empty()) {
    sc = cpa::synth::four_signal_arterial(cpa::synth::OffsetPattern::aligned);
  } else if (cfg.preset == "anti-aligned") {
    sc = cpa::synth::four_signal_arterial(cpa::synth::OffsetPattern::anti_aligned);
  } else {
    throw cpa::ConfigError("unknown preset '" + cfg.preset + "'; expected aligned or anti-aligned");
  }
  if (cfg.seed) sc.seed = *cfg.seed;
  const auto out = cpa::synth::generate(sc);
  cpa::write_waypoints(run.open("waypoints.csv"), out.waypoints);
  cpa::synth::write_ledger(run.open("ledger.csv"), out.ledger);
  run.write("corridor.json", cpa::corridor_to_json(out.corridor));
  run.finish();
}

// ---------------------------------------------------------------------------
// Errors and config
// ---------------------------------------------------------------------------

int report(const RunConfig& cfg, const std::string& kind, const std::string& message, const std::string& pointer = {},
           int line = 0, int code = 1) {
  Json e;
  e["error"] = kind;
  e["message"] = message;
  if (!pointer.empty()) e["pointer"] = pointer;
  if (line > 0) e["line"] = line;
  std::cerr << e.dump() << '\n';
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (!ec) std::ofstream(fs::path(cfg.out) / "error.json", std::ios::binary) << e.dump(2) << '\n';
  return code;
}

// Fills options not given on the command line from a JSON config file.
void merge_config(RunConfig& cfg, const CLI::App& sub) {
  if (cfg.config.empty()) return;
  std::ifstream in(cfg.config, std::ios::binary);
  if (!in) throw cpa::IoError("cannot open config file '" + cfg.config + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw cpa::ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw cpa::ConfigError("config file must hold a JSON object");
  auto unset = [&](const char* flag) {
    const CLI::Option* opt = sub.get_option_no_throw(std::string("--") + flag);
    return opt != nullptr && opt->count() == 0;
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (!unset(key.c_str())) continue;
      if (key == "corridor") cfg.corridor = value.get<std::string>();
      else if (key == "input") cfg.inputs = value.is_array() ? value.get<std::vector<std::string>>()
                                                             : std::vector<std::string>{value.get<std::string>()};
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "paths") cfg.paths = value.get<std::string>();
      else if (key == "plan") cfg.plan = value.get<std::string>();
      else if (key == "direction") cfg.direction = value.get<std::string>();
      else if (key == "dt") cfg.dt = value.get<double>();
      else if (key == "dx") cfg.dx = value.get<double>();
      else if (key == "threshold") cfg.threshold = value.get<double>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "scenario") cfg.scenario = value.get<std::string>();
      else if (key == "preset") cfg.preset = value.get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw cpa::ConfigError(std::string("config file: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corridor progression analytics for connected-vehicle waypoint data"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  RunConfig cfg;

  struct Sub {
    const char* name;
    const char* help;
    void (*run)(const RunConfig&);
  };
  const Sub subs[] = {
      {"ingest", "Clean waypoint files into journeys", cmd_ingest},
      {"od-matrix", "Origin-destination journey counts", cmd_od_matrix},
      {"metrics", "Per-plan, per-direction travel time, delay and smoothness", cmd_metrics},
      {"tsd", "Cyclic time-space diagrams", cmd_tsd},
      {"ppd", "Platoon progression diagrams", cmd_ppd},
      {"heatmap", "Hourly mean-speed heat maps", cmd_heatmap},
      {"synth", "Generate a synthetic corridor, trajectories and ledger", cmd_synth},
  };
  std::map<const CLI::App*, const Sub*> dispatch;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    dispatch[sub] = &s;
    sub->add_option("--out", cfg.out, "Output directory");
    sub->add_option("--config", cfg.config, "JSON file with default option values");
    if (std::string_view(s.name) == "synth") {
      sub->add_option("--scenario", cfg.scenario, "Scenario JSON file");
      sub->add_option("--preset", cfg.preset, "Built-in scenario: aligned | anti-aligned");
      sub->add_option("--seed", cfg.seed, "Random seed");
      continue;
    }
    sub->add_option("--corridor", cfg.corridor, "Corridor JSON file");
    sub->add_option("--input", cfg.inputs, "Waypoint CSV file (repeatable)");
    sub->add_option("--paths", cfg.paths, "all | end-to-end | O:D,O:D,...");
    sub->add_option("--plan", cfg.plan, "Restrict to one timing plan");
    sub->add_option("--direction", cfg.direction, "Restrict to one direction");
    sub->add_option("--dt", cfg.dt, "Time bin (s)");
    sub->add_option("--dx", cfg.dx, "Distance bin (ft)");
    sub->add_option("--threshold", cfg.threshold, "Queue speed threshold (mph)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report(cfg, "usage", e.what(), {}, 0, 2);
  }

  const CLI::App* chosen = app.get_subcommands().front();
  try {
    merge_config(cfg, *chosen);
    dispatch.at(chosen)->run(cfg);
  } catch (const cpa::ConfigError& e) {
    return report(cfg, e.kind(), e.detail(), e.pointer(), e.line(), 2);
  } catch (const cpa::IoError& e) {
    return report(cfg, e.kind(), e.what(), {}, 0, 3);
  } catch (const cpa::Error& e) {
    return report(cfg, e.kind(), e.what());
  } catch (const std::exception& e) {
    return report(cfg, "internal", e.what());
  }
  return 0;
}
