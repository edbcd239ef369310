#pragma once

// Corridor definition file (UTF-8 JSON):
//
//   {
//     "vertices":        [[lat, lon], ...],                    // >= 2, centerline order
//     "intersections":   [{"name": "...", "milepost_ft": 0}],  // strictly increasing
//     "speed_limit_mph": 45,
//     "direction_labels": ["EB", "WB"],                       // optional: increasing, decreasing
//     "geofences":       [{"label": "1E", "polygon": [[lat, lon], ...]}],
//     "timing_plan":     [{"name": "afternoon", "start": "14:30", "end": "18:00", "cycle_s": 130}],
//     "end_to_end":      [["1E", "8W"], ["8W", "1E"]],       // optional
//     "utc_offset_s":    -18000                               // optional, local = UTC + offset
//   }
//
// Plan "start"/"end" accept "HH:MM", "HH:MM:SS" or seconds after midnight.
// Every violation is reported as a ConfigError carrying the JSON pointer and
// the line of the offending value.

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "cpa/corridor_model.hpp"
#include "cpa/error.hpp"

namespace cpa {

namespace detail {

/// Maps the JSON pointer of every value in a (well-formed) document to the
/// 1-based line where that value starts.
class JsonLineIndex {
 public:
  explicit JsonLineIndex(std::string_view text) : text_(text) {
    skip_ws();
    if (pos_ < text_.size()) value("");
  }

  int line_of(const std::string& pointer) const {
    // Fall back to the nearest ancestor that was indexed.
    std::string p = pointer;
    while (true) {
      if (auto it = lines_.find(p); it != lines_.end()) return it->second;
      if (p.empty()) return 0;
      p.erase(p.rfind('/'));
    }
  }

 private:
  static std::string escape(std::string_view key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
        out += text_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      out += text_[pos_++];
    }
    ++pos_;  // closing quote
    return out;
  }

  void value(const std::string& pointer) {
    lines_.emplace(pointer, line_);
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(pointer + "/" + escape(key));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      std::size_t index = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(pointer + "/" + std::to_string(index++));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != '}' &&
             !std::isspace(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::unordered_map<std::string, int> lines_;
};

inline double parse_time_of_day(const nlohmann::json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw ConfigError("expected \"HH:MM[:SS]\" or seconds after midnight", where);
  const std::string s = v.get<std::string>();
  int parts[3] = {0, 0, 0};
  int count = 0;
  const char* p = s.data();
  const char* end = s.data() + s.size();
  while (p < end && count < 3) {
    auto [next, ec] = std::from_chars(p, end, parts[count]);
    if (ec != std::errc() || next == p) break;
    ++count;
    p = next;
    if (p < end && *p == ':') ++p;
    else break;
  }
  if (p != end || count < 2 || parts[0] < 0 || parts[0] > 24 || parts[1] < 0 || parts[1] > 59 || parts[2] < 0 ||
      parts[2] > 59)
    throw ConfigError("malformed time of day '" + s + "'", where);
  return parts[0] * 3600.0 + parts[1] * 60.0 + parts[2];
}

inline LatLon parse_latlon(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError("expected [lat, lon]", where);
  return {v[0].get<double>(), v[1].get<double>()};
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(std::string("missing field '") + key + "'", where);
  return obj.at(key);
}

inline CorridorSpec spec_from_json(const nlohmann::json& doc) {
  CorridorSpec spec;
  if (!doc.is_object()) throw ConfigError("corridor document must be a JSON object", "");

  const auto& verts = require(doc, "vertices", "");
  if (!verts.is_array()) throw ConfigError("'vertices' must be an array", "/vertices");
  for (std::size_t i = 0; i < verts.size(); ++i)
    spec.vertices.push_back(parse_latlon(verts[i], "/vertices/" + std::to_string(i)));

  if (doc.contains("intersections")) {
    const auto& xs = doc.at("intersections");
    if (!xs.is_array()) throw ConfigError("'intersections' must be an array", "/intersections");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::string where = "/intersections/" + std::to_string(i);
      const auto& name = require(xs[i], "name", where);
      const auto& mp = require(xs[i], "milepost_ft", where);
      if (!name.is_string()) throw ConfigError("'name' must be a string", where + "/name");
      if (!mp.is_number()) throw ConfigError("'milepost_ft' must be a number", where + "/milepost_ft");
      spec.intersections.push_back({name.get<std::string>(), mp.get<double>()});
    }
  }

  const auto& limit = require(doc, "speed_limit_mph", "");
  if (!limit.is_number()) throw ConfigError("'speed_limit_mph' must be a number", "/speed_limit_mph");
  spec.speed_limit_mph = limit.get<double>();

  if (doc.contains("direction_labels")) {
    const auto& dl = doc.at("direction_labels");
    if (!dl.is_array() || dl.size() != 2 || !dl[0].is_string() || !dl[1].is_string())
      throw ConfigError("'direction_labels' must be [increasing, decreasing]", "/direction_labels");
    spec.direction_labels = {dl[0].get<std::string>(), dl[1].get<std::string>()};
  }

  if (doc.contains("geofences")) {
    const auto& fs = doc.at("geofences");
    if (!fs.is_array()) throw ConfigError("'geofences' must be an array", "/geofences");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string where = "/geofences/" + std::to_string(i);
      const auto& label = require(fs[i], "label", where);
      const auto& poly = require(fs[i], "polygon", where);
      if (!label.is_string()) throw ConfigError("'label' must be a string", where + "/label");
      if (!poly.is_array()) throw ConfigError("'polygon' must be an array", where + "/polygon");
      Geofence f{label.get<std::string>(), {}};
      for (std::size_t j = 0; j < poly.size(); ++j)
        f.polygon.push_back(parse_latlon(poly[j], where + "/polygon/" + std::to_string(j)));
      spec.geofences.push_back(std::move(f));
    }
  }

  if (doc.contains("timing_plan")) {
    const auto& tp = doc.at("timing_plan");
    if (!tp.is_array()) throw ConfigError("'timing_plan' must be an array", "/timing_plan");
    std::vector<PlanEntry> entries;
    for (std::size_t i = 0; i < tp.size(); ++i) {
      const std::string where = "/timing_plan/" + std::to_string(i);
      const auto& name = require(tp[i], "name", where);
      if (!name.is_string()) throw ConfigError("'name' must be a string", where + "/name");
      const auto& cycle = require(tp[i], "cycle_s", where);
      if (!cycle.is_number()) throw ConfigError("'cycle_s' must be a number", where + "/cycle_s");
      PlanEntry e{name.get<std::string>(), parse_time_of_day(require(tp[i], "start", where), where + "/start"),
                  parse_time_of_day(require(tp[i], "end", where), where + "/end"), cycle.get<double>()};
      if (!(e.cycle_s > 0.0)) throw ConfigError("cycle length must be > 0", where + "/cycle_s");
      if (!(e.start_tod < e.end_tod)) throw ConfigError("start must precede end", where + "/end");
      entries.push_back(std::move(e));
    }
    try {
      spec.timing_plan = TimingPlan(std::move(entries));
    } catch (const ConfigError& e) {
      throw ConfigError(e.detail(), "/timing_plan");
    }
  }

  if (doc.contains("end_to_end")) {
    const auto& ee = doc.at("end_to_end");
    if (!ee.is_array()) throw ConfigError("'end_to_end' must be an array", "/end_to_end");
    for (std::size_t i = 0; i < ee.size(); ++i) {
      const auto& pr = ee[i];
      if (!pr.is_array() || pr.size() != 2 || !pr[0].is_string() || !pr[1].is_string())
        throw ConfigError("expected [origin, destination]", "/end_to_end/" + std::to_string(i));
      spec.end_to_end.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
    }
  }

  if (doc.contains("utc_offset_s")) {
    const auto& off = doc.at("utc_offset_s");
    if (!off.is_number()) throw ConfigError("'utc_offset_s' must be a number", "/utc_offset_s");
    spec.utc_offset_s = off.get<double>();
  }
  return spec;
}

}  // namespace detail

/// Parses and validates a corridor document.
inline CorridorModel parse_corridor(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw ConfigError(std::string("invalid JSON: ") + e.what(), "", line);
  }
  const detail::JsonLineIndex index(text);
  try {
    return CorridorModel(detail::spec_from_json(doc));
  } catch (const ConfigError& e) {
    throw ConfigError(e.detail(), e.pointer(), index.line_of(e.pointer()));
  }
}

inline CorridorModel load_corridor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corridor file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corridor(buf.str());
}

/// Serializes a spec in the same schema the loader reads.
inline nlohmann::ordered_json corridor_to_json(const CorridorSpec& spec) {
  nlohmann::ordered_json doc;
  doc["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : spec.vertices) doc["vertices"].push_back({v.lat, v.lon});
  doc["intersections"] = nlohmann::ordered_json::array();
  for (const auto& x : spec.intersections) doc["intersections"].push_back({{"name", x.name}, {"milepost_ft", x.milepost_ft}});
  doc["speed_limit_mph"] = spec.speed_limit_mph;
  doc["direction_labels"] = {spec.direction_labels.increasing, spec.direction_labels.decreasing};
  doc["geofences"] = nlohmann::ordered_json::array();
  for (const auto& f : spec.geofences) {
    nlohmann::ordered_json poly = nlohmann::ordered_json::array();
    for (const auto& p : f.polygon) poly.push_back({p.lat, p.lon});
    doc["geofences"].push_back({{"label", f.label}, {"polygon", poly}});
  }
  doc["timing_plan"] = nlohmann::ordered_json::array();
  for (const auto& e : spec.timing_plan.entries())
    doc["timing_plan"].push_back({{"name", e.name}, {"start", e.start_tod}, {"end", e.end_tod}, {"cycle_s", e.cycle_s}});
  doc["end_to_end"] = nlohmann::ordered_json::array();
  for (const auto& [o, d] : spec.end_to_end) doc["end_to_end"].push_back({o, d});
  doc["utc_offset_s"] = spec.utc_offset_s;
  return doc;
}

}  // namespace cpa
