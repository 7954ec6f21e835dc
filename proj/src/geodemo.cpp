#include "deia/geodemo.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "deia/csv.hpp"
#include "deia/kernels/kernels.hpp"

namespace deia::geo {

namespace {

using json = nlohmann::json;

bool parse_ring(const json& coords, Ring& ring, std::string& why) {
  if (!coords.is_array() || coords.size() < 4) {
    why = "ring has fewer than 4 points";
    return false;
  }
  ring.xs.reserve(coords.size());
  ring.ys.reserve(coords.size());
  for (const auto& pt : coords) {
    if (!pt.is_array() || pt.size() < 2 || !pt[0].is_number() ||
        !pt[1].is_number()) {
      why = "ring point is not [lon, lat]";
      return false;
    }
    ring.xs.push_back(pt[0].get<double>());
    ring.ys.push_back(pt[1].get<double>());
  }
  if (ring.xs.front() != ring.xs.back() || ring.ys.front() != ring.ys.back()) {
    why = "ring is not closed";
    return false;
  }
  return true;
}

bool parse_polygon(const json& coords, const std::string& geoid,
                   TractPolygon& poly, std::string& why) {
  if (!coords.is_array() || coords.empty()) {
    why = "polygon has no rings";
    return false;
  }
  poly.geoid = geoid;
  for (const auto& ring_json : coords) {
    Ring ring;
    if (!parse_ring(ring_json, ring, why)) return false;
    poly.rings.push_back(std::move(ring));
  }
  poly.min_x = poly.max_x = poly.rings[0].xs[0];
  poly.min_y = poly.max_y = poly.rings[0].ys[0];
  for (const auto& ring : poly.rings) {
    for (std::size_t i = 0; i < ring.xs.size(); ++i) {
      poly.min_x = std::min(poly.min_x, ring.xs[i]);
      poly.max_x = std::max(poly.max_x, ring.xs[i]);
      poly.min_y = std::min(poly.min_y, ring.ys[i]);
      poly.max_y = std::max(poly.max_y, ring.ys[i]);
    }
  }
  return true;
}

}  // namespace

TractSet load_tracts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read tract file: " + path);
  json root = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded() || !root.is_object() ||
      root.value("type", "") != "FeatureCollection" ||
      !root.contains("features") || !root["features"].is_array()) {
    throw std::runtime_error("not a GeoJSON FeatureCollection: " + path);
  }

  TractSet set;
  std::map<std::string, std::size_t> geoid_feature;
  std::size_t index = 0;
  for (const auto& feature : root["features"]) {
    const std::size_t feature_index = index++;
    auto fail = [&](std::string reason, const std::string& geoid = "") {
      set.errors.push_back({feature_index, geoid, std::move(reason)});
    };
    if (!feature.is_object() || feature.value("type", "") != "Feature") {
      fail("not a Feature");
      continue;
    }
    std::string geoid;
    if (feature.contains("properties") && feature["properties"].is_object()) {
      const auto& props = feature["properties"];
      if (props.contains("GEOID") && props["GEOID"].is_string()) {
        geoid = props["GEOID"].get<std::string>();
      }
    }
    if (geoid.empty()) {
      fail("missing GEOID property");
      continue;
    }
    if (auto [it, inserted] = geoid_feature.emplace(geoid, feature_index);
        !inserted) {
      fail("duplicate GEOID (already in feature " +
               std::to_string(it->second) + ")",
           geoid);
      continue;
    }
    if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
      fail("missing geometry", geoid);
      continue;
    }
    const auto& geom = feature["geometry"];
    const std::string geom_type = geom.value("type", "");
    const auto coords_it = geom.find("coordinates");
    if (coords_it == geom.end()) {
      fail("geometry has no coordinates", geoid);
      continue;
    }
    std::string why;
    std::vector<TractPolygon> parts;
    bool ok = true;
    if (geom_type == "Polygon") {
      TractPolygon poly;
      ok = parse_polygon(*coords_it, geoid, poly, why);
      if (ok) parts.push_back(std::move(poly));
    } else if (geom_type == "MultiPolygon") {
      if (!coords_it->is_array() || coords_it->empty()) {
        ok = false;
        why = "MultiPolygon has no parts";
      }
      for (const auto& part : *coords_it) {
        TractPolygon poly;
        if (!parse_polygon(part, geoid, poly, why)) {
          ok = false;
          break;
        }
        parts.push_back(std::move(poly));
      }
    } else {
      ok = false;
      why = "unsupported geometry type: " + geom_type;
    }
    if (!ok) {
      fail(why, geoid);
      continue;
    }
    for (auto& poly : parts) set.tracts.push_back(std::move(poly));
  }
  return set;
}

std::optional<std::string> assign_tract(double lon, double lat,
                                        const TractSet& tracts,
                                        bool bbox_prefilter) {
  for (const auto& tract : tracts.tracts) {
    if (bbox_prefilter &&
        (lon < tract.min_x || lon > tract.max_x || lat < tract.min_y ||
         lat > tract.max_y)) {
      continue;
    }
    bool inside = false;
    bool on_edge = false;
    for (const auto& ring : tract.rings) {
      const auto hit = kernels::point_in_ring(lon, lat, ring.xs, ring.ys);
      if (hit.on_edge) {
        on_edge = true;
        break;
      }
      inside ^= hit.crossings_odd;
    }
    if (on_edge || inside) return tract.geoid;
  }
  return std::nullopt;
}

namespace {

bool is_valid_geoid(const std::string& s) {
  if (s.size() != 11) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

bool parse_cell(const std::string& cell, double lo, double hi,
                std::optional<double>& out) {
  if (cell.empty()) {
    out = std::nullopt;
    return true;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size() || v < lo || v > hi) return false;
    out = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

AcsTable load_acs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read ACS file: " + path);
  std::vector<std::string> fields;
  if (!csv::read_record(in, fields) ||
      fields != std::vector<std::string>{"geoid", "income_per_capita",
                                         "pct_female", "pct_hispanic_latino",
                                         "pct_black"}) {
    throw std::runtime_error("unexpected ACS header in " + path);
  }
  AcsTable table;
  std::size_t line = 1;
  while (csv::read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 5) {
      table.row_errors.push_back({line, "expected 5 fields"});
      continue;
    }
    TractDemographics demo;
    demo.geoid = fields[0];
    if (!is_valid_geoid(demo.geoid)) {
      table.row_errors.push_back({line, "malformed geoid: " + fields[0]});
      continue;
    }
    constexpr double kMaxIncome = 1e9;
    if (!parse_cell(fields[1], 0.0, kMaxIncome, demo.income_per_capita)) {
      table.row_errors.push_back({line, "bad income_per_capita"});
      continue;
    }
    bool ok = parse_cell(fields[2], 0.0, 100.0, demo.pct_female) &&
              parse_cell(fields[3], 0.0, 100.0, demo.pct_hispanic_latino) &&
              parse_cell(fields[4], 0.0, 100.0, demo.pct_black);
    if (!ok) {
      table.row_errors.push_back({line, "percentage out of [0, 100]"});
      continue;
    }
    if (!table.by_geoid.emplace(demo.geoid, demo).second) {
      throw std::runtime_error("duplicate geoid in ACS file: " + demo.geoid);
    }
  }
  return table;
}

std::string_view band_name(Band b) {
  switch (b) {
    case Band::Low: return "Low";
    case Band::Medium: return "Medium";
    case Band::High: return "High";
    case Band::VeryHigh: return "VeryHigh";
  }
  return "?";
}

Band classify_income(double income) {
  if (income <= 50000.0) return Band::Low;
  if (income <= 150000.0) return Band::Medium;
  return Band::High;
}

Band classify_female(double pct) {
  if (pct <= 30.0) return Band::Low;
  if (pct <= 50.0) return Band::Medium;
  return Band::High;
}

Band classify_minority_share(double pct) {
  if (pct <= 10.0) return Band::Low;
  if (pct <= 25.0) return Band::Medium;
  if (pct <= 50.0) return Band::High;
  return Band::VeryHigh;
}

TractClassification classify_tract(const TractDemographics& demo) {
  TractClassification out;
  if (demo.income_per_capita) {
    out.income = classify_income(*demo.income_per_capita);
  }
  if (demo.pct_female) out.female = classify_female(*demo.pct_female);
  if (demo.pct_hispanic_latino) {
    out.hispanic_latino = classify_minority_share(*demo.pct_hispanic_latino);
  }
  if (demo.pct_black) out.black = classify_minority_share(*demo.pct_black);
  return out;
}

}  // namespace deia::geo
