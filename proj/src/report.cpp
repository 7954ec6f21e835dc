#include "deia/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace deia::report {

using json = nlohmann::json;

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::floor(value * scale + 0.5) / scale;
}

SentimentDistribution sentiment_distribution(
    const std::vector<ScoredGeoPost>& corpus) {
  SentimentDistribution dist;
  for (const auto& sp : corpus) {
    switch (sp.sentiment.cls) {
      case sentiment::Class::Negative: ++dist.n_negative; break;
      case sentiment::Class::Neutral: ++dist.n_neutral; break;
      case sentiment::Class::Positive: ++dist.n_positive; break;
    }
  }
  if (corpus.empty()) return dist;
  dist.empty = false;
  const double total = static_cast<double>(corpus.size());
  dist.pct_negative = round_half_up(100.0 * dist.n_negative / total, 1);
  dist.pct_neutral = round_half_up(100.0 * dist.n_neutral / total, 1);
  dist.pct_positive = round_half_up(100.0 * dist.n_positive / total, 1);
  return dist;
}

RollupSummary tract_rollup(
    const std::vector<ScoredGeoPost>& corpus,
    const std::map<std::string, geo::TractDemographics>& demographics) {
  std::map<std::string, TractRollup> by_geoid;
  RollupSummary summary;
  for (const auto& sp : corpus) {
    if (!sp.geoid) {
      ++summary.unassigned_posts;
      continue;
    }
    auto& roll = by_geoid[*sp.geoid];
    roll.geoid = *sp.geoid;
    switch (sp.sentiment.cls) {
      case sentiment::Class::Negative: ++roll.n_negative; break;
      case sentiment::Class::Neutral: ++roll.n_neutral; break;
      case sentiment::Class::Positive: ++roll.n_positive; break;
    }
  }
  summary.rollups.reserve(by_geoid.size());
  for (auto& [geoid, roll] : by_geoid) {
    roll.highly_sensitive = roll.n_negative >= 1 && roll.n_positive >= 1;
    if (const auto it = demographics.find(geoid); it != demographics.end()) {
      roll.classification = geo::classify_tract(it->second);
    }
    ++summary.tracts_total;
    if (roll.n_negative >= 1) ++summary.tracts_with_negative;
    if (roll.n_neutral >= 1) ++summary.tracts_with_neutral;
    if (roll.n_positive >= 1) ++summary.tracts_with_positive;
    if (roll.highly_sensitive) ++summary.tracts_highly_sensitive;
    summary.rollups.push_back(std::move(roll));
  }
  return summary;
}

std::vector<DistributionRow> demographic_distribution(
    const RollupSummary& summary, const std::vector<ScoredGeoPost>& corpus) {
  std::map<std::string, const TractRollup*> rollup_of;
  for (const auto& roll : summary.rollups) rollup_of[roll.geoid] = &roll;

  struct Dimension {
    const char* name;
    std::optional<geo::Band> geo::TractClassification::* member;
    bool four_bands;
  };
  static const Dimension dims[] = {
      {"income", &geo::TractClassification::income, false},
      {"female", &geo::TractClassification::female, false},
      {"hispanic_latino", &geo::TractClassification::hispanic_latino, true},
      {"black", &geo::TractClassification::black, true},
  };

  std::vector<DistributionRow> rows;
  const double total = static_cast<double>(corpus.size());
  for (const auto& dim : dims) {
    const int bands = dim.four_bands ? 4 : 3;
    std::vector<long long> counts(bands + 1, 0);  // last = unassigned
    for (const auto& sp : corpus) {
      std::optional<geo::Band> band;
      if (sp.geoid) {
        if (const auto it = rollup_of.find(*sp.geoid); it != rollup_of.end()) {
          band = it->second->classification.*(dim.member);
        }
      }
      if (band) {
        ++counts[static_cast<int>(*band)];
      } else {
        ++counts[bands];
      }
    }
    for (int b = 0; b <= bands; ++b) {
      DistributionRow row;
      row.dimension = dim.name;
      row.class_label =
          b == bands ? "unassigned" : std::string(band_name(static_cast<geo::Band>(b)));
      row.post_count = counts[b];
      row.tweet_share =
          total == 0.0 ? 0.0 : round_half_up(100.0 * counts[b] / total, 1);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

json classification_json(const geo::TractClassification& cls) {
  json j;
  j["income"] = cls.income ? json(std::string(geo::band_name(*cls.income)))
                           : json(nullptr);
  j["female"] = cls.female ? json(std::string(geo::band_name(*cls.female)))
                           : json(nullptr);
  j["hispanic_latino"] =
      cls.hispanic_latino
          ? json(std::string(geo::band_name(*cls.hispanic_latino)))
          : json(nullptr);
  j["black"] =
      cls.black ? json(std::string(geo::band_name(*cls.black))) : json(nullptr);
  return j;
}

}  // namespace

void emit_geojson(const std::vector<ScoredGeoPost>& corpus,
                  const RollupSummary& summary, const geo::TractSet& tracts,
                  const std::string& points_path,
                  const std::string& tracts_path) {
  {
    json features = json::array();
    for (const auto& sp : corpus) {
      json f;
      f["type"] = "Feature";
      f["geometry"] = {{"type", "Point"},
                       {"coordinates", {sp.post.lon, sp.post.lat}}};
      f["properties"] = {
          {"post_id", sp.post.post_id},
          {"sentiment", std::string(sentiment::class_name(sp.sentiment.cls))},
          {"compound", sp.sentiment.compound},
          {"geoid", sp.geoid ? json(*sp.geoid) : json(nullptr)},
      };
      features.push_back(std::move(f));
    }
    json doc = {{"type", "FeatureCollection"}, {"features", features}};
    std::ofstream out(points_path);
    if (!out) throw std::runtime_error("cannot write " + points_path);
    out << doc.dump(2) << '\n';
  }

  std::map<std::string, const TractRollup*> rollup_of;
  for (const auto& roll : summary.rollups) rollup_of[roll.geoid] = &roll;
  {
    // regroup polygon parts by geoid so each tract is one feature again
    std::vector<std::string> order;
    std::map<std::string, std::vector<const geo::TractPolygon*>> parts_of;
    for (const auto& tract : tracts.tracts) {
      auto& parts = parts_of[tract.geoid];
      if (parts.empty()) order.push_back(tract.geoid);
      parts.push_back(&tract);
    }

    auto ring_coords = [](const geo::Ring& ring) {
      json pts = json::array();
      for (std::size_t i = 0; i < ring.xs.size(); ++i) {
        pts.push_back({ring.xs[i], ring.ys[i]});
      }
      return pts;
    };

    json features = json::array();
    for (const auto& geoid : order) {
      const auto& parts = parts_of[geoid];
      json props;
      props["GEOID"] = geoid;
      if (const auto it = rollup_of.find(geoid); it != rollup_of.end()) {
        const TractRollup& roll = *it->second;
        props["n_negative"] = roll.n_negative;
        props["n_neutral"] = roll.n_neutral;
        props["n_positive"] = roll.n_positive;
        props["highly_sensitive"] = roll.highly_sensitive;
        props["classification"] = classification_json(roll.classification);
      } else {
        props["n_negative"] = 0;
        props["n_neutral"] = 0;
        props["n_positive"] = 0;
        props["highly_sensitive"] = false;
        props["classification"] = json(nullptr);
      }
      json geometry;
      if (parts.size() == 1) {
        json rings = json::array();
        for (const auto& ring : parts[0]->rings) rings.push_back(ring_coords(ring));
        geometry = {{"type", "Polygon"}, {"coordinates", std::move(rings)}};
      } else {
        json polys = json::array();
        for (const auto* part : parts) {
          json rings = json::array();
          for (const auto& ring : part->rings) rings.push_back(ring_coords(ring));
          polys.push_back(std::move(rings));
        }
        geometry = {{"type", "MultiPolygon"}, {"coordinates", std::move(polys)}};
      }
      json f;
      f["type"] = "Feature";
      f["properties"] = std::move(props);
      f["geometry"] = std::move(geometry);
      features.push_back(std::move(f));
    }
    json doc = {{"type", "FeatureCollection"}, {"features", features}};
    std::ofstream out(tracts_path);
    if (!out) throw std::runtime_error("cannot write " + tracts_path);
    out << doc.dump(2) << '\n';
  }
}

}  // namespace deia::report
