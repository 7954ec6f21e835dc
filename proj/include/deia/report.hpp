#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deia/geodemo.hpp"
#include "deia/sentiment.hpp"

namespace deia::report {

// half-up, stable: used for every percentage the reports emit
double round_half_up(double value, int decimals);

struct ScoredGeoPost {
  corpus::CleanPost post;
  sentiment::SentimentResult sentiment;
  std::optional<std::string> geoid;
};

struct SentimentDistribution {
  double pct_negative = 0.0;
  double pct_neutral = 0.0;
  double pct_positive = 0.0;
  long long n_negative = 0;
  long long n_neutral = 0;
  long long n_positive = 0;
  bool empty = true;
};

// Percentages of corpus size to one decimal.
SentimentDistribution sentiment_distribution(
    const std::vector<ScoredGeoPost>& corpus);

struct TractRollup {
  std::string geoid;
  long long n_negative = 0;
  long long n_neutral = 0;
  long long n_positive = 0;
  bool highly_sensitive = false;  // >=1 negative and >=1 positive post
  geo::TractClassification classification;
};

struct RollupSummary {
  std::vector<TractRollup> rollups;  // sorted by geoid
  long long unassigned_posts = 0;
  long long tracts_total = 0;
  long long tracts_with_negative = 0;
  long long tracts_with_neutral = 0;
  long long tracts_with_positive = 0;
  long long tracts_highly_sensitive = 0;
};

RollupSummary tract_rollup(const std::vector<ScoredGeoPost>& corpus,
                           const std::map<std::string, geo::TractDemographics>&
                               demographics);

struct DistributionRow {
  std::string dimension;    // income | female | hispanic_latino | black
  std::string class_label;  // Low/Medium/High/VeryHigh/unassigned
  long long post_count = 0;
  double tweet_share = 0.0;  // percent of all posts, one decimal
};

// Tweet-weighted class shares; posts without a tract or without that
// demographic land in the "unassigned" bucket, so each dimension's shares
// sum to 100 up to rounding.
std::vector<DistributionRow> demographic_distribution(
    const RollupSummary& summary, const std::vector<ScoredGeoPost>& corpus);

// file 1: Point features with sentiment/compound/geoid properties
// file 2: tract polygons with rollup and classification properties,
//         re-parseable by geo::load_tracts
void emit_geojson(const std::vector<ScoredGeoPost>& corpus,
                  const RollupSummary& summary, const geo::TractSet& tracts,
                  const std::string& points_path,
                  const std::string& tracts_path);

}  // namespace deia::report
