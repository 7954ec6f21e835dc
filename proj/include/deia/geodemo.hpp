#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace deia::geo {

struct Ring {
  // closed: xs.front()==xs.back(); parallel arrays feed the ray-cast kernel
  std::vector<double> xs;  // lon
  std::vector<double> ys;  // lat
};

struct TractPolygon {
  std::string geoid;  // 11-digit tract GEOID
  std::vector<Ring> rings;  // first exterior, rest holes
  // conservative prefilter box
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

struct FeatureError {
  std::size_t feature_index = 0;
  std::string geoid;  // may be empty when that is the problem
  std::string reason;
};

struct TractSet {
  std::vector<TractPolygon> tracts;  // file order; MultiPolygon parts split
  std::vector<FeatureError> errors;
};

// GeoJSON FeatureCollection of Polygon/MultiPolygon features carrying a
// GEOID property. Bad features produce per-feature errors and are skipped;
// an unreadable or non-GeoJSON file throws.
TractSet load_tracts(const std::string& path);

// Even-odd ray casting; boundary points count as inside; first matching
// tract in file order wins. The bbox prefilter never changes the result.
std::optional<std::string> assign_tract(double lon, double lat,
                                        const TractSet& tracts,
                                        bool bbox_prefilter = true);

struct TractDemographics {
  std::string geoid;
  std::optional<double> income_per_capita;
  std::optional<double> pct_female;
  std::optional<double> pct_hispanic_latino;
  std::optional<double> pct_black;
};

struct RowError {
  std::size_t line = 0;
  std::string reason;
};

struct AcsTable {
  std::map<std::string, TractDemographics> by_geoid;
  std::vector<RowError> row_errors;
};

// Header must be geoid,income_per_capita,pct_female,pct_hispanic_latino,
// pct_black. Empty cells mean missing. Malformed rows are rejected with
// line numbers; a duplicate geoid aborts the load (ambiguous join).
AcsTable load_acs(const std::string& path);

enum class Band { Low, Medium, High, VeryHigh };

std::string_view band_name(Band b);

// income: Low <= 50k < Medium <= 150k < High
Band classify_income(double income);
// female %: Low <= 30 < Medium <= 50 < High
Band classify_female(double pct);
// Hispanic/Latino and Black %: Low <= 10 < Medium <= 25 < High <= 50 < VeryHigh
Band classify_minority_share(double pct);

struct TractClassification {
  std::optional<Band> income;
  std::optional<Band> female;
  std::optional<Band> hispanic_latino;
  std::optional<Band> black;
};

TractClassification classify_tract(const TractDemographics& demo);

}  // namespace deia::geo
