#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace deia::corpus {

struct RawPost {
  std::string post_id;
  std::string user_id;
  std::string created_at;  // ISO-8601 UTC, kept verbatim
  std::string text;
  double lon = 0.0;
  double lat = 0.0;
};

struct BoundingBox {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lon_min = 0.0;
  double lon_max = 0.0;

  bool valid() const { return lat_min < lat_max && lon_min < lon_max; }

  // bounds are inclusive
  bool contains(double lon, double lat) const {
    return lat_min <= lat && lat <= lat_max && lon_min <= lon &&
           lon <= lon_max;
  }

  // NYC study area: lat 40.49..42.14, lon -74.25..-73.70
  static BoundingBox nyc() { return {40.49, 42.14, -74.25, -73.70}; }
};

struct CleanPost {
  std::string post_id;
  std::string user_id;
  std::string created_at;
  double lon = 0.0;
  double lat = 0.0;
  std::string clean_text;
  std::vector<std::string> tokens;
};

struct ParseError {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct ParseResult {
  std::vector<RawPost> posts;
  std::vector<ParseError> errors;
};

// One JSON object per line with fields id, user_id, created_at, text, lon,
// lat. Malformed lines become per-line errors; the rest of the file is still
// parsed. Blank lines are skipped.
ParseResult parse_posts(std::istream& in);

std::vector<RawPost> filter_bbox(const std::vector<RawPost>& posts,
                                 const BoundingBox& box);

// Drops repeated post_ids, then repeated (user_id, raw text) pairs; first
// occurrence wins, order preserved.
std::vector<RawPost> dedup(const std::vector<RawPost>& posts);

// Lowercases and strips: HTML tags, then character entities (decoded and kept
// as ordinary characters), URLs, @-mentions, emoji codepoints; '#' is removed
// from hashtags but the tag word is kept. Remaining characters outside
// letters/digits/intra-word apostrophe/whitespace become spaces; whitespace
// collapses. Idempotent on its own output.
std::string clean_text(std::string_view raw);

// Whitespace split minus stopwords, order preserved.
std::vector<std::string> tokenize(std::string_view clean,
                                  const std::unordered_set<std::string>& stopwords);

// One token per line, '#' comments and blank lines ignored, lowercased.
// Throws std::runtime_error if the file cannot be read.
std::unordered_set<std::string> load_stopwords(const std::string& path);

CleanPost make_clean_post(const RawPost& raw,
                          const std::unordered_set<std::string>& stopwords);

}  // namespace deia::corpus
