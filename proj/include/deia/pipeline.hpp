#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "deia/corpus.hpp"
#include "deia/relevance.hpp"

namespace deia::pipeline {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// artifact names inside the output directory
inline constexpr const char* kCleanFile = "01_clean.ndjson";
inline constexpr const char* kRelevantFile = "02_relevant.ndjson";
inline constexpr const char* kScoredFile = "03_scored.ndjson";
inline constexpr const char* kGeotaggedFile = "04_geotagged.ndjson";
inline constexpr const char* kCountsFile = "counts.json";
inline constexpr const char* kNgramFile = "ngram.json";
inline constexpr const char* kReportFile = "report.json";

struct PipelineConfig {
  // inputs
  std::string posts;
  std::string stopwords;
  std::string lexicon;
  std::string dei_keywords;
  std::string transport_keywords;
  std::string tracts;
  std::string acs;
  // bbox
  corpus::BoundingBox bbox = corpus::BoundingBox::nyc();
  // relevance
  relevance::MatchMode match = relevance::MatchMode::WholeToken;
  // sentiment
  bool heuristics = false;
  double neutral_band = 0.0;
  // lda
  int lda_k = 0;  // 0 selects from k_candidates by coherence
  std::vector<int> k_candidates = {2, 3, 4, 5};
  double alpha = 0.0;  // <= 0 means 50/K
  double beta = 0.01;
  int iterations = 1000;
  int min_count = 2;
  int min_tokens = 3;
  int top_words = 10;
  // ngram
  int cluster_g = 0;  // required; no default in the method
  int max_sweeps = 20;
  int top_bigrams = 50;
  // run
  std::optional<std::uint64_t> seed;  // mandatory, no wall-clock default
  std::string out_dir;
};

// Plain-text `key = value` with [section] headers and '#' comments.
// Unknown keys are an error. Throws std::runtime_error with file/line info.
PipelineConfig load_config(const std::string& path);

// Thrown by stages; carries the failing stage's name.
struct StageError : std::runtime_error {
  StageError(std::string stage_name, const std::string& message)
      : std::runtime_error(message), stage(std::move(stage_name)) {}
  std::string stage;
};

// Each stage reads the previous stage's artifact from out_dir and writes its
// own; run_all is exactly the stages in sequence, so chaining subcommands is
// bit-identical to one run.
void run_ingest(const PipelineConfig& cfg, std::ostream& log, std::ostream& err);
void run_filter(const PipelineConfig& cfg, std::ostream& log, std::ostream& err);
void run_sentiment(const PipelineConfig& cfg, std::ostream& log, std::ostream& err);
// segment: "", "negative", "neutral" or "positive" ("" runs all three)
void run_topics(const PipelineConfig& cfg, const std::string& segment,
                std::ostream& log, std::ostream& err);
void run_bigrams(const PipelineConfig& cfg, std::ostream& log, std::ostream& err);
void run_geotag(const PipelineConfig& cfg, std::ostream& log, std::ostream& err);
void run_report(const PipelineConfig& cfg, std::ostream& log, std::ostream& err);

void run_all(const PipelineConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace deia::pipeline
