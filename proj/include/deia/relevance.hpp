#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

#include "deia/corpus.hpp"

namespace deia::relevance {

struct KeywordList {
  std::string name;  // "dei" | "transport"
  std::unordered_set<std::string> words;
  std::size_t listed_count = 0;     // lines in the source file (label metadata)
  std::size_t duplicate_count = 0;  // removed on load
};

// One keyword per line; duplicates are dropped with a warning to `warn`.
// Throws std::runtime_error on unreadable or empty files.
KeywordList load_keywords(const std::string& path, std::string name,
                          std::ostream* warn = nullptr);

enum class MatchMode { WholeToken, Substring };

// Whole-token match by default; Substring exists for sensitivity analysis.
bool matches(const std::vector<std::string>& tokens, const KeywordList& kw,
             MatchMode mode = MatchMode::WholeToken);

struct RelevanceTag {
  bool dei = false;
  bool transport = false;
  bool relevant = false;  // dei AND transport
};

struct FilterResult {
  std::vector<RelevanceTag> tags;  // parallel to the input corpus
  std::vector<corpus::CleanPost> retained;
  std::size_t stage1_kept = 0;
  std::size_t stage2_kept = 0;
};

// Two-stage filter: stage 1 keeps posts with at least one DEI keyword; stage
// 2 keeps, of those, posts with at least one transportation keyword.
FilterResult tag_and_filter(const std::vector<corpus::CleanPost>& posts,
                            const KeywordList& dei,
                            const KeywordList& transport,
                            MatchMode mode = MatchMode::WholeToken);

// "stage1_kept=<n> stage2_kept=<n> ratio=<pct>"; ratio is stage-2 survivors
// over the input corpus size, two decimals.
std::string format_stage_report(const FilterResult& result,
                                std::size_t corpus_size);

}  // namespace deia::relevance
