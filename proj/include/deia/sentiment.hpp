#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "deia/corpus.hpp"

namespace deia::sentiment {

struct Lexicon {
  std::unordered_map<std::string, double> entries;  // token -> mean valence
};

// Tab-separated: token, mean valence, extra columns ignored. Duplicate
// tokens: last wins with a warning. Throws on unreadable/empty/non-numeric.
Lexicon load_lexicon(const std::string& path, std::ostream* warn = nullptr);

enum class Class { Negative, Neutral, Positive };

std::string_view class_name(Class c);

struct SentimentResult {
  double compound = 0.0;  // in (-1, 1)
  Class cls = Class::Neutral;
  int hit_count = 0;  // lexicon tokens matched
};

struct ScoreOptions {
  // Token-level heuristics of the underlying rule-based method (negation
  // flipping, degree boosters/dampeners). Off by default: the cleaning
  // pipeline already lowercases and strips punctuation, so the published
  // punctuation/capitalization amplifiers have nothing to act on.
  bool heuristics = false;
  double neutral_band = 0.0;  // |compound| <= band counts as neutral
};

// Sum of matched valences S normalized to S / sqrt(S^2 + 15).
SentimentResult score(const std::vector<std::string>& tokens,
                      const Lexicon& lex, const ScoreOptions& opts = {});

// negative iff compound < -band, neutral iff |compound| <= band, positive
// otherwise. Throws std::domain_error when compound is outside [-1, 1].
Class classify(double compound, double neutral_band = 0.0);

struct ScoredPost {
  corpus::CleanPost post;
  SentimentResult sentiment;
};

struct Segments {
  std::vector<ScoredPost> negative;
  std::vector<ScoredPost> neutral;
  std::vector<ScoredPost> positive;
};

// Order-preserving partition by class.
Segments segment(const std::vector<ScoredPost>& corpus);

}  // namespace deia::sentiment
