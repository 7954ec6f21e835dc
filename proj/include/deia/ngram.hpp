#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace deia::ngram {

struct BigramStats {
  std::vector<std::string> vocab;  // first-occurrence order
  std::unordered_map<std::string, int> word_id;
  long long total_tokens = 0;              // N
  std::vector<long long> unigram;          // by word id
  // (v_id << 32 | w_id) -> count; bigrams never cross document boundaries
  std::unordered_map<std::uint64_t, long long> bigram;
  long long total_bigrams = 0;

  static std::uint64_t key(int v, int w) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) |
           static_cast<std::uint32_t>(w);
  }
};

// Throws std::invalid_argument when the corpus has no tokens.
BigramStats count(const std::vector<std::vector<std::string>>& docs);

struct SequenceScore {
  double log_prob = 0.0;  // -inf when any factor is zero
  std::vector<double> factors;
  std::optional<std::size_t> zero_step;  // first step with probability 0

  double prob() const;
};

// P(w1) * prod P(w_n | w_{n-1}) under maximum-likelihood estimates.
// Throws std::invalid_argument on an empty sequence.
SequenceScore sequence_prob(const BigramStats& stats,
                            const std::vector<std::string>& seq);

struct RankedBigram {
  std::string v;
  std::string w;
  long long count = 0;
};

// Count-descending, ties lexicographic by (v, w), at most n entries.
std::vector<RankedBigram> top_bigrams(const BigramStats& stats, std::size_t n);

struct ClassMap {
  int num_classes = 0;            // G
  std::vector<int> assign;        // by word id, values in [0, G)
};

// F_bi = sum_w N(w) ln N(w)
//      + sum_{g,h} N(g,h) ln( N(g,h) / (N(g) N(h)) )
// with class bigram counts N(g,h), class unigram totals N(g), and 0*ln(.)
// terms contributing 0.
double class_likelihood(const BigramStats& stats, const ClassMap& cm);

struct ClusterResult {
  ClassMap map;
  std::vector<double> fbi_history;  // value after init, then after each sweep
  int sweeps = 0;
  bool converged = false;  // a full sweep made no move
};

// Greedy exchange search. Initialization: the G-1 most frequent words (ties
// lexicographic) get singleton classes 0..G-2, everything else starts in
// class G-1. Words are visited frequency-descending; a word moves to the
// class with the best likelihood gain, lowest class index on ties among
// improving candidates. Moves below the floating-point noise floor are not
// taken, which keeps the history non-decreasing. `seed` is accepted for
// interface stability; the optimizer itself is deterministic.
ClusterResult cluster_exchange(const BigramStats& stats, int num_classes,
                               int max_sweeps, std::uint64_t seed);

}  // namespace deia::ngram
