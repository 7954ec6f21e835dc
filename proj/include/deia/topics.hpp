#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "deia/corpus.hpp"

namespace deia::topics {

struct TopicCorpus {
  std::vector<std::vector<int>> docs;  // token ids, < vocab.size()
  std::vector<std::string> vocab;      // lexicographic order
  std::vector<std::string> doc_ids;    // parallel to docs
  std::size_t dropped_short_docs = 0;
  std::size_t dropped_rare_tokens = 0;
};

// vocab keeps tokens with corpus frequency >= min_count; docs shorter than
// min_tokens after the vocab cut are dropped (counted). Throws
// std::runtime_error when nothing survives.
TopicCorpus build_topic_corpus(const std::vector<corpus::CleanPost>& segment,
                               int min_count, int min_tokens);

struct LdaParams {
  int k = 2;
  double alpha = 0.0;  // <= 0 means 50 / k
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 0;
  int check_every = 50;  // count-consistency audit interval
};

struct TopicModel {
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> vocab;
  std::vector<std::vector<double>> phi;    // K x V, rows sum to 1
  std::vector<std::vector<double>> theta;  // D x K, rows sum to 1
  std::vector<std::vector<int>> assignments;  // final topic per token
  std::vector<double> loglik_trace;           // one value per iteration
};

// Collapsed Gibbs sampling: tokens start on uniform-random topics from the
// seeded stream, then each iteration resamples every token from
//   P(z = k | rest) ~ (n_dk + alpha) * (n_kw + beta) / (n_k + V beta)
// with the token's own count excluded. Deterministic given the seed.
TopicModel lda_fit(const TopicCorpus& corpus, const LdaParams& params);

// n highest-probability words of topic k, ties lexicographic.
std::vector<std::pair<std::string, double>> top_words(const TopicModel& model,
                                                      int k, std::size_t n);

// Token-weighted topic shares: share_k = sum_d theta[d][k] len(d) / sum len.
std::vector<double> topic_prevalence(const TopicModel& model,
                                     const TopicCorpus& corpus);

// Mean UMass score over ranked top-word pairs:
//   mean over (lower, higher) of ln( (D(lower, higher) + 1) / D(higher) )
// where D counts document (co-)occurrences in `corpus`.
double umass_coherence(const TopicCorpus& corpus,
                       const std::vector<std::string>& ranked_words);

struct KSelection {
  int best_k = 0;
  std::vector<std::pair<int, double>> coherence_by_k;  // candidate order
};

// Fits one model per candidate (seed + candidate index), scores each by mean
// topic coherence over top-10 words, picks the argmax; smaller K wins ties.
KSelection select_k(const TopicCorpus& corpus,
                    const std::vector<int>& candidates, const LdaParams& base,
                    std::uint64_t seed, int top_n = 10);

}  // namespace deia::topics
