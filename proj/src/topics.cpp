#include "deia/topics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "deia/kernels/kernels.hpp"
#include "deia/rng.hpp"

namespace deia::topics {

TopicCorpus build_topic_corpus(const std::vector<corpus::CleanPost>& segment,
                               int min_count, int min_tokens) {
  std::map<std::string, long long> freq;  // ordered: vocab comes out sorted
  for (const auto& post : segment) {
    for (const auto& tok : post.tokens) ++freq[tok];
  }
  TopicCorpus out;
  std::unordered_map<std::string, int> ids;
  for (const auto& [tok, n] : freq) {
    if (n >= min_count) {
      ids.emplace(tok, static_cast<int>(out.vocab.size()));
      out.vocab.push_back(tok);
    }
  }
  for (const auto& post : segment) {
    std::vector<int> doc;
    doc.reserve(post.tokens.size());
    for (const auto& tok : post.tokens) {
      const auto it = ids.find(tok);
      if (it != ids.end()) {
        doc.push_back(it->second);
      } else {
        ++out.dropped_rare_tokens;
      }
    }
    if (static_cast<int>(doc.size()) < min_tokens) {
      ++out.dropped_short_docs;
      continue;
    }
    out.docs.push_back(std::move(doc));
    out.doc_ids.push_back(post.post_id);
  }
  if (out.docs.empty() || out.vocab.empty()) {
    throw std::runtime_error("topic corpus is empty after filtering");
  }
  return out;
}

namespace {

struct GibbsState {
  int k = 0;
  int v = 0;
  std::vector<std::int32_t> n_dk;  // D x K
  std::vector<std::int32_t> n_kw;  // V x K (topic index contiguous)
  std::vector<std::int32_t> n_k;   // K
  long long total_tokens = 0;

  void check_consistency(const std::vector<std::vector<int>>& docs) const {
    long long from_topics = 0;
    for (int t = 0; t < k; ++t) from_topics += n_k[t];
    if (from_topics != total_tokens) {
      throw std::logic_error("gibbs counts: topic totals diverged");
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
      long long row = 0;
      for (int t = 0; t < k; ++t) row += n_dk[d * k + t];
      if (row != static_cast<long long>(docs[d].size())) {
        throw std::logic_error("gibbs counts: document row diverged");
      }
    }
    std::vector<long long> per_topic(k, 0);
    for (int w = 0; w < v; ++w) {
      for (int t = 0; t < k; ++t) per_topic[t] += n_kw[static_cast<std::size_t>(w) * k + t];
    }
    for (int t = 0; t < k; ++t) {
      if (per_topic[t] != n_k[t]) {
        throw std::logic_error("gibbs counts: word-topic column diverged");
      }
    }
  }
};

}  // namespace

TopicModel lda_fit(const TopicCorpus& corpus, const LdaParams& params) {
  if (params.k < 1) throw std::invalid_argument("topic count must be >= 1");
  if (params.iterations < 1) {
    throw std::invalid_argument("iteration count must be >= 1");
  }
  long long total_tokens = 0;
  for (const auto& doc : corpus.docs) total_tokens += doc.size();
  if (params.k > total_tokens) {
    throw std::invalid_argument("more topics than tokens");
  }

  const int k = params.k;
  const int v = static_cast<int>(corpus.vocab.size());
  const std::size_t d_count = corpus.docs.size();
  const double alpha = params.alpha > 0.0 ? params.alpha : 50.0 / k;
  const double beta = params.beta;
  const double v_beta = v * beta;

  GibbsState st;
  st.k = k;
  st.v = v;
  st.n_dk.assign(d_count * k, 0);
  st.n_kw.assign(static_cast<std::size_t>(v) * k, 0);
  st.n_k.assign(k, 0);
  st.total_tokens = total_tokens;

  TopicModel model;
  model.k = k;
  model.alpha = alpha;
  model.beta = beta;
  model.iterations = params.iterations;
  model.seed = params.seed;
  model.vocab = corpus.vocab;
  model.assignments.resize(d_count);

  Rng rng(params.seed);
  for (std::size_t d = 0; d < d_count; ++d) {
    model.assignments[d].resize(corpus.docs[d].size());
    for (std::size_t i = 0; i < corpus.docs[d].size(); ++i) {
      const int w = corpus.docs[d][i];
      const int t = static_cast<int>(rng.uniform_int(k));
      model.assignments[d][i] = t;
      ++st.n_dk[d * k + t];
      ++st.n_kw[static_cast<std::size_t>(w) * k + t];
      ++st.n_k[t];
    }
  }

  std::vector<double> weights(k);
  const auto n_k_span = std::span<const std::int32_t>(st.n_k);
  model.loglik_trace.reserve(params.iterations);

  for (int iter = 1; iter <= params.iterations; ++iter) {
    for (std::size_t d = 0; d < d_count; ++d) {
      const auto& doc = corpus.docs[d];
      std::int32_t* doc_row = &st.n_dk[d * k];
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const int w = doc[i];
        std::int32_t* word_row = &st.n_kw[static_cast<std::size_t>(w) * k];
        const int old_t = model.assignments[d][i];
        --doc_row[old_t];
        --word_row[old_t];
        --st.n_k[old_t];

        kernels::topic_weights({doc_row, static_cast<std::size_t>(k)},
                               {word_row, static_cast<std::size_t>(k)},
                               n_k_span, alpha, beta, v_beta, weights);
        double total = 0.0;
        for (int t = 0; t < k; ++t) total += weights[t];
        const double u = rng.uniform() * total;
        int new_t = k - 1;
        double cum = 0.0;
        for (int t = 0; t < k; ++t) {
          cum += weights[t];
          if (u < cum) {
            new_t = t;
            break;
          }
        }

        model.assignments[d][i] = new_t;
        ++doc_row[new_t];
        ++word_row[new_t];
        ++st.n_k[new_t];
      }
    }

    if (params.check_every > 0 && iter % params.check_every == 0) {
      st.check_consistency(corpus.docs);
    }

    // predictive log-likelihood of the corpus under the current counts
    double loglik = 0.0;
    for (std::size_t d = 0; d < d_count; ++d) {
      const auto& doc = corpus.docs[d];
      const double doc_denom = static_cast<double>(doc.size()) + k * alpha;
      for (const int w : doc) {
        kernels::topic_weights(
            {&st.n_dk[d * k], static_cast<std::size_t>(k)},
            {&st.n_kw[static_cast<std::size_t>(w) * k], static_cast<std::size_t>(k)},
            n_k_span, alpha, beta, v_beta, weights);
        double p = 0.0;
        for (int t = 0; t < k; ++t) p += weights[t];
        loglik += std::log(p / doc_denom);
      }
    }
    model.loglik_trace.push_back(loglik);
  }

  st.check_consistency(corpus.docs);

  model.phi.assign(k, std::vector<double>(v, 0.0));
  for (int t = 0; t < k; ++t) {
    const double denom = static_cast<double>(st.n_k[t]) + v_beta;
    for (int w = 0; w < v; ++w) {
      model.phi[t][w] =
          (st.n_kw[static_cast<std::size_t>(w) * k + t] + beta) / denom;
    }
  }
  model.theta.assign(d_count, std::vector<double>(k, 0.0));
  for (std::size_t d = 0; d < d_count; ++d) {
    const double denom = static_cast<double>(corpus.docs[d].size()) + k * alpha;
    for (int t = 0; t < k; ++t) {
      model.theta[d][t] = (st.n_dk[d * k + t] + alpha) / denom;
    }
  }
  return model;
}

std::vector<std::pair<std::string, double>> top_words(const TopicModel& model,
                                                      int k, std::size_t n) {
  if (k < 0 || k >= model.k) throw std::out_of_range("topic index");
  const auto& row = model.phi[k];
  std::vector<int> idx(row.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return model.vocab[a] < model.vocab[b];
  });
  if (idx.size() > n) idx.resize(n);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(idx.size());
  for (const int i : idx) out.emplace_back(model.vocab[i], row[i]);
  return out;
}

std::vector<double> topic_prevalence(const TopicModel& model,
                                     const TopicCorpus& corpus) {
  std::vector<double> shares(model.k, 0.0);
  double total_len = 0.0;
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    const double len = static_cast<double>(corpus.docs[d].size());
    total_len += len;
    for (int t = 0; t < model.k; ++t) shares[t] += model.theta[d][t] * len;
  }
  for (auto& s : shares) s /= total_len;
  return shares;
}

double umass_coherence(const TopicCorpus& corpus,
                       const std::vector<std::string>& ranked_words) {
  std::unordered_map<std::string, int> word_pos;
  for (std::size_t i = 0; i < ranked_words.size(); ++i) {
    word_pos.emplace(ranked_words[i], static_cast<int>(i));
  }
  const std::size_t m = ranked_words.size();
  std::vector<long long> doc_freq(m, 0);
  std::vector<long long> joint(m * m, 0);
  std::vector<int> present;
  for (const auto& doc : corpus.docs) {
    present.clear();
    std::unordered_set<int> seen;
    for (const int id : doc) {
      const auto it = word_pos.find(corpus.vocab[id]);
      if (it != word_pos.end() && seen.insert(it->second).second) {
        present.push_back(it->second);
      }
    }
    for (const int a : present) {
      ++doc_freq[a];
      for (const int b : present) {
        if (a != b) ++joint[static_cast<std::size_t>(a) * m + b];
      }
    }
  }
  double sum = 0.0;
  long long pairs = 0;
  for (std::size_t higher = 0; higher < m; ++higher) {
    if (doc_freq[higher] == 0) continue;
    for (std::size_t lower = higher + 1; lower < m; ++lower) {
      sum += std::log(
          (static_cast<double>(joint[lower * m + higher]) + 1.0) /
          static_cast<double>(doc_freq[higher]));
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

KSelection select_k(const TopicCorpus& corpus,
                    const std::vector<int>& candidates, const LdaParams& base,
                    std::uint64_t seed, int top_n) {
  if (candidates.empty()) {
    throw std::invalid_argument("no candidate topic counts");
  }
  KSelection sel;
  double best_score = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    LdaParams params = base;
    params.k = candidates[i];
    params.seed = seed + i;
    const TopicModel model = lda_fit(corpus, params);
    double mean = 0.0;
    for (int t = 0; t < model.k; ++t) {
      const auto ranked = top_words(model, t, static_cast<std::size_t>(top_n));
      std::vector<std::string> words;
      words.reserve(ranked.size());
      for (const auto& [w, p] : ranked) words.push_back(w);
      mean += umass_coherence(corpus, words);
    }
    mean /= model.k;
    sel.coherence_by_k.emplace_back(candidates[i], mean);
    const bool better =
        sel.best_k == 0 || mean > best_score ||
        (mean == best_score && candidates[i] < sel.best_k);
    if (better) {
      best_score = mean;
      sel.best_k = candidates[i];
    }
  }
  return sel;
}

}  // namespace deia::topics
