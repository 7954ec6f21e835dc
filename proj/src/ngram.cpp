#include "deia/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace deia::ngram {

namespace {

double xlogx(long long n) {
  if (n <= 0) return 0.0;
  const double d = static_cast<double>(n);
  return d * std::log(d);
}

}  // namespace

BigramStats count(const std::vector<std::vector<std::string>>& docs) {
  BigramStats stats;
  for (const auto& doc : docs) {
    int prev_id = -1;
    for (const auto& token : doc) {
      auto [it, inserted] =
          stats.word_id.emplace(token, static_cast<int>(stats.vocab.size()));
      if (inserted) {
        stats.vocab.push_back(token);
        stats.unigram.push_back(0);
      }
      const int id = it->second;
      ++stats.unigram[id];
      ++stats.total_tokens;
      if (prev_id >= 0) {
        ++stats.bigram[BigramStats::key(prev_id, id)];
        ++stats.total_bigrams;
      }
      prev_id = id;
    }
  }
  if (stats.total_tokens == 0) {
    throw std::invalid_argument("bigram counting needs a non-empty corpus");
  }
  return stats;
}

double SequenceScore::prob() const {
  if (zero_step.has_value()) return 0.0;
  return std::exp(log_prob);
}

SequenceScore sequence_prob(const BigramStats& stats,
                            const std::vector<std::string>& seq) {
  if (seq.empty()) throw std::invalid_argument("empty sequence");
  SequenceScore score;
  score.factors.reserve(seq.size());

  auto id_of = [&](const std::string& w) -> int {
    const auto it = stats.word_id.find(w);
    return it == stats.word_id.end() ? -1 : it->second;
  };

  int prev = id_of(seq[0]);
  double first = 0.0;
  if (prev >= 0) {
    first = static_cast<double>(stats.unigram[prev]) /
            static_cast<double>(stats.total_tokens);
  }
  score.factors.push_back(first);
  for (std::size_t n = 1; n < seq.size(); ++n) {
    const int cur = id_of(seq[n]);
    double factor = 0.0;
    if (prev >= 0 && cur >= 0) {
      const auto it = stats.bigram.find(BigramStats::key(prev, cur));
      if (it != stats.bigram.end()) {
        factor = static_cast<double>(it->second) /
                 static_cast<double>(stats.unigram[prev]);
      }
    }
    score.factors.push_back(factor);
    prev = cur;
  }

  score.log_prob = 0.0;
  for (std::size_t n = 0; n < score.factors.size(); ++n) {
    if (score.factors[n] == 0.0) {
      if (!score.zero_step) score.zero_step = n;
      score.log_prob = -std::numeric_limits<double>::infinity();
    } else if (!score.zero_step) {
      score.log_prob += std::log(score.factors[n]);
    }
  }
  return score;
}

std::vector<RankedBigram> top_bigrams(const BigramStats& stats, std::size_t n) {
  std::vector<RankedBigram> ranked;
  ranked.reserve(stats.bigram.size());
  for (const auto& [key, cnt] : stats.bigram) {
    const int v = static_cast<int>(key >> 32);
    const int w = static_cast<int>(key & 0xFFFFFFFFu);
    ranked.push_back({stats.vocab[v], stats.vocab[w], cnt});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedBigram& a, const RankedBigram& b) {
              if (a.count != b.count) return a.count > b.count;
              if (a.v != b.v) return a.v < b.v;
              return a.w < b.w;
            });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

namespace {

// Class-level count tables for one assignment.
struct ClassCounts {
  int num_classes = 0;
  std::vector<long long> unigrams;       // T[g]
  std::vector<long long> bigrams;        // M[g*G + h]
  std::vector<long long> out_bigrams;    // Bout[g] = sum_h M[g][h]
  std::vector<long long> in_bigrams;     // Bin[g]  = sum_h M[h][g]
};

ClassCounts build_counts(const BigramStats& stats, const ClassMap& cm) {
  const int g_count = cm.num_classes;
  ClassCounts counts;
  counts.num_classes = g_count;
  counts.unigrams.assign(g_count, 0);
  counts.bigrams.assign(static_cast<std::size_t>(g_count) * g_count, 0);
  counts.out_bigrams.assign(g_count, 0);
  counts.in_bigrams.assign(g_count, 0);
  for (std::size_t w = 0; w < stats.vocab.size(); ++w) {
    counts.unigrams[cm.assign[w]] += stats.unigram[w];
  }
  for (const auto& [key, cnt] : stats.bigram) {
    const int v = static_cast<int>(key >> 32);
    const int w = static_cast<int>(key & 0xFFFFFFFFu);
    const int gv = cm.assign[v];
    const int gw = cm.assign[w];
    counts.bigrams[static_cast<std::size_t>(gv) * g_count + gw] += cnt;
    counts.out_bigrams[gv] += cnt;
    counts.in_bigrams[gw] += cnt;
  }
  return counts;
}

double objective(const BigramStats& stats, const ClassCounts& counts) {
  double f = 0.0;
  for (std::size_t w = 0; w < stats.vocab.size(); ++w) {
    f += xlogx(stats.unigram[w]);
  }
  const int g_count = counts.num_classes;
  for (int g = 0; g < g_count; ++g) {
    for (int h = 0; h < g_count; ++h) {
      const long long m = counts.bigrams[static_cast<std::size_t>(g) * g_count + h];
      if (m > 0) {
        f += static_cast<double>(m) *
             std::log(static_cast<double>(m) /
                      (static_cast<double>(counts.unigrams[g]) *
                       static_cast<double>(counts.unigrams[h])));
      }
    }
  }
  return f;
}

struct Adjacency {
  // per word: (neighbor id, count); self-bigrams kept separately
  std::vector<std::vector<std::pair<int, long long>>> successors;
  std::vector<std::vector<std::pair<int, long long>>> predecessors;
  std::vector<long long> self;
};

Adjacency build_adjacency(const BigramStats& stats) {
  Adjacency adj;
  const std::size_t words = stats.vocab.size();
  adj.successors.resize(words);
  adj.predecessors.resize(words);
  adj.self.assign(words, 0);
  for (const auto& [key, cnt] : stats.bigram) {
    const int v = static_cast<int>(key >> 32);
    const int w = static_cast<int>(key & 0xFFFFFFFFu);
    if (v == w) {
      adj.self[v] = cnt;
    } else {
      adj.successors[v].push_back({w, cnt});
      adj.predecessors[w].push_back({v, cnt});
    }
  }
  return adj;
}

}  // namespace

double class_likelihood(const BigramStats& stats, const ClassMap& cm) {
  if (cm.assign.size() != stats.vocab.size()) {
    throw std::invalid_argument("class map does not cover the vocabulary");
  }
  return objective(stats, build_counts(stats, cm));
}

ClusterResult cluster_exchange(const BigramStats& stats, int num_classes,
                               int max_sweeps, std::uint64_t /*seed*/) {
  const int word_count = static_cast<int>(stats.vocab.size());
  if (num_classes < 1 || num_classes > word_count) {
    throw std::invalid_argument("class count must be in [1, vocabulary size]");
  }

  // frequency-descending word order, lexicographic tie-break
  std::vector<int> order(word_count);
  for (int i = 0; i < word_count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (stats.unigram[a] != stats.unigram[b]) {
      return stats.unigram[a] > stats.unigram[b];
    }
    return stats.vocab[a] < stats.vocab[b];
  });

  ClusterResult result;
  result.map.num_classes = num_classes;
  result.map.assign.assign(word_count, num_classes - 1);
  for (int rank = 0; rank < num_classes - 1; ++rank) {
    result.map.assign[order[rank]] = rank;
  }

  const Adjacency adj = build_adjacency(stats);
  ClassCounts counts = build_counts(stats, result.map);
  const int g_count = num_classes;
  auto m_at = [&](int g, int h) -> long long& {
    return counts.bigrams[static_cast<std::size_t>(g) * g_count + h];
  };

  result.fbi_history.push_back(objective(stats, counts));

  std::vector<long long> pre(g_count), suc(g_count);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    int moves = 0;
    // gains below this are floating-point noise, not improvements
    const double noise_floor =
        1e-9 * (1.0 + std::abs(result.fbi_history.back()));

    for (const int w : order) {
      const int from = result.map.assign[w];
      std::fill(pre.begin(), pre.end(), 0);
      std::fill(suc.begin(), suc.end(), 0);
      for (const auto& [v, c] : adj.predecessors[w]) {
        pre[result.map.assign[v]] += c;
      }
      for (const auto& [x, c] : adj.successors[w]) {
        suc[result.map.assign[x]] += c;
      }
      const long long self = adj.self[w];
      long long pre_total = 0, suc_total = 0;
      for (int g = 0; g < g_count; ++g) {
        pre_total += pre[g];
        suc_total += suc[g];
      }
      const long long n_w = stats.unigram[w];

      // likelihood change for moving w: from -> to
      auto move_gain = [&](int to) -> double {
        double delta = 0.0;
        for (int h = 0; h < g_count; ++h) {
          if (h == from || h == to) continue;
          // rows from/to at column h
          delta += xlogx(m_at(from, h) - suc[h]) - xlogx(m_at(from, h));
          delta += xlogx(m_at(to, h) + suc[h]) - xlogx(m_at(to, h));
          // columns from/to at row h
          delta += xlogx(m_at(h, from) - pre[h]) - xlogx(m_at(h, from));
          delta += xlogx(m_at(h, to) + pre[h]) - xlogx(m_at(h, to));
        }
        // the four corner entries
        delta += xlogx(m_at(from, from) - suc[from] - pre[from] - self) -
                 xlogx(m_at(from, from));
        delta += xlogx(m_at(from, to) + pre[from] - suc[to]) -
                 xlogx(m_at(from, to));
        delta += xlogx(m_at(to, from) + suc[from] - pre[to]) -
                 xlogx(m_at(to, from));
        delta += xlogx(m_at(to, to) + suc[to] + pre[to] + self) -
                 xlogx(m_at(to, to));

        // - (Bout[g] + Bin[g]) ln T[g] boundary terms for g in {from, to}
        const long long t_from_new = counts.unigrams[from] - n_w;
        const long long t_to_new = counts.unigrams[to] + n_w;
        const long long bout_from_new =
            counts.out_bigrams[from] - suc_total - self;
        const long long bin_from_new =
            counts.in_bigrams[from] - pre_total - self;
        const long long bout_to_new = counts.out_bigrams[to] + suc_total + self;
        const long long bin_to_new = counts.in_bigrams[to] + pre_total + self;
        auto boundary = [](long long b, long long t) -> double {
          return (b == 0 || t <= 0) ? 0.0
                                    : -static_cast<double>(b) *
                                          std::log(static_cast<double>(t));
        };
        delta += boundary(bout_from_new + bin_from_new, t_from_new) -
                 boundary(counts.out_bigrams[from] + counts.in_bigrams[from],
                          counts.unigrams[from]);
        delta += boundary(bout_to_new + bin_to_new, t_to_new) -
                 boundary(counts.out_bigrams[to] + counts.in_bigrams[to],
                          counts.unigrams[to]);
        return delta;
      };

      int best = from;
      double best_gain = 0.0;
      for (int to = 0; to < g_count; ++to) {
        if (to == from) continue;
        const double g = move_gain(to);
        if (g > best_gain) {
          best_gain = g;
          best = to;
        }
      }
      if (best == from || best_gain <= noise_floor) continue;

      // apply the move
      const int to = best;
      for (const auto& [v, c] : adj.predecessors[w]) {
        const int gv = result.map.assign[v];
        m_at(gv, from) -= c;
        m_at(gv, to) += c;
      }
      for (const auto& [x, c] : adj.successors[w]) {
        const int gx = result.map.assign[x];
        m_at(from, gx) -= c;
        m_at(to, gx) += c;
      }
      m_at(from, from) -= self;
      m_at(to, to) += self;
      counts.out_bigrams[from] -= suc_total + self;
      counts.in_bigrams[from] -= pre_total + self;
      counts.out_bigrams[to] += suc_total + self;
      counts.in_bigrams[to] += pre_total + self;
      counts.unigrams[from] -= n_w;
      counts.unigrams[to] += n_w;
      result.map.assign[w] = to;
      ++moves;
    }

    ++result.sweeps;
    result.fbi_history.push_back(objective(stats, counts));
    if (moves == 0) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace deia::ngram
