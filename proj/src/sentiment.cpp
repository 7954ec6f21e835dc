#include "deia/sentiment.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace deia::sentiment {

namespace {

constexpr double kNormalizationAlpha = 15.0;
constexpr double kBoosterStep = 0.293;
constexpr double kNegationScalar = -0.74;

// distance decay for modifiers 1, 2, 3 tokens back
constexpr double kDecay[3] = {1.0, 0.95, 0.9};

const std::unordered_set<std::string>& negations() {
  static const std::unordered_set<std::string> words = {
      "not",    "no",     "never",   "none",    "neither", "nor",
      "cannot", "cant",   "can't",   "dont",    "don't",   "doesnt",
      "doesn't", "didnt", "didn't",  "isnt",    "isn't",   "arent",
      "aren't", "wasnt",  "wasn't",  "werent",  "weren't", "wont",
      "won't",  "wouldnt", "wouldn't", "shouldnt", "shouldn't",
      "couldnt", "couldn't", "aint", "ain't",   "without"};
  return words;
}

// +step boosters, -step dampeners
const std::unordered_map<std::string, double>& modifiers() {
  static const std::unordered_map<std::string, double> words = {
      {"very", kBoosterStep},       {"extremely", kBoosterStep},
      {"really", kBoosterStep},     {"totally", kBoosterStep},
      {"absolutely", kBoosterStep}, {"completely", kBoosterStep},
      {"so", kBoosterStep},         {"incredibly", kBoosterStep},
      {"hugely", kBoosterStep},     {"utterly", kBoosterStep},
      {"slightly", -kBoosterStep},  {"somewhat", -kBoosterStep},
      {"barely", -kBoosterStep},    {"hardly", -kBoosterStep},
      {"marginally", -kBoosterStep}, {"kinda", -kBoosterStep},
      {"sorta", -kBoosterStep},     {"almost", -kBoosterStep}};
  return words;
}

}  // namespace

Lexicon load_lexicon(const std::string& path, std::ostream* warn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read lexicon file: " + path);
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected <token>\\t<valence>");
    }
    std::string token = line.substr(0, tab);
    std::size_t next = line.find('\t', tab + 1);
    const std::string valence_str =
        line.substr(tab + 1, next == std::string::npos ? next : next - tab - 1);
    double valence = 0.0;
    try {
      std::size_t used = 0;
      valence = std::stod(valence_str, &used);
      if (used != valence_str.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": non-numeric valence \"" + valence_str + "\"");
    }
    if (!std::isfinite(valence)) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": valence not finite");
    }
    auto [it, inserted] = lex.entries.insert_or_assign(std::move(token), valence);
    if (!inserted && warn) {
      *warn << "lexicon: duplicate token \"" << it->first
            << "\", last value wins\n";
    }
  }
  if (lex.entries.empty()) {
    throw std::runtime_error("lexicon is empty: " + path);
  }
  return lex;
}

std::string_view class_name(Class c) {
  switch (c) {
    case Class::Negative: return "negative";
    case Class::Neutral: return "neutral";
    case Class::Positive: return "positive";
  }
  return "?";
}

Class classify(double compound, double neutral_band) {
  if (!(compound >= -1.0 && compound <= 1.0)) {
    throw std::domain_error("compound score outside [-1, 1]");
  }
  if (compound < -neutral_band) return Class::Negative;
  if (compound > neutral_band) return Class::Positive;
  return Class::Neutral;
}

SentimentResult score(const std::vector<std::string>& tokens,
                      const Lexicon& lex, const ScoreOptions& opts) {
  double sum = 0.0;
  int hits = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto it = lex.entries.find(tokens[i]);
    if (it == lex.entries.end()) continue;
    double valence = it->second;
    ++hits;
    if (opts.heuristics && valence != 0.0) {
      const double sign = valence > 0.0 ? 1.0 : -1.0;
      bool negated = false;
      for (std::size_t back = 1; back <= 3 && back <= i; ++back) {
        const std::string& prev = tokens[i - back];
        if (auto mod = modifiers().find(prev); mod != modifiers().end()) {
          valence += sign * mod->second * kDecay[back - 1];
        }
        if (negations().contains(prev)) negated = true;
      }
      if (negated) valence *= kNegationScalar;
    }
    sum += valence;
  }
  SentimentResult result;
  result.hit_count = hits;
  result.compound = sum / std::sqrt(sum * sum + kNormalizationAlpha);
  result.cls = classify(result.compound, opts.neutral_band);
  return result;
}

Segments segment(const std::vector<ScoredPost>& corpus) {
  Segments segs;
  for (const auto& scored : corpus) {
    switch (scored.sentiment.cls) {
      case Class::Negative: segs.negative.push_back(scored); break;
      case Class::Neutral: segs.neutral.push_back(scored); break;
      case Class::Positive: segs.positive.push_back(scored); break;
    }
  }
  return segs;
}

}  // namespace deia::sentiment
