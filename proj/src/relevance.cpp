#include "deia/relevance.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace deia::relevance {

KeywordList load_keywords(const std::string& path, std::string name,
                          std::ostream* warn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read keyword file: " + path);
  KeywordList list;
  list.name = std::move(name);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::size_t last = line.find_last_not_of(" \t\r");
    std::string word = line.substr(first, last - first + 1);
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    ++list.listed_count;
    if (!list.words.insert(word).second) {
      ++list.duplicate_count;
      if (warn) {
        *warn << "keyword list '" << list.name << "': duplicate \"" << word
              << "\" dropped\n";
      }
    }
  }
  if (list.words.empty()) {
    throw std::runtime_error("keyword file has no keywords: " + path);
  }
  return list;
}

bool matches(const std::vector<std::string>& tokens, const KeywordList& kw,
             MatchMode mode) {
  if (mode == MatchMode::WholeToken) {
    for (const auto& tok : tokens) {
      if (kw.words.contains(tok)) return true;
    }
    return false;
  }
  for (const auto& tok : tokens) {
    for (const auto& word : kw.words) {
      if (tok.find(word) != std::string::npos) return true;
    }
  }
  return false;
}

FilterResult tag_and_filter(const std::vector<corpus::CleanPost>& posts,
                            const KeywordList& dei,
                            const KeywordList& transport, MatchMode mode) {
  FilterResult result;
  result.tags.reserve(posts.size());
  for (const auto& post : posts) {
    RelevanceTag tag;
    tag.dei = matches(post.tokens, dei, mode);
    if (tag.dei) {
      ++result.stage1_kept;
      tag.transport = matches(post.tokens, transport, mode);
      if (tag.transport) {
        tag.relevant = true;
        ++result.stage2_kept;
        result.retained.push_back(post);
      }
    }
    result.tags.push_back(tag);
  }
  return result;
}

std::string format_stage_report(const FilterResult& result,
                                std::size_t corpus_size) {
  const double ratio =
      corpus_size == 0
          ? 0.0
          : 100.0 * static_cast<double>(result.stage2_kept) /
                static_cast<double>(corpus_size);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "stage1_kept=%zu stage2_kept=%zu ratio=%.2f",
                result.stage1_kept, result.stage2_kept, ratio);
  return buf;
}

}  // namespace deia::relevance
