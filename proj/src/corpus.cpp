#include "deia/corpus.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include <json.hpp>

namespace deia::corpus {

namespace {

using json = nlohmann::json;

bool get_string(const json& j, const char* key, std::string& out) {
  auto it = j.find(key);
  if (it == j.end()) return false;
  if (it->is_string()) {
    out = it->get<std::string>();
    return true;
  }
  // tolerate numeric ids (common in exported dumps)
  if (it->is_number_integer() || it->is_number_unsigned()) {
    out = std::to_string(it->get<std::int64_t>());
    return true;
  }
  return false;
}

bool get_number(const json& j, const char* key, double& out) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) return false;
  out = it->get<double>();
  return true;
}

}  // namespace

ParseResult parse_posts(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      result.errors.push_back({line_no, "malformed JSON"});
      continue;
    }
    RawPost post;
    std::string missing;
    if (!get_string(j, "id", post.post_id)) missing = "id";
    else if (!get_string(j, "user_id", post.user_id)) missing = "user_id";
    else if (!get_string(j, "created_at", post.created_at)) missing = "created_at";
    else if (!get_string(j, "text", post.text)) missing = "text";
    else if (!get_number(j, "lon", post.lon)) missing = "lon";
    else if (!get_number(j, "lat", post.lat)) missing = "lat";
    if (!missing.empty()) {
      result.errors.push_back({line_no, "missing or ill-typed field: " + missing});
      continue;
    }
    if (post.post_id.empty()) {
      result.errors.push_back({line_no, "empty id"});
      continue;
    }
    if (post.lat < -90.0 || post.lat > 90.0 || post.lon < -180.0 ||
        post.lon > 180.0) {
      result.errors.push_back({line_no, "coordinate out of range"});
      continue;
    }
    result.posts.push_back(std::move(post));
  }
  return result;
}

std::vector<RawPost> filter_bbox(const std::vector<RawPost>& posts,
                                 const BoundingBox& box) {
  if (!box.valid()) throw std::invalid_argument("invalid bounding box");
  std::vector<RawPost> kept;
  kept.reserve(posts.size());
  for (const auto& p : posts) {
    if (box.contains(p.lon, p.lat)) kept.push_back(p);
  }
  return kept;
}

std::vector<RawPost> dedup(const std::vector<RawPost>& posts) {
  std::vector<RawPost> kept;
  kept.reserve(posts.size());
  std::unordered_set<std::string> seen_ids;
  std::unordered_set<std::string> seen_user_text;
  for (const auto& p : posts) {
    if (!seen_ids.insert(p.post_id).second) continue;
    if (!seen_user_text.insert(p.user_id + '\x1f' + p.text).second) continue;
    kept.push_back(p);
  }
  return kept;
}

namespace {

// ---- UTF-8 ----

std::vector<char32_t> utf8_decode(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 >> 5) == 0x6 && i + 1 < s.size()) {
      cp = (char32_t(b0 & 0x1F) << 6) | (s[i + 1] & 0x3F);
      len = 2;
    } else if ((b0 >> 4) == 0xE && i + 2 < s.size()) {
      cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(s[i + 1] & 0x3F) << 6) |
           (s[i + 2] & 0x3F);
      len = 3;
    } else if ((b0 >> 3) == 0x1E && i + 3 < s.size()) {
      cp = (char32_t(b0 & 0x07) << 18) | (char32_t(s[i + 1] & 0x3F) << 12) |
           (char32_t(s[i + 2] & 0x3F) << 6) | (s[i + 3] & 0x3F);
      len = 4;
    }
    cps.push_back(cp);
    i += len;
  }
  return cps;
}

void utf8_encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Emoji / pictograph blocks stripped outright (the full list also appears in
// the README):
//   U+1F000..U+1FAFF  pictographs, emoticons, transport, supplemental symbols
//   U+2600..U+27BF    misc symbols and dingbats
//   U+2B00..U+2BFF    misc symbols and arrows (stars, squares)
//   U+2300..U+23FF    misc technical (watch, hourglass, av controls)
//   U+FE00..U+FE0F    variation selectors
//   U+200D            zero-width joiner
//   U+20E3            combining enclosing keycap
bool is_emoji(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
         (cp >= 0x2B00 && cp <= 0x2BFF) || (cp >= 0x2300 && cp <= 0x23FF) ||
         (cp >= 0xFE00 && cp <= 0xFE0F) || cp == 0x200D || cp == 0x20E3;
}

bool is_ascii_alnum(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
         (cp >= '0' && cp <= '9');
}

// Letters we keep: ASCII plus Latin-1 (multiplication/division signs
// excluded). Other scripts fall through to the generic symbol rule.
bool is_letter(char32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
  if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;
  return false;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0xA0 || cp == 0x2028 || cp == 0x2029;
}

bool is_word_cp(char32_t cp) { return is_letter(cp) || (cp >= '0' && cp <= '9'); }

std::string strip_html_tags(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<' && i + 1 < s.size()) {
      std::size_t j = i + 1;
      if (j < s.size() && s[j] == '/') ++j;
      if (j < s.size() &&
          (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '!')) {
        const std::size_t close = s.find('>', j);
        if (close != std::string_view::npos) {
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::string decode_entities(std::string_view s) {
  static const std::unordered_map<std::string, std::string> named = {
      {"amp", "&"},  {"lt", "<"},    {"gt", ">"},   {"quot", "\""},
      {"apos", "'"}, {"nbsp", "\xC2\xA0"}, {"hellip", "..."},
  };
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string body(s.substr(i + 1, semi - i - 1));
    if (!body.empty() && body[0] == '#') {
      char32_t cp = 0;
      bool ok = body.size() > 1;
      std::size_t k = 1;
      int base = 10;
      if (body.size() > 2 && (body[1] == 'x' || body[1] == 'X')) {
        base = 16;
        k = 2;
        ok = body.size() > 2;
      }
      for (; ok && k < body.size(); ++k) {
        const char c = body[k];
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (base == 16 && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else if (base == 16 && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else { ok = false; break; }
        cp = cp * base + digit;
        if (cp > 0x10FFFF) { ok = false; break; }
      }
      if (ok) {
        utf8_encode(cp, out);
        i = semi + 1;
        continue;
      }
    } else if (auto it = named.find(body); it != named.end()) {
      out += it->second;
      i = semi + 1;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

bool starts_url(const std::vector<char32_t>& cps, std::size_t i) {
  static const std::u32string_view prefixes[] = {U"http://", U"https://",
                                                 U"www."};
  for (const auto p : prefixes) {
    if (i + p.size() > cps.size()) continue;
    bool match = true;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (to_lower(cps[i + k]) != p[k]) { match = false; break; }
    }
    if (match) return true;
  }
  return false;
}

}  // namespace

std::string clean_text(std::string_view raw) {
  const std::string no_tags = strip_html_tags(raw);
  const std::string decoded = decode_entities(no_tags);
  std::vector<char32_t> cps = utf8_decode(decoded);

  // codepoint pass: drop urls, mentions, emoji; strip '#'; normalize quotes
  std::vector<char32_t> kept;
  kept.reserve(cps.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t cp = cps[i];
    if (starts_url(cps, i)) {
      while (i < cps.size() && !is_space(cps[i])) ++i;
      continue;
    }
    if (cp == '@' && i + 1 < cps.size() &&
        (is_ascii_alnum(cps[i + 1]) || cps[i + 1] == '_')) {
      ++i;
      while (i < cps.size() && (is_ascii_alnum(cps[i]) || cps[i] == '_')) ++i;
      continue;
    }
    if (cp == '#') {
      ++i;  // keep the tag word
      continue;
    }
    if (is_emoji(cp)) {
      ++i;
      continue;
    }
    if (cp == 0x2018 || cp == 0x2019) {
      kept.push_back('\'');
      ++i;
      continue;
    }
    kept.push_back(cp);
    ++i;
  }

  // character classes: lowercase letters/digits kept, intra-word apostrophe
  // kept, everything else is a space; then collapse
  std::string out;
  out.reserve(kept.size());
  bool pending_space = false;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const char32_t cp = kept[k];
    char32_t emit = 0;
    if (is_word_cp(cp)) {
      emit = to_lower(cp);
    } else if (cp == '\'') {
      const bool prev_word = k > 0 && is_word_cp(kept[k - 1]);
      const bool next_word = k + 1 < kept.size() && is_word_cp(kept[k + 1]);
      if (prev_word && next_word) emit = '\'';
    }
    if (emit != 0) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      utf8_encode(emit, out);
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::vector<std::string> tokenize(
    std::string_view clean, const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < clean.size()) {
    while (i < clean.size() &&
           std::isspace(static_cast<unsigned char>(clean[i]))) {
      ++i;
    }
    const std::size_t start = i;
    while (i < clean.size() &&
           !std::isspace(static_cast<unsigned char>(clean[i]))) {
      ++i;
    }
    if (i > start) {
      std::string tok(clean.substr(start, i - start));
      if (!stopwords.contains(tok)) tokens.push_back(std::move(tok));
    }
  }
  return tokens;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read stopword file: " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::size_t last = line.find_last_not_of(" \t\r");
    std::string word = line.substr(first, last - first + 1);
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    words.insert(std::move(word));
  }
  return words;
}

CleanPost make_clean_post(const RawPost& raw,
                          const std::unordered_set<std::string>& stopwords) {
  CleanPost post;
  post.post_id = raw.post_id;
  post.user_id = raw.user_id;
  post.created_at = raw.created_at;
  post.lon = raw.lon;
  post.lat = raw.lat;
  post.clean_text = clean_text(raw.text);
  post.tokens = tokenize(post.clean_text, stopwords);
  return post;
}

}  // namespace deia::corpus
