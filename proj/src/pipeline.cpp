#include "deia/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "deia/csv.hpp"
#include "deia/geodemo.hpp"
#include "deia/ngram.hpp"
#include "deia/report.hpp"
#include "deia/sentiment.hpp"
#include "deia/topics.hpp"

namespace deia::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// ---- config ----

std::string trim(const std::string& s) {
  const std::size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const std::size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<int> parse_int_list(const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  PipelineConfig cfg;
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    return fs::path(p).is_absolute() ? p : (base / p).string();
  };

  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key = value");
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "inputs.posts") cfg.posts = resolve(value);
      else if (key == "inputs.stopwords") cfg.stopwords = resolve(value);
      else if (key == "inputs.lexicon") cfg.lexicon = resolve(value);
      else if (key == "inputs.dei_keywords") cfg.dei_keywords = resolve(value);
      else if (key == "inputs.transport_keywords") cfg.transport_keywords = resolve(value);
      else if (key == "inputs.tracts") cfg.tracts = resolve(value);
      else if (key == "inputs.acs") cfg.acs = resolve(value);
      else if (key == "bbox.lat_min") cfg.bbox.lat_min = std::stod(value);
      else if (key == "bbox.lat_max") cfg.bbox.lat_max = std::stod(value);
      else if (key == "bbox.lon_min") cfg.bbox.lon_min = std::stod(value);
      else if (key == "bbox.lon_max") cfg.bbox.lon_max = std::stod(value);
      else if (key == "relevance.match") {
        if (value == "token") cfg.match = relevance::MatchMode::WholeToken;
        else if (value == "substring") cfg.match = relevance::MatchMode::Substring;
        else throw std::runtime_error("match must be token|substring");
      }
      else if (key == "sentiment.heuristics") cfg.heuristics = value == "true" || value == "1";
      else if (key == "sentiment.neutral_band") cfg.neutral_band = std::stod(value);
      else if (key == "lda.k") cfg.lda_k = std::stoi(value);
      else if (key == "lda.k_candidates") cfg.k_candidates = parse_int_list(value);
      else if (key == "lda.alpha") cfg.alpha = std::stod(value);
      else if (key == "lda.beta") cfg.beta = std::stod(value);
      else if (key == "lda.iterations") cfg.iterations = std::stoi(value);
      else if (key == "lda.min_count") cfg.min_count = std::stoi(value);
      else if (key == "lda.min_tokens") cfg.min_tokens = std::stoi(value);
      else if (key == "lda.top_words") cfg.top_words = std::stoi(value);
      else if (key == "clustering.g") cfg.cluster_g = std::stoi(value);
      else if (key == "clustering.max_sweeps") cfg.max_sweeps = std::stoi(value);
      else if (key == "ngram.top_bigrams") cfg.top_bigrams = std::stoi(value);
      else if (key == "run.seed") cfg.seed = std::stoull(value);
      else if (key == "run.out_dir") cfg.out_dir = resolve(value);
      else {
        throw std::runtime_error("unknown key");
      }
    } catch (const std::runtime_error&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad entry '" + key + "'");
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return cfg;
}

namespace {

// ---- artifact I/O ----

struct Record {
  corpus::CleanPost post;
  sentiment::SentimentResult senti;
  bool has_sentiment = false;
  std::optional<std::string> geoid;
  bool has_geoid_field = false;
};

json to_json(const Record& rec) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = rec.post.post_id;
  j["user_id"] = rec.post.user_id;
  j["created_at"] = rec.post.created_at;
  j["lon"] = rec.post.lon;
  j["lat"] = rec.post.lat;
  j["clean_text"] = rec.post.clean_text;
  j["tokens"] = rec.post.tokens;
  if (rec.has_sentiment) {
    j["compound"] = report::round_half_up(rec.senti.compound, 6);
    j["sentiment"] = std::string(sentiment::class_name(rec.senti.cls));
    j["hits"] = rec.senti.hit_count;
  }
  if (rec.has_geoid_field) {
    j["geoid"] = rec.geoid ? json(*rec.geoid) : json(nullptr);
  }
  return j;
}

Record record_from_json(const json& j, const std::string& stage,
                        const std::string& file) {
  if (!j.contains("schema_version") ||
      j["schema_version"].get<int>() != kSchemaVersion) {
    throw StageError(stage, file + ": unsupported schema_version (want " +
                                std::to_string(kSchemaVersion) + ")");
  }
  Record rec;
  rec.post.post_id = j.at("id").get<std::string>();
  rec.post.user_id = j.at("user_id").get<std::string>();
  rec.post.created_at = j.at("created_at").get<std::string>();
  rec.post.lon = j.at("lon").get<double>();
  rec.post.lat = j.at("lat").get<double>();
  rec.post.clean_text = j.at("clean_text").get<std::string>();
  rec.post.tokens = j.at("tokens").get<std::vector<std::string>>();
  if (j.contains("compound")) {
    rec.has_sentiment = true;
    rec.senti.compound = j["compound"].get<double>();
    const std::string cls = j.at("sentiment").get<std::string>();
    rec.senti.cls = cls == "negative" ? sentiment::Class::Negative
                    : cls == "positive" ? sentiment::Class::Positive
                                        : sentiment::Class::Neutral;
    rec.senti.hit_count = j.value("hits", 0);
  }
  if (j.contains("geoid")) {
    rec.has_geoid_field = true;
    if (!j["geoid"].is_null()) rec.geoid = j["geoid"].get<std::string>();
  }
  return rec;
}

std::vector<Record> read_artifact(const std::string& stage,
                                  const fs::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw StageError(stage, "missing input artifact: " + file.string() +
                                " (run the previous stage first)");
  }
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw StageError(stage, file.string() + ":" + std::to_string(line_no) +
                                  ": bad artifact record");
    }
    records.push_back(record_from_json(j, stage, file.string()));
  }
  return records;
}

void write_artifact(const fs::path& file, const std::vector<Record>& records) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& rec : records) out << to_json(rec).dump() << '\n';
}

json read_counts(const std::string& stage, const fs::path& dir) {
  std::ifstream in(dir / kCountsFile);
  if (!in) {
    throw StageError(stage, "missing counts artifact; run ingest first");
  }
  return json::parse(in);
}

void write_counts(const fs::path& dir, const json& counts) {
  std::ofstream out(dir / kCountsFile);
  out << counts.dump(2) << '\n';
}

void require_input(const std::string& stage, const std::string& what,
                   const std::string& path) {
  if (path.empty()) {
    throw StageError(stage, "config is missing inputs." + what);
  }
  if (!fs::exists(path)) {
    throw StageError(stage, "inputs." + what + " not found: " + path);
  }
}

fs::path out_dir_of(const std::string& stage, const PipelineConfig& cfg,
                    bool create = false) {
  if (cfg.out_dir.empty()) {
    throw StageError(stage, "config is missing run.out_dir");
  }
  if (create) fs::create_directories(cfg.out_dir);
  return cfg.out_dir;
}

std::uint64_t require_seed(const std::string& stage,
                           const PipelineConfig& cfg) {
  if (!cfg.seed) throw StageError(stage, "config is missing run.seed");
  return *cfg.seed;
}

}  // namespace

void run_ingest(const PipelineConfig& cfg, std::ostream& log,
                std::ostream& err) {
  const std::string stage = "ingest";
  require_input(stage, "posts", cfg.posts);
  require_input(stage, "stopwords", cfg.stopwords);
  if (!cfg.bbox.valid()) throw StageError(stage, "invalid bounding box");
  const fs::path dir = out_dir_of(stage, cfg, true);

  std::ifstream in(cfg.posts);
  if (!in) throw StageError(stage, "cannot read " + cfg.posts);
  const auto parsed = corpus::parse_posts(in);
  for (const auto& pe : parsed.errors) {
    err << "line" << pe.line << ": " << pe.reason << '\n';
  }
  const auto boxed = corpus::filter_bbox(parsed.posts, cfg.bbox);
  const auto unique = corpus::dedup(boxed);
  const auto stopwords = corpus::load_stopwords(cfg.stopwords);

  std::vector<Record> records;
  records.reserve(unique.size());
  for (const auto& raw : unique) {
    Record rec;
    rec.post = corpus::make_clean_post(raw, stopwords);
    records.push_back(std::move(rec));
  }
  write_artifact(dir / kCleanFile, records);

  json counts;
  counts["total_parsed"] = parsed.posts.size();
  counts["parse_errors"] = parsed.errors.size();
  counts["bbox_kept"] = boxed.size();
  counts["dedup_kept"] = unique.size();
  write_counts(dir, counts);
  log << "[ingest] parsed=" << parsed.posts.size()
      << " errors=" << parsed.errors.size() << " bbox_kept=" << boxed.size()
      << " dedup_kept=" << unique.size() << '\n';
}

void run_filter(const PipelineConfig& cfg, std::ostream& log, std::ostream&) {
  const std::string stage = "filter";
  require_input(stage, "dei_keywords", cfg.dei_keywords);
  require_input(stage, "transport_keywords", cfg.transport_keywords);
  const fs::path dir = out_dir_of(stage, cfg);

  const auto records = read_artifact(stage, dir / kCleanFile);
  const auto dei = relevance::load_keywords(cfg.dei_keywords, "dei", &log);
  const auto transport =
      relevance::load_keywords(cfg.transport_keywords, "transport", &log);

  std::vector<corpus::CleanPost> posts;
  posts.reserve(records.size());
  for (const auto& rec : records) posts.push_back(rec.post);
  const auto filtered = relevance::tag_and_filter(posts, dei, transport, cfg.match);

  std::vector<Record> retained;
  retained.reserve(filtered.retained.size());
  for (const auto& post : filtered.retained) {
    Record rec;
    rec.post = post;
    retained.push_back(std::move(rec));
  }
  write_artifact(dir / kRelevantFile, retained);

  json counts = read_counts(stage, dir);
  counts["dei_kept"] = filtered.stage1_kept;
  counts["transport_kept"] = filtered.stage2_kept;
  write_counts(dir, counts);
  log << relevance::format_stage_report(filtered, records.size()) << '\n';
}

void run_sentiment(const PipelineConfig& cfg, std::ostream& log,
                   std::ostream&) {
  const std::string stage = "sentiment";
  require_input(stage, "lexicon", cfg.lexicon);
  const fs::path dir = out_dir_of(stage, cfg);

  auto records = read_artifact(stage, dir / kRelevantFile);
  const auto lexicon = sentiment::load_lexicon(cfg.lexicon, &log);
  sentiment::ScoreOptions opts;
  opts.heuristics = cfg.heuristics;
  opts.neutral_band = cfg.neutral_band;
  long long neg = 0, neu = 0, pos = 0;
  for (auto& rec : records) {
    rec.senti = sentiment::score(rec.post.tokens, lexicon, opts);
    rec.has_sentiment = true;
    switch (rec.senti.cls) {
      case sentiment::Class::Negative: ++neg; break;
      case sentiment::Class::Neutral: ++neu; break;
      case sentiment::Class::Positive: ++pos; break;
    }
  }
  write_artifact(dir / kScoredFile, records);
  log << "[sentiment] negative=" << neg << " neutral=" << neu
      << " positive=" << pos << '\n';
}

namespace {

const char* kSegments[3] = {"negative", "neutral", "positive"};

json fit_segment_topics(const PipelineConfig& cfg,
                        const std::vector<corpus::CleanPost>& posts,
                        const std::string& segment, std::uint64_t segment_seed,
                        const fs::path& dir, std::ostream& log) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["segment"] = segment;

  topics::TopicCorpus corpus;
  try {
    corpus = topics::build_topic_corpus(posts, cfg.min_count, cfg.min_tokens);
  } catch (const std::exception& e) {
    out["empty"] = true;
    out["reason"] = e.what();
    log << "[topics] segment=" << segment << " skipped: " << e.what() << '\n';
    return out;
  }
  out["empty"] = false;
  out["docs"] = corpus.docs.size();
  out["vocab"] = corpus.vocab.size();
  out["dropped_short_docs"] = corpus.dropped_short_docs;

  topics::LdaParams base;
  base.alpha = cfg.alpha;
  base.beta = cfg.beta;
  base.iterations = cfg.iterations;

  std::vector<int> candidates =
      cfg.lda_k > 0 ? std::vector<int>{cfg.lda_k} : cfg.k_candidates;
  // candidates larger than the segment can support are dropped
  long long total_tokens = 0;
  for (const auto& d : corpus.docs) total_tokens += d.size();
  std::erase_if(candidates, [&](int k) { return k > total_tokens; });
  if (candidates.empty()) {
    out["empty"] = true;
    out["reason"] = "no feasible topic count";
    return out;
  }

  const auto selection =
      topics::select_k(corpus, candidates, base, segment_seed, cfg.top_words);
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] == selection.best_k) best_index = i;
  }

  json coherence = json::array();
  for (const auto& [k, c] : selection.coherence_by_k) {
    coherence.push_back({k, c});
  }
  out["coherence_by_k"] = coherence;
  {
    std::ofstream csv_out(dir / ("coherence_" + segment + ".csv"));
    csv_out << "K,mean_coherence\n";
    for (const auto& [k, c] : selection.coherence_by_k) {
      csv_out << k << ',' << c << '\n';
    }
  }

  topics::LdaParams params = base;
  params.k = selection.best_k;
  params.seed = segment_seed + best_index;  // same stream as the winning fit
  const auto model = topics::lda_fit(corpus, params);
  const auto prevalence = topics::topic_prevalence(model, corpus);

  out["k"] = model.k;
  out["alpha"] = model.alpha;
  out["beta"] = model.beta;
  out["iterations"] = model.iterations;
  out["seed"] = model.seed;

  std::vector<int> topic_order(model.k);
  for (int t = 0; t < model.k; ++t) topic_order[t] = t;
  std::sort(topic_order.begin(), topic_order.end(), [&](int a, int b) {
    if (prevalence[a] != prevalence[b]) return prevalence[a] > prevalence[b];
    return a < b;
  });

  json topics_json = json::array();
  for (const int t : topic_order) {
    json tj;
    tj["topic"] = t;
    tj["prevalence"] = prevalence[t];
    json words = json::array();
    for (const auto& [w, p] :
         topics::top_words(model, t, static_cast<std::size_t>(cfg.top_words))) {
      words.push_back({w, p});
    }
    tj["words"] = words;
    topics_json.push_back(std::move(tj));
  }
  out["topics"] = topics_json;
  log << "[topics] segment=" << segment << " docs=" << corpus.docs.size()
      << " k=" << model.k << '\n';
  return out;
}

}  // namespace

void run_topics(const PipelineConfig& cfg, const std::string& segment,
                std::ostream& log, std::ostream&) {
  const std::string stage = "topics";
  const fs::path dir = out_dir_of(stage, cfg);
  const std::uint64_t seed = require_seed(stage, cfg);

  const auto records = read_artifact(stage, dir / kScoredFile);
  for (const auto& rec : records) {
    if (!rec.has_sentiment) {
      throw StageError(stage, "artifact lacks sentiment fields; run sentiment");
    }
  }

  for (int s = 0; s < 3; ++s) {
    if (!segment.empty() && segment != kSegments[s]) continue;
    std::vector<corpus::CleanPost> posts;
    for (const auto& rec : records) {
      if (sentiment::class_name(rec.senti.cls) == kSegments[s]) {
        posts.push_back(rec.post);
      }
    }
    const json result =
        fit_segment_topics(cfg, posts, kSegments[s], seed + s, dir, log);
    std::ofstream out(dir / ("topics_" + std::string(kSegments[s]) + ".json"));
    if (!out) throw StageError(stage, "cannot write topics output");
    out << result.dump(2) << '\n';
  }
}

void run_bigrams(const PipelineConfig& cfg, std::ostream& log, std::ostream&) {
  const std::string stage = "bigrams";
  const fs::path dir = out_dir_of(stage, cfg);
  if (cfg.cluster_g < 1) {
    throw StageError(stage,
                     "clustering.g is required (the method has no default)");
  }
  const auto records = read_artifact(stage, dir / kRelevantFile);
  std::vector<std::vector<std::string>> docs;
  docs.reserve(records.size());
  for (const auto& rec : records) docs.push_back(rec.post.tokens);

  ngram::BigramStats stats;
  try {
    stats = ngram::count(docs);
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }

  const auto ranked =
      ngram::top_bigrams(stats, static_cast<std::size_t>(cfg.top_bigrams));
  {
    std::ofstream out(dir / "bigrams.csv");
    out << "v,w,count\n";
    for (const auto& b : ranked) {
      csv::write_record(out, {b.v, b.w, std::to_string(b.count)});
    }
  }

  const int g = std::min<int>(cfg.cluster_g, static_cast<int>(stats.vocab.size()));
  const auto clustered =
      ngram::cluster_exchange(stats, g, cfg.max_sweeps, cfg.seed.value_or(0));
  {
    std::ofstream out(dir / "word_classes.csv");
    out << "word,class\n";
    // stable listing: class index, then word
    std::vector<int> order(stats.vocab.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (clustered.map.assign[a] != clustered.map.assign[b]) {
        return clustered.map.assign[a] < clustered.map.assign[b];
      }
      return stats.vocab[a] < stats.vocab[b];
    });
    for (const int w : order) {
      csv::write_record(out, {stats.vocab[w],
                              std::to_string(clustered.map.assign[w])});
    }
  }
  for (const double f : clustered.fbi_history) {
    log << "F_bi " << f << '\n';
  }

  json out;
  out["schema_version"] = kSchemaVersion;
  out["vocab_size"] = stats.vocab.size();
  out["total_tokens"] = stats.total_tokens;
  out["total_bigrams"] = stats.total_bigrams;
  json top = json::array();
  for (const auto& b : ranked) top.push_back({b.v, b.w, b.count});
  out["top_bigrams"] = top;
  out["clustering"] = {
      {"g", g},
      {"sweeps", clustered.sweeps},
      {"converged", clustered.converged},
      {"fbi_history", clustered.fbi_history},
      {"final_fbi", clustered.fbi_history.back()},
  };
  std::ofstream json_out(dir / kNgramFile);
  json_out << out.dump(2) << '\n';
}

void run_geotag(const PipelineConfig& cfg, std::ostream& log, std::ostream&) {
  const std::string stage = "geotag";
  require_input(stage, "tracts", cfg.tracts);
  const fs::path dir = out_dir_of(stage, cfg);

  auto records = read_artifact(stage, dir / kScoredFile);
  geo::TractSet tracts;
  try {
    tracts = geo::load_tracts(cfg.tracts);
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
  for (const auto& fe : tracts.errors) {
    log << "[geotag] feature " << fe.feature_index << " skipped: " << fe.reason
        << '\n';
  }
  long long assigned = 0;
  for (auto& rec : records) {
    rec.geoid = geo::assign_tract(rec.post.lon, rec.post.lat, tracts);
    rec.has_geoid_field = true;
    if (rec.geoid) ++assigned;
  }
  write_artifact(dir / kGeotaggedFile, records);
  log << "[geotag] assigned=" << assigned << " of " << records.size() << '\n';
}

void run_report(const PipelineConfig& cfg, std::ostream& log, std::ostream&) {
  const std::string stage = "report";
  require_input(stage, "acs", cfg.acs);
  const fs::path dir = out_dir_of(stage, cfg);

  const auto records = read_artifact(stage, dir / kGeotaggedFile);
  std::vector<report::ScoredGeoPost> posts;
  posts.reserve(records.size());
  for (const auto& rec : records) {
    if (!rec.has_sentiment || !rec.has_geoid_field) {
      throw StageError(stage, "artifact lacks sentiment/geoid fields");
    }
    posts.push_back({rec.post, rec.senti, rec.geoid});
  }

  geo::AcsTable acs;
  try {
    acs = geo::load_acs(cfg.acs);
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
  for (const auto& re : acs.row_errors) {
    log << "[report] acs line " << re.line << " rejected: " << re.reason
        << '\n';
  }

  const auto senti_dist = report::sentiment_distribution(posts);
  const auto summary = report::tract_rollup(posts, acs.by_geoid);
  const auto demo_rows = report::demographic_distribution(summary, posts);

  geo::TractSet tracts;
  if (!cfg.tracts.empty() && fs::exists(cfg.tracts)) {
    tracts = geo::load_tracts(cfg.tracts);
  }
  report::emit_geojson(posts, summary, tracts, (dir / "points.geojson").string(),
                       (dir / "tracts.geojson").string());

  json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["tool_version"] = kToolVersion;
  rep["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  rep["stage_counts"] = read_counts(stage, dir);

  rep["sentiment"] = {
      {"empty", senti_dist.empty},
      {"n_negative", senti_dist.n_negative},
      {"n_neutral", senti_dist.n_neutral},
      {"n_positive", senti_dist.n_positive},
      {"pct_negative", senti_dist.pct_negative},
      {"pct_neutral", senti_dist.pct_neutral},
      {"pct_positive", senti_dist.pct_positive},
  };

  json topics_json;
  for (const auto* seg : kSegments) {
    const fs::path topic_file = dir / ("topics_" + std::string(seg) + ".json");
    if (fs::exists(topic_file)) {
      std::ifstream tin(topic_file);
      topics_json[seg] = json::parse(tin);
    } else {
      topics_json[seg] = json(nullptr);
    }
  }
  rep["topics"] = topics_json;

  {
    const fs::path ngram_file = dir / kNgramFile;
    if (fs::exists(ngram_file)) {
      std::ifstream nin(ngram_file);
      rep["ngram"] = json::parse(nin);
    } else {
      rep["ngram"] = json(nullptr);
    }
  }

  json rollups = json::array();
  for (const auto& roll : summary.rollups) {
    json rj;
    rj["geoid"] = roll.geoid;
    rj["n_negative"] = roll.n_negative;
    rj["n_neutral"] = roll.n_neutral;
    rj["n_positive"] = roll.n_positive;
    rj["highly_sensitive"] = roll.highly_sensitive;
    auto band_or_null = [](const std::optional<geo::Band>& b) {
      return b ? json(std::string(geo::band_name(*b))) : json(nullptr);
    };
    rj["income"] = band_or_null(roll.classification.income);
    rj["female"] = band_or_null(roll.classification.female);
    rj["hispanic_latino"] = band_or_null(roll.classification.hispanic_latino);
    rj["black"] = band_or_null(roll.classification.black);
    rollups.push_back(std::move(rj));
  }
  rep["tracts"] = {
      {"total", summary.tracts_total},
      {"with_negative", summary.tracts_with_negative},
      {"with_neutral", summary.tracts_with_neutral},
      {"with_positive", summary.tracts_with_positive},
      {"highly_sensitive", summary.tracts_highly_sensitive},
      {"unassigned_posts", summary.unassigned_posts},
      {"rollups", rollups},
  };

  json demo_json = json::array();
  {
    json current;
    std::string current_dim;
    for (const auto& row : demo_rows) {
      if (row.dimension != current_dim) {
        if (!current_dim.empty()) demo_json.push_back(current);
        current = json{{"dimension", row.dimension}, {"rows", json::array()}};
        current_dim = row.dimension;
      }
      current["rows"].push_back({{"class", row.class_label},
                                 {"count", row.post_count},
                                 {"share", row.tweet_share}});
    }
    if (!current_dim.empty()) demo_json.push_back(current);
  }
  rep["demographics"] = demo_json;

  {
    std::ofstream out(dir / kReportFile);
    if (!out) throw StageError(stage, "cannot write report.json");
    out << rep.dump(2) << '\n';
  }

  // CSV tables
  {
    std::ofstream out(dir / "sentiment.csv");
    out << "class,count,share\n";
    out << "negative," << senti_dist.n_negative << ',' << senti_dist.pct_negative << '\n';
    out << "neutral," << senti_dist.n_neutral << ',' << senti_dist.pct_neutral << '\n';
    out << "positive," << senti_dist.n_positive << ',' << senti_dist.pct_positive << '\n';
  }
  {
    std::ofstream out(dir / "tract_rollups.csv");
    out << "geoid,n_negative,n_neutral,n_positive,highly_sensitive,income,female,hispanic_latino,black\n";
    auto label = [](const std::optional<geo::Band>& b) {
      return b ? std::string(geo::band_name(*b)) : std::string();
    };
    for (const auto& roll : summary.rollups) {
      csv::write_record(
          out, {roll.geoid, std::to_string(roll.n_negative),
                std::to_string(roll.n_neutral), std::to_string(roll.n_positive),
                roll.highly_sensitive ? "true" : "false",
                label(roll.classification.income),
                label(roll.classification.female),
                label(roll.classification.hispanic_latino),
                label(roll.classification.black)});
    }
  }
  {
    std::ofstream out(dir / "demographics.csv");
    out << "dimension,class,count,share\n";
    char buf[32];
    for (const auto& row : demo_rows) {
      std::snprintf(buf, sizeof(buf), "%.1f", row.tweet_share);
      csv::write_record(out, {row.dimension, row.class_label,
                              std::to_string(row.post_count), buf});
    }
  }
  for (const auto* seg : kSegments) {
    const fs::path topic_file = dir / ("topics_" + std::string(seg) + ".json");
    if (!fs::exists(topic_file)) continue;
    std::ifstream tin(topic_file);
    const json tj = json::parse(tin);
    std::ofstream out(dir / ("topics_" + std::string(seg) + ".csv"));
    out << "topic,prevalence,word,probability\n";
    if (!tj.value("empty", true)) {
      for (const auto& topic : tj["topics"]) {
        for (const auto& word : topic["words"]) {
          out << topic["topic"].get<int>() << ','
              << topic["prevalence"].get<double>() << ','
              << csv::escape(word[0].get<std::string>()) << ','
              << word[1].get<double>() << '\n';
        }
      }
    }
  }
  log << "[report] posts=" << posts.size()
      << " tracts=" << summary.tracts_total
      << " highly_sensitive=" << summary.tracts_highly_sensitive << '\n';
}

void run_all(const PipelineConfig& cfg, std::ostream& log, std::ostream& err) {
  run_ingest(cfg, log, err);
  run_filter(cfg, log, err);
  run_sentiment(cfg, log, err);
  run_topics(cfg, "", log, err);
  run_bigrams(cfg, log, err);
  run_geotag(cfg, log, err);
  run_report(cfg, log, err);
}

}  // namespace deia::pipeline
