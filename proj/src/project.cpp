#include "winnower/project.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "json.hpp"
#include "winnower/error.hpp"
#include "winnower/hash.hpp"
#include "winnower/io.hpp"

namespace winnower {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kConfigFile = "project.json";
constexpr const char* kStopwordsFile = "stopwords.txt";
constexpr const char* kLemmaFile = "lemmas.tsv";
constexpr const char* kLockFile = ".winnower.lock";

}  // namespace

std::string config_to_json(const ProjectConfig& c) {
  json bands = json::array();
  for (const auto& b : c.bands) bands.push_back(b.str());
  json lda = {{"num_topics", c.lda.num_topics},
              {"beta", c.lda.beta},
              {"iterations", c.lda.iterations},
              {"rng_seed", c.lda.rng_seed}};
  lda["alpha"] = c.lda.alpha ? json(*c.lda.alpha) : json(nullptr);
  const json j = {
      {"format", "winnower-project"},
      {"version", 1},
      {"normalization",
       {{"lowercase", c.lowercase},
        {"strip_punctuation", c.strip_punctuation},
        {"min_token_length", c.min_token_length},
        {"reducer", c.reducer}}},
      {"smoothing",
       {{"epsilon", c.smoothing_epsilon},
        {"vocabulary_mode", vocabulary_mode_name(c.vocabulary_mode)}}},
      {"lda", lda},
      {"report", {{"histogram_bins", c.histogram_bins}}},
      {"sampling", {{"bands", bands}, {"samples_per_band", c.samples_per_band}}},
  };
  return j.dump(2) + "\n";
}

ProjectConfig config_from_json(const std::string& text) {
  ProjectConfig c;
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "winnower-project") {
      fail(ErrorCode::kParse, "not a winnower project file");
    }
    const auto& n = j.at("normalization");
    c.lowercase = n.at("lowercase").get<bool>();
    c.strip_punctuation = n.at("strip_punctuation").get<bool>();
    c.min_token_length = n.at("min_token_length").get<int>();
    c.reducer = n.at("reducer").get<std::string>();
    const auto& s = j.at("smoothing");
    c.smoothing_epsilon = s.at("epsilon").get<double>();
    c.vocabulary_mode =
        parse_vocabulary_mode(s.at("vocabulary_mode").get<std::string>());
    const auto& l = j.at("lda");
    c.lda.num_topics = l.at("num_topics").get<int>();
    c.lda.beta = l.at("beta").get<double>();
    c.lda.iterations = l.at("iterations").get<int>();
    c.lda.rng_seed = l.at("rng_seed").get<std::uint64_t>();
    if (!l.at("alpha").is_null()) c.lda.alpha = l.at("alpha").get<double>();
    c.histogram_bins = j.at("report").at("histogram_bins").get<int>();
    c.bands.clear();
    for (const auto& b : j.at("sampling").at("bands")) {
      c.bands.push_back(PercentileBand::parse(b.get<std::string>()));
    }
    c.samples_per_band = j.at("sampling").at("samples_per_band").get<int>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad project config: ") + e.what());
  }
  return c;
}

TopicScope parse_topic_scope(std::string_view name) {
  if (name == "derived") return TopicScope::kDerived;
  if (name == "parent") return TopicScope::kParent;
  if (name == "seed") return TopicScope::kSeed;
  fail(ErrorCode::kInvalidArgument,
       "unknown scope '" + std::string(name) + "' (expected derived, parent or seed)");
}

const char* topic_scope_name(TopicScope scope) {
  switch (scope) {
    case TopicScope::kDerived:
      return "derived";
    case TopicScope::kParent:
      return "parent";
    case TopicScope::kSeed:
      return "seed";
  }
  return "derived";
}

void Project::init(const fs::path& root, const InitOptions& options) {
  if (fs::exists(root / kConfigFile)) {
    fail(ErrorCode::kConflict, "project already initialized at " + root.string());
  }
  const auto& c = options.config;
  if (c.reducer != "auto") parse_reducer(c.reducer);
  if (c.reducer == "lemmatizer" && !options.lemma_file) {
    fail(ErrorCode::kInvalidArgument, "reducer lemmatizer needs a lemma table");
  }
  if (!(c.smoothing_epsilon > 0)) {
    fail(ErrorCode::kInvalidArgument, "smoothing epsilon must be positive");
  }
  fs::create_directories(root);
  if (options.stopwords_file) {
    load_stopwords(*options.stopwords_file);
    fs::copy_file(*options.stopwords_file, root / kStopwordsFile,
                  fs::copy_options::overwrite_existing);
  }
  if (options.lemma_file) {
    load_lemma_table(*options.lemma_file);
    fs::copy_file(*options.lemma_file, root / kLemmaFile,
                  fs::copy_options::overwrite_existing);
  }
  fs::create_directories(root / "rounds");
  fs::create_directories(root / "reports");
  write_file_atomic(root / kConfigFile, config_to_json(c));
}

std::unique_ptr<Project> Project::open(const fs::path& root) {
  if (!fs::exists(root / kConfigFile)) {
    fail(ErrorCode::kNotFound, "no project at " + root.string() + " (run init)");
  }
  ProjectConfig config = config_from_json(read_file(root / kConfigFile));
  const int fd = ::open((root / kLockFile).c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (fd < 0) {
    fail(ErrorCode::kIo, "cannot open lock file: " + std::string(std::strerror(errno)));
  }
  if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd);
    fail(ErrorCode::kLocked, "project " + root.string() + " is in use by another process");
  }
  return std::unique_ptr<Project>(new Project(root, std::move(config), fd));
}

Project::Project(fs::path root, ProjectConfig config, int lock_fd)
    : root_(std::move(root)),
      config_(std::move(config)),
      lock_fd_(lock_fd),
      store_(root_ / "rounds") {}

Project::~Project() {
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

NormalizationConfig Project::normalization() const {
  NormalizationConfig n;
  n.lowercase = config_.lowercase;
  n.strip_punctuation = config_.strip_punctuation;
  n.min_token_length = config_.min_token_length;
  if (fs::exists(root_ / kStopwordsFile)) n.stopwords = load_stopwords(root_ / kStopwordsFile);
  const bool has_lemmas = fs::exists(root_ / kLemmaFile);
  if (config_.reducer == "auto") {
    n.reducer = has_lemmas ? Reducer::kLemmatizer : Reducer::kNone;
  } else {
    n.reducer = parse_reducer(config_.reducer);
  }
  if (n.reducer == Reducer::kLemmatizer) {
    if (!has_lemmas) fail(ErrorCode::kState, "lemmatizer selected but no lemma table installed");
    n.lemma_table = load_lemma_table(root_ / kLemmaFile);
  }
  return n;
}

SmoothingConfig Project::smoothing() const {
  SmoothingConfig s;
  s.epsilon = config_.smoothing_epsilon;
  s.vocabulary_mode = config_.vocabulary_mode;
  return s;
}

std::string Project::config_hash() const {
  Fnv1a h;
  h.field(normalization().hash());
  h.field(format_double(config_.smoothing_epsilon));
  h.field(vocabulary_mode_name(config_.vocabulary_mode));
  return h.hex();
}

IngestSummary Project::ingest(const fs::path& manifest) {
  const auto norm = normalization();
  Corpus corpus = ingest_corpus(manifest, norm);
  save_corpus(corpus, root_ / "corpus", {norm.hash(), file_digest(manifest)});
  IngestSummary summary;
  summary.documents = corpus.size();
  summary.skipped = corpus.skipped().size();
  summary.errors = corpus.errors().size();
  summary.vocabulary = corpus.vocabulary().size();
  summary.tokens = corpus.total_tokens();
  summary.config_hash = norm.hash();
  std::lock_guard<std::mutex> lock(corpus_mutex_);
  corpus_ = std::move(corpus);
  return summary;
}

bool Project::has_corpus() const { return read_cache_tag(root_ / "corpus").has_value(); }

const Corpus& Project::corpus() {
  std::lock_guard<std::mutex> lock(corpus_mutex_);
  if (!corpus_) {
    const auto tag = read_cache_tag(root_ / "corpus");
    if (!tag) fail(ErrorCode::kState, "no corpus ingested (run ingest)");
    if (tag->config_hash != normalization().hash()) {
      fail(ErrorCode::kState,
           "corpus cache was built with a different normalization config (re-run ingest)");
    }
    corpus_ = load_corpus(root_ / "corpus");
  }
  return *corpus_;
}

int Project::resolve_round(int round_id) const {
  if (round_id > 0) {
    if (!store_.exists(round_id)) {
      fail(ErrorCode::kNotFound, "unknown round " + std::to_string(round_id));
    }
    return round_id;
  }
  const int latest = store_.latest();
  if (latest == 0) fail(ErrorCode::kNotFound, "no rounds yet (run rank)");
  return latest;
}

Round Project::load_round(int round_id) const { return store_.load(resolve_round(round_id)); }

fs::path Project::reports_dir(int round_id) const {
  return root_ / "reports" / store_.round_dir(round_id).filename();
}

Round Project::new_round(int parent_round, Metric metric) {
  Round r;
  r.round_id = store_.next_id();
  r.parent_round = parent_round;
  r.metric = metric;
  r.smoothing_epsilon = config_.smoothing_epsilon;
  r.vocabulary_mode = config_.vocabulary_mode;
  r.config_hash = config_hash();
  return r;
}

std::vector<const Document*> Project::parent_documents(const Round& round) {
  const Corpus& c = corpus();
  std::vector<const Document*> docs;
  if (round.parent_round == 0) {
    for (const auto& d : c.documents()) docs.push_back(&d);
    return docs;
  }
  const Round parent = store_.load(round.parent_round);
  for (const auto& id : parent.derived_doc_ids) docs.push_back(&c.at(id));
  return docs;
}

Round Project::rank(Metric metric, const fs::path& seed_manifest, bool per_seed) {
  const auto records = read_manifest(seed_manifest);
  if (records.empty()) fail(ErrorCode::kInvalidArgument, "seed manifest is empty");
  const auto norm = normalization();
  Round r = new_round(0, metric);
  r.seed.kind = SeedSpec::Kind::kExternal;
  for (const auto& rec : records) {
    const std::string text = rec.text ? *rec.text : read_file(*rec.path);
    SeedText seed{rec.doc_id, {}};
    for (const auto& t : normalize(text, norm)) seed.counts[t] += 1;
    if (seed.counts.empty()) {
      fail(ErrorCode::kInvalidArgument, "seed " + rec.doc_id + " has no tokens after normalization");
    }
    r.seed.ids.push_back(rec.doc_id);
    r.seed_texts.push_back(std::move(seed));
  }
  score_round(corpus(), parent_documents(r), r, per_seed);
  store_.create(r);
  return r;
}

Round Project::winnow(int round_id, std::optional<Metric> metric, double percentile) {
  Round r = load_round(round_id);
  cut_size(r.parent_size, percentile);
  const bool in_place = r.status() == RoundStatus::kScored &&
                        (!metric || *metric == r.metric);
  if (in_place) {
    winnow_round(r, percentile);
    store_.save_winnow(r);
    return r;
  }
  Round next = new_round(r.parent_round, metric.value_or(r.metric));
  next.seed = r.seed;
  next.seed_texts = r.seed_texts;
  const bool per_seed = r.scores.size() > r.pooled_scores().size();
  next = run_round(corpus(), parent_documents(next), std::move(next), percentile, per_seed);
  store_.create(next);
  return next;
}

Round Project::sample(int round_id, const std::vector<PercentileBand>& bands,
                      int k_per_band, std::uint64_t rng_seed) {
  Round r = load_round(round_id);
  if (r.closed) fail(ErrorCode::kConflict, "round " + std::to_string(r.round_id) + " is closed");
  if (!r.cutoff_percentile) {
    fail(ErrorCode::kState, "round " + std::to_string(r.round_id) + " has not been winnowed");
  }
  if (!r.tranches.empty()) {
    fail(ErrorCode::kState, "round " + std::to_string(r.round_id) + " is already sampled");
  }
  r.tranches = sample_tranches(r.pooled_scores(), bands, k_per_band, rng_seed);
  store_.save_tranches(r);
  return r;
}

LabelReport Project::label(int round_id, const std::vector<Label>& labels) {
  Round r = load_round(round_id);
  const std::size_t before = r.labels.size();
  LabelReport report = ingest_labels(r, labels);
  const std::vector<Label> added(r.labels.begin() + static_cast<long>(before), r.labels.end());
  if (!added.empty()) store_.append_labels(r, added);
  return report;
}

double Project::hit_rate(int round_id) { return winnower::hit_rate(load_round(round_id)); }

Round Project::reseed(int round_id, std::optional<Metric> metric) {
  const Round r = load_round(round_id);
  if (!r.cutoff_percentile) {
    fail(ErrorCode::kState, "round " + std::to_string(r.round_id) + " has not been winnowed");
  }
  const SeedSpec spec = assemble_next_seed(r);
  Round next = new_round(r.round_id, metric.value_or(r.metric));
  next.seed = spec;
  next.seed_texts.push_back(seed_from_documents("relevant", corpus(), spec.ids));
  score_round(corpus(), parent_documents(next), next, false);
  store_.create(next);
  return next;
}

std::vector<std::string> Project::scope_documents(const Round& round, TopicScope scope) {
  if (scope == TopicScope::kDerived) {
    if (!round.cutoff_percentile) {
      fail(ErrorCode::kState, "round " + std::to_string(round.round_id) + " has not been winnowed");
    }
    return round.derived_doc_ids;
  }
  std::vector<std::string> ids;
  for (const auto* d : parent_documents(round)) ids.push_back(d->doc_id);
  return ids;
}

std::vector<TopicSummary> Project::train_topics(int round_id, TopicScope scope,
                                                const LdaConfig& lda) {
  const Round r = load_round(round_id);
  TopicCorpus tc;
  if (scope == TopicScope::kSeed) {
    std::vector<std::pair<std::string, std::map<std::string, double>>> texts;
    for (const auto& s : r.seed_texts) texts.emplace_back(s.seed_id, s.counts);
    tc = make_topic_corpus(texts);
  } else {
    tc = make_topic_corpus(corpus(), scope_documents(r, scope));
  }
  const TopicModel model = TopicModel::train(tc, lda);
  const fs::path dir = reports_dir(r.round_id) / "topics";
  fs::create_directories(dir);
  write_file_atomic(dir / "model.json", model.to_json());
  const json meta = {{"scope", topic_scope_name(scope)},
                     {"num_topics", model.num_topics()},
                     {"alpha", model.alpha()},
                     {"beta", model.beta()},
                     {"iterations", model.iterations_run()},
                     {"rng_seed", model.rng_seed()}};
  write_file_atomic(dir / "meta.json", meta.dump(2) + "\n");
  // Names describe a specific fitted model.
  fs::remove(dir / "names.tsv");
  return topic_prevalence_summaries(model);
}

std::map<int, std::string> Project::topic_names(int round_id) const {
  const fs::path file = reports_dir(resolve_round(round_id)) / "topics" / "names.tsv";
  if (!fs::exists(file)) return {};
  return parse_topic_names(read_file(file));
}

void Project::name_topics(int round_id, const std::map<int, std::string>& names) {
  const int id = resolve_round(round_id);
  const fs::path dir = reports_dir(id) / "topics";
  if (!fs::exists(dir / "model.json")) {
    fail(ErrorCode::kNotFound, "round " + std::to_string(id) + " has no topic model (run topics)");
  }
  const TopicModel model = TopicModel::from_json(read_file(dir / "model.json"));
  for (const auto& [k, name] : names) {
    if (name.find_first_of("\t\r\n") != std::string::npos) {
      fail(ErrorCode::kInvalidArgument, "topic names cannot contain tabs or newlines");
    }
  }
  auto merged = topic_names(id);
  for (const auto& [k, name] : names) merged[k] = name;
  assign_names(model, merged);
  write_file_atomic(dir / "names.tsv", format_topic_names(merged));
}

std::string Project::report(int round_id, std::string_view kind, const ReportOptions& options) {
  const Round r = load_round(round_id);
  if (kind == "histogram") {
    auto scores = r.scores;
    if (options.seed_ref) scores = select_seed(scores, SeedRef::parse(*options.seed_ref));
    if (scores.empty()) fail(ErrorCode::kNotFound, "no scores for that seed reference");
    std::string out;
    for (const auto& h : histograms_by_seed(scores, options.bins.value_or(config_.histogram_bins))) {
      out += format_histogram(h);
    }
    return out;
  }
  if (kind == "year-series") {
    const auto ref = SeedRef::parse(options.seed_ref.value_or("pooled"));
    const auto scores = select_seed(r.scores, ref);
    if (scores.empty()) fail(ErrorCode::kNotFound, "no scores for seed reference " + ref.str());
    const auto percentile = options.percentile ? options.percentile : r.cutoff_percentile;
    if (!percentile) {
      fail(ErrorCode::kInvalidArgument, "round is not winnowed; pass a percentile");
    }
    return format_year_series(year_series(scores, corpus(), *percentile));
  }
  if (kind == "ngrams") {
    const std::size_t n = options.top_n.value_or(20);
    const TopicScope scope = options.scope.value_or(
        r.cutoff_percentile ? TopicScope::kDerived : TopicScope::kParent);
    if (scope == TopicScope::kSeed) {
      std::map<std::string, double> pooled;
      for (const auto& s : r.seed_texts) {
        for (const auto& [w, c] : s.counts) pooled[w] += c;
      }
      return format_ngrams(top_ngrams(pooled, n));
    }
    return format_ngrams(top_ngrams(corpus(), scope_documents(r, scope), n));
  }
  if (kind == "topics") {
    const fs::path file = reports_dir(r.round_id) / "topics" / "model.json";
    if (!fs::exists(file)) {
      fail(ErrorCode::kNotFound, "round " + std::to_string(r.round_id) + " has no topic model (run topics)");
    }
    const TopicModel model = TopicModel::from_json(read_file(file));
    return format_topic_report(assign_names(model, topic_names(r.round_id), options.top_n.value_or(20)));
  }
  fail(ErrorCode::kInvalidArgument,
       "unknown report '" + std::string(kind) + "' (expected histogram, year-series, ngrams or topics)");
}

std::vector<QueueItem> Project::queue(int round_id) {
  const Round r = load_round(round_id);
  const auto ranked = rank_scores(r.pooled_scores());
  std::map<std::string, std::pair<double, std::size_t>> position;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    position.emplace(ranked[i].doc_id, std::make_pair(ranked[i].value, i + 1));
  }
  std::map<std::string, bool> labels;
  for (const auto& l : r.effective()) labels[l.doc_id] = l.relevant;

  const Corpus& c = corpus();
  std::vector<QueueItem> items;
  auto add = [&](const std::string& id, int tranche, PercentileBand band) {
    const Document& d = c.at(id);
    QueueItem item;
    item.doc_id = id;
    item.title = d.title;
    item.year = d.year;
    item.value = position.at(id).first;
    item.rank = position.at(id).second;
    item.tranche_id = tranche;
    item.band = band;
    if (auto it = labels.find(id); it != labels.end()) item.relevant = it->second;
    items.push_back(std::move(item));
  };
  if (!r.tranches.empty()) {
    for (const auto& t : r.tranches) {
      for (const auto& id : t.sampled_doc_ids) add(id, t.tranche_id, t.band);
    }
  } else if (r.cutoff_percentile) {
    for (const auto& id : r.derived_doc_ids) add(id, 0, {0, *r.cutoff_percentile});
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
  return items;
}

}  // namespace winnower
