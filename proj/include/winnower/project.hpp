#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "winnower/corpus.hpp"
#include "winnower/report.hpp"
#include "winnower/topics.hpp"
#include "winnower/winnow.hpp"

namespace winnower {

/// Project-wide defaults. Per-round parameters (metric, percentile, seeds)
/// are passed to each operation instead.
struct ProjectConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
  int min_token_length = 2;
  // "auto" resolves to lemmatizer when a lemma table is installed, else none.
  std::string reducer = "auto";
  double smoothing_epsilon = 0.5;
  VocabularyMode vocabulary_mode = VocabularyMode::kUnionOfPair;
  LdaConfig lda;
  int histogram_bins = kDefaultHistogramBins;
  std::vector<PercentileBand> bands = default_bands();
  int samples_per_band = kDefaultSamplesPerBand;
};

struct InitOptions {
  ProjectConfig config;
  std::optional<std::filesystem::path> stopwords_file;
  std::optional<std::filesystem::path> lemma_file;
};

struct IngestSummary {
  std::size_t documents = 0;
  std::size_t skipped = 0;
  std::size_t errors = 0;
  std::size_t vocabulary = 0;
  std::size_t tokens = 0;
  std::string config_hash;
};

enum class TopicScope { kDerived, kParent, kSeed };
TopicScope parse_topic_scope(std::string_view name);
const char* topic_scope_name(TopicScope scope);

struct ReportOptions {
  std::optional<int> bins;
  std::optional<double> percentile;
  std::optional<std::string> seed_ref;
  std::optional<std::size_t> top_n;
  std::optional<TopicScope> scope;
};

struct QueueItem {
  std::string doc_id;
  std::string title;
  int year = 0;
  double value = 0;
  std::size_t rank = 0;
  int tranche_id = 0;
  PercentileBand band;
  std::optional<bool> relevant;
};

/// A project directory: config, corpus cache, append-only rounds and derived
/// reports. Opening takes an exclusive lock file held until destruction.
class Project {
 public:
  static void init(const std::filesystem::path& root, const InitOptions& options);
  static std::unique_ptr<Project> open(const std::filesystem::path& root);

  ~Project();
  Project(const Project&) = delete;
  Project& operator=(const Project&) = delete;

  const std::filesystem::path& root() const { return root_; }
  const ProjectConfig& config() const { return config_; }
  NormalizationConfig normalization() const;
  SmoothingConfig smoothing() const;
  std::string config_hash() const;

  IngestSummary ingest(const std::filesystem::path& manifest);
  bool has_corpus() const;
  const Corpus& corpus();

  /// New round over the whole corpus, scored against the seed texts in
  /// `seed_manifest` (pooled; per-seed rows too when per_seed).
  Round rank(Metric metric, const std::filesystem::path& seed_manifest,
             bool per_seed);

  /// Cuts a scored round in place. If the round is already cut, is not the
  /// newest, or a different metric is requested, a new round with the same
  /// seed and parent is scored and cut instead.
  Round winnow(int round_id, std::optional<Metric> metric, double percentile);

  Round sample(int round_id, const std::vector<PercentileBand>& bands,
               int k_per_band, std::uint64_t rng_seed);
  LabelReport label(int round_id, const std::vector<Label>& labels);
  double hit_rate(int round_id);

  /// New round scoring the survivors of `round_id` against its relevant
  /// labels, pooled.
  Round reseed(int round_id, std::optional<Metric> metric);

  std::vector<TopicSummary> train_topics(int round_id, TopicScope scope,
                                         const LdaConfig& config);
  void name_topics(int round_id, const std::map<int, std::string>& names);
  std::map<int, std::string> topic_names(int round_id) const;

  /// kind: histogram, year-series, ngrams or topics. Pure over persisted
  /// state; the same bytes are served by the review API.
  std::string report(int round_id, std::string_view kind,
                     const ReportOptions& options);

  std::vector<int> round_ids() const { return store_.ids(); }
  int resolve_round(int round_id) const;  // 0 -> newest
  Round load_round(int round_id) const;
  std::vector<QueueItem> queue(int round_id);

  std::filesystem::path reports_dir(int round_id) const;

  // Serializes writers against readers when the project is shared by threads.
  std::shared_mutex& mutex() { return mutex_; }

 private:
  Project(std::filesystem::path root, ProjectConfig config, int lock_fd);

  std::vector<const Document*> parent_documents(const Round& round);
  std::vector<std::string> scope_documents(const Round& round, TopicScope scope);
  Round new_round(int parent_round, Metric metric);

  std::filesystem::path root_;
  ProjectConfig config_;
  int lock_fd_ = -1;
  RoundStore store_;
  std::optional<Corpus> corpus_;
  std::mutex corpus_mutex_;
  std::shared_mutex mutex_;
};

std::string config_to_json(const ProjectConfig& config);
ProjectConfig config_from_json(const std::string& text);

}  // namespace winnower
