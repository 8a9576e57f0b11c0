#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "winnower/divergence.hpp"

namespace winnower {

/// Number of documents kept by a percentile cut: ceil(percentile/100 × n).
/// Products within 1e-12 (relative) of an integer are treated as that integer so that
/// e.g. 7% of 100 keeps 7, not 8.
std::size_t cut_size(std::size_t n, double percentile);

// Scores ordered by (value, doc_id), most similar first.
std::vector<DivergenceScore> rank_scores(std::vector<DivergenceScore> scores);

/// The cut_size(N, percentile) doc ids with the smallest divergence, ties
/// broken by ascending doc_id, ordered by (value, doc_id).
std::vector<std::string> cut(const std::vector<DivergenceScore>& scores,
                             double percentile);

// Half-open percentile interval (low, high].
struct PercentileBand {
  double low = 0;
  double high = 100;

  std::string str() const;
  static PercentileBand parse(std::string_view text);  // "low-high"
  bool operator==(const PercentileBand&) const = default;
};

std::vector<PercentileBand> parse_bands(std::string_view text);  // "0-1,1-5"
std::vector<PercentileBand> default_bands();  // (0,1], (1,5], (5,25]
inline constexpr int kDefaultSamplesPerBand = 20;

struct Tranche {
  int tranche_id = 0;
  PercentileBand band;
  // Sampled ids in rank order; ranks are 1-based positions in rank_scores.
  std::vector<std::string> sampled_doc_ids;
  std::vector<std::size_t> ranks;
  std::uint64_t rng_seed = 0;

  std::size_t sample_size() const { return sampled_doc_ids.size(); }
};

/// Uniform sampling without replacement inside each band's rank range
/// (cut_size(N, low), cut_size(N, high)]. One xoshiro256** stream seeded with
/// rng_seed is consumed band by band in the given order.
std::vector<Tranche> sample_tranches(const std::vector<DivergenceScore>& scores,
                                     const std::vector<PercentileBand>& bands,
                                     int k_per_band, std::uint64_t rng_seed);

struct Label {
  std::string doc_id;
  bool relevant = false;
  std::string annotator;
  int round_id = 0;
  std::string timestamp;  // ISO 8601
};

// Orders ISO 8601 timestamps chronologically; offsets are normalized to UTC.
// Throws on malformed input.
long double timestamp_seconds(std::string_view iso8601);

// `doc_id<TAB>relevant(0|1)<TAB>annotator<TAB>timestamp` per line.
std::vector<Label> parse_labels(std::string_view text, int round_id);
std::string format_label(const Label& label);

struct LabelConflict {
  Label overwritten;
  Label effective;
};

struct RejectedLabel {
  Label label;
  std::string reason;
};

struct LabelReport {
  std::size_t accepted = 0;
  std::vector<LabelConflict> conflicts;
  std::vector<RejectedLabel> rejected;
};

/// Last write wins per doc_id by timestamp; equal timestamps resolve to the
/// label logged later. Result is sorted by doc_id.
std::vector<Label> effective_labels(const std::vector<Label>& log);

std::vector<LabelConflict> label_conflicts(const std::vector<Label>& log);

double hit_rate(const std::vector<Label>& effective);

enum class RoundStatus { kScored, kWinnowed, kSampled, kLabeled, kClosed };
const char* round_status_name(RoundStatus status);

// Surface-form counts for one seed text. Stored by surface so rounds do not
// depend on vocabulary ids.
struct SeedText {
  std::string seed_id;
  std::map<std::string, double> counts;
};

struct SeedSpec {
  enum class Kind { kExternal, kLabels };
  Kind kind = Kind::kExternal;
  // External: names of the seed texts. Labels: relevant doc ids.
  std::vector<std::string> ids;
  int source_round = 0;
};

/// One winnowing iteration. Parent round 0 is the whole ingested corpus.
struct Round {
  int round_id = 0;
  int parent_round = 0;
  SeedSpec seed;
  std::vector<SeedText> seed_texts;
  Metric metric = Metric::kKld;
  double smoothing_epsilon = 0.5;
  VocabularyMode vocabulary_mode = VocabularyMode::kUnionOfPair;
  std::string config_hash;
  std::size_t parent_size = 0;
  std::vector<DivergenceScore> scores;

  std::optional<double> cutoff_percentile;
  std::vector<std::string> derived_doc_ids;
  std::vector<Tranche> tranches;
  std::vector<Label> labels;  // every accepted label, in ingestion order
  bool closed = false;        // a later round exists

  RoundStatus status() const;
  // Pooled-seed scores (the ones cuts and tranches use).
  std::vector<DivergenceScore> pooled_scores() const;
  bool in_round(std::string_view doc_id) const;  // derived or sampled
  std::vector<Label> effective() const { return effective_labels(labels); }
};

/// Applies the cut to a scored round and marks it winnowed.
void winnow_round(Round& round, double percentile);

/// Validates and appends labels. Labels for documents outside the round's
/// derived or sampled set are rejected and listed; a closed round is an error.
LabelReport ingest_labels(Round& round, const std::vector<Label>& labels);

double hit_rate(const Round& round);

/// Relevant-labeled doc ids of the round; error when there are none.
SeedSpec assemble_next_seed(const Round& round);

/// Scores `documents` against the round's seeds, applies the cut and returns a
/// round with status winnowed. Seeds are pooled; when per_seed is set each
/// seed is also scored on its own under seed:<id>.
Round run_round(const Corpus& corpus,
                const std::vector<const Document*>& documents,
                Round round, double percentile, bool per_seed);

/// Scores only (status scored). run_round = score_round + winnow_round.
void score_round(const Corpus& corpus,
                 const std::vector<const Document*>& documents, Round& round,
                 bool per_seed);

// Seeds resolved against the corpus vocabulary; surfaces the corpus never saw
// get ids past the end of the vocabulary.
std::vector<ScoringSeed> resolve_seeds(const Round& round,
                                       const Vocabulary& vocabulary,
                                       bool per_seed);

SeedText seed_from_documents(const std::string& seed_id, const Corpus& corpus,
                             const std::vector<std::string>& doc_ids);

/// Append-only on-disk store: one `round-NNNN` directory per round holding
/// config.json, seed.tsv, scores.tsv, survivors.txt, winnow.json,
/// tranches.tsv, labels.tsv and conflicts.tsv.
class RoundStore {
 public:
  explicit RoundStore(std::filesystem::path dir);

  std::vector<int> ids() const;
  int latest() const;  // 0 when empty
  int next_id() const { return latest() + 1; }
  bool exists(int round_id) const;
  Round load(int round_id) const;

  // Writes a new round directory; fails if round_id already exists.
  void create(const Round& round);
  // Writers for the mutable tail of the newest round.
  void save_winnow(const Round& round);
  void save_tranches(const Round& round);
  void append_labels(const Round& round, const std::vector<Label>& added);

  std::filesystem::path round_dir(int round_id) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace winnower
