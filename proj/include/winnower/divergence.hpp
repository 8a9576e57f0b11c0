#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "winnower/distribution.hpp"

namespace winnower {

enum class Metric { kKld, kSymmetricKld, kJsd };

const char* metric_name(Metric m);  // "kld", "skld", "jsd"
Metric parse_metric(std::string_view name);

// Σ p(w)·ln(p(w)/q(w)) in nats; terms with p(w)=0 contribute nothing.
// Throws "unsmoothed input" when q is zero somewhere p is not.
double kld(const WordDistribution& p, const WordDistribution& q);

// kld(p, smooth(q)) + kld(q, smooth(p)).
double symmetric_kld(const WordDistribution& p, const WordDistribution& q,
                     const SmoothingConfig& config);

// Jensen-Shannon divergence against the midpoint mixture; within [0, ln 2].
double jsd(const WordDistribution& p, const WordDistribution& q);

// Divergence of document distribution `doc` from `seed` under `metric`. For
// kKld the document side is smoothed against the seed's support.
double divergence(Metric metric, const WordDistribution& seed,
                  const WordDistribution& doc, const SmoothingConfig& config);

struct SeedRef {
  bool pooled = true;
  std::string seed_id;

  static SeedRef pooled_ref() { return {true, {}}; }
  static SeedRef seed(std::string id) { return {false, std::move(id)}; }

  std::string str() const { return pooled ? "pooled" : "seed:" + seed_id; }
  static SeedRef parse(std::string_view text);
  bool operator==(const SeedRef&) const = default;
};

struct DivergenceScore {
  std::string doc_id;
  Metric metric = Metric::kKld;
  SeedRef seed_ref;
  double value = 0;
};

struct ScoringSeed {
  SeedRef ref;
  WordDistribution distribution;
};

struct ScoreBatch {
  std::vector<DivergenceScore> scores;
  std::vector<DocumentError> errors;
};

/// One score per (document, seed). Documents are scored in parallel; the
/// result is ordered by (doc_id, seed_ref) whatever the input order.
ScoreBatch score_corpus(const std::vector<ScoringSeed>& seeds,
                        const std::vector<const Document*>& documents,
                        Metric metric, const SmoothingConfig& config);

// `doc_id<TAB>metric<TAB>seed_ref<TAB>value` lines.
std::string export_scores(const std::vector<DivergenceScore>& scores);
std::vector<DivergenceScore> parse_scores(std::string_view text);

// Scores for one seed reference, in input order.
std::vector<DivergenceScore> select_seed(
    const std::vector<DivergenceScore>& scores, const SeedRef& ref);

}  // namespace winnower
