#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "winnower/corpus.hpp"

namespace winnower {

// Sparse word counts. Need not be sorted or merged; zero entries are ignored.
using SparseCounts = std::vector<std::pair<WordId, double>>;

SparseCounts count_tokens(std::span<const WordId> tokens);

// Adds `more` into `into`, keeping `into` sorted by word id.
void accumulate_counts(SparseCounts& into, const SparseCounts& more);

struct DistributionSource {
  enum class Kind { kSeed, kPooledSeed, kDocument, kOther };
  Kind kind = Kind::kOther;
  std::string id;

  static DistributionSource seed(std::string id) { return {Kind::kSeed, std::move(id)}; }
  static DistributionSource pooled() { return {Kind::kPooledSeed, {}}; }
  static DistributionSource document(std::string id) { return {Kind::kDocument, std::move(id)}; }
};

/// Probability distribution over word ids with strictly positive entries,
/// stored sorted by word id. `mass` is the token total the probabilities were
/// estimated from; it scales pseudo-counts during smoothing and is 1 for
/// distributions given directly as probabilities.
class WordDistribution {
 public:
  using Entry = std::pair<WordId, double>;

  WordDistribution() = default;

  // Validates positivity and unit sum (1e-9). Entries need not be sorted.
  static WordDistribution from_probabilities(std::vector<Entry> entries,
                                             DistributionSource source = {},
                                             double mass = 1.0);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  double mass() const { return mass_; }
  const DistributionSource& source() const { return source_; }

  // 0 for words outside the support.
  double probability(WordId w) const;
  bool contains(WordId w) const;
  std::vector<WordId> support() const;

 private:
  std::vector<Entry> entries_;
  double mass_ = 1.0;
  DistributionSource source_;
};

enum class VocabularyMode { kUnionOfPair, kCorpusWide };

struct SmoothingConfig {
  double epsilon = 0.5;
  VocabularyMode vocabulary_mode = VocabularyMode::kUnionOfPair;
  // Size of the corpus vocabulary; consulted only in kCorpusWide mode.
  std::size_t vocabulary_size = 0;
};

const char* vocabulary_mode_name(VocabularyMode mode);
VocabularyMode parse_vocabulary_mode(std::string_view name);

/// count(w) / total. Throws "empty document" when every count is zero.
WordDistribution build_distribution(const SparseCounts& counts,
                                    DistributionSource source = {});

/// Additive smoothing of `q` so it is positive on every word of
/// `reference_support`. Over V = support(q) ∪ reference_support (plus every
/// corpus word in kCorpusWide mode):
///
///   q'(w) = (mass·q(w) + ε) / (mass + ε·|V|)
///
/// When q already covers V nothing is missing and q is returned unchanged.
WordDistribution smooth(const WordDistribution& q,
                        std::span<const WordId> reference_support,
                        const SmoothingConfig& config);

/// Sums the seeds' counts and normalizes, so longer seeds weigh more.
WordDistribution pool_seeds(const std::vector<SparseCounts>& seeds);

/// `surface<TAB>probability` lines, descending probability, ties by surface.
std::string export_distribution(const WordDistribution& dist,
                                const Vocabulary& vocabulary);

}  // namespace winnower
