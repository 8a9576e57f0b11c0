#include "winnower/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "winnower/error.hpp"
#include "winnower/io.hpp"

namespace winnower {
namespace {

constexpr double kSumTolerance = 1e-9;

// Sorts by word id, merges duplicates and drops zeros.
SparseCounts canonical(SparseCounts counts) {
  std::sort(counts.begin(), counts.end());
  SparseCounts out;
  out.reserve(counts.size());
  for (const auto& [w, c] : counts) {
    if (c < 0 || !std::isfinite(c)) {
      fail(ErrorCode::kInvalidArgument,
           "count for word " + std::to_string(w) + " is negative or not finite");
    }
    if (!out.empty() && out.back().first == w) {
      out.back().second += c;
    } else {
      out.emplace_back(w, c);
    }
  }
  std::erase_if(out, [](const auto& e) { return e.second == 0; });
  return out;
}

void check_sum(const std::vector<WordDistribution::Entry>& entries) {
  double sum = 0;
  for (const auto& e : entries) sum += e.second;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    fail(ErrorCode::kInternal,
         "distribution sums to " + format_double(sum) + ", not 1");
  }
}

}  // namespace

SparseCounts count_tokens(std::span<const WordId> tokens) {
  std::vector<WordId> sorted(tokens.begin(), tokens.end());
  std::sort(sorted.begin(), sorted.end());
  SparseCounts counts;
  for (const WordId w : sorted) {
    if (!counts.empty() && counts.back().first == w) {
      counts.back().second += 1;
    } else {
      counts.emplace_back(w, 1.0);
    }
  }
  return counts;
}

void accumulate_counts(SparseCounts& into, const SparseCounts& more) {
  into.insert(into.end(), more.begin(), more.end());
  into = canonical(std::move(into));
}

WordDistribution WordDistribution::from_probabilities(
    std::vector<Entry> entries, DistributionSource source, double mass) {
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].second > 0) || !std::isfinite(entries[i].second)) {
      fail(ErrorCode::kInvalidArgument,
           "probabilities must be strictly positive and finite");
    }
    if (i > 0 && entries[i].first == entries[i - 1].first) {
      fail(ErrorCode::kInvalidArgument,
           "duplicate word id " + std::to_string(entries[i].first));
    }
  }
  if (entries.empty()) fail(ErrorCode::kInvalidArgument, "empty distribution");
  double sum = 0;
  for (const auto& e : entries) sum += e.second;
  if (std::abs(sum - 1.0) > kSumTolerance) {
    fail(ErrorCode::kInvalidArgument,
         "probabilities sum to " + format_double(sum) + ", not 1");
  }
  if (!(mass > 0)) fail(ErrorCode::kInvalidArgument, "mass must be positive");
  WordDistribution d;
  d.entries_ = std::move(entries);
  d.mass_ = mass;
  d.source_ = std::move(source);
  return d;
}

double WordDistribution::probability(WordId w) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), w,
      [](const Entry& e, WordId id) { return e.first < id; });
  return it != entries_.end() && it->first == w ? it->second : 0.0;
}

bool WordDistribution::contains(WordId w) const { return probability(w) > 0; }

std::vector<WordId> WordDistribution::support() const {
  std::vector<WordId> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) ids.push_back(e.first);
  return ids;
}

const char* vocabulary_mode_name(VocabularyMode mode) {
  return mode == VocabularyMode::kCorpusWide ? "corpus_wide" : "union_of_pair";
}

VocabularyMode parse_vocabulary_mode(std::string_view name) {
  if (name == "union_of_pair") return VocabularyMode::kUnionOfPair;
  if (name == "corpus_wide") return VocabularyMode::kCorpusWide;
  fail(ErrorCode::kInvalidArgument,
       "unknown vocabulary mode '" + std::string(name) + "'");
}

WordDistribution build_distribution(const SparseCounts& counts,
                                    DistributionSource source) {
  const SparseCounts merged = canonical(counts);
  double total = 0;
  for (const auto& e : merged) total += e.second;
  if (merged.empty() || !(total > 0)) {
    fail(ErrorCode::kInvalidArgument, "empty document");
  }
  std::vector<WordDistribution::Entry> entries;
  entries.reserve(merged.size());
  for (const auto& [w, c] : merged) entries.emplace_back(w, c / total);
  check_sum(entries);
  return WordDistribution::from_probabilities(std::move(entries),
                                              std::move(source), total);
}

WordDistribution smooth(const WordDistribution& q,
                        std::span<const WordId> reference_support,
                        const SmoothingConfig& config) {
  if (!(config.epsilon > 0)) {
    fail(ErrorCode::kInvalidArgument, "smoothing epsilon must be positive");
  }
  if (reference_support.empty()) {
    fail(ErrorCode::kInvalidArgument, "empty reference support");
  }

  std::vector<WordId> vocab = q.support();
  vocab.insert(vocab.end(), reference_support.begin(), reference_support.end());
  if (config.vocabulary_mode == VocabularyMode::kCorpusWide) {
    for (std::size_t w = 0; w < config.vocabulary_size; ++w) {
      vocab.push_back(static_cast<WordId>(w));
    }
  }
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  if (vocab.size() == q.support_size()) return q;

  const double mass = q.mass();
  const double denom = mass + config.epsilon * static_cast<double>(vocab.size());
  std::vector<WordDistribution::Entry> entries;
  entries.reserve(vocab.size());
  const auto& qe = q.entries();
  std::size_t i = 0;
  for (const WordId w : vocab) {
    double raw = 0;
    if (i < qe.size() && qe[i].first == w) raw = qe[i++].second;
    entries.emplace_back(w, (mass * raw + config.epsilon) / denom);
  }
  check_sum(entries);
  return WordDistribution::from_probabilities(std::move(entries), q.source(),
                                              denom);
}

WordDistribution pool_seeds(const std::vector<SparseCounts>& seeds) {
  if (seeds.empty()) fail(ErrorCode::kInvalidArgument, "no seeds to pool");
  SparseCounts total;
  for (const auto& s : seeds) {
    if (canonical(s).empty()) {
      fail(ErrorCode::kInvalidArgument, "empty seed");
    }
    total.insert(total.end(), s.begin(), s.end());
  }
  return build_distribution(total, DistributionSource::pooled());
}

std::string export_distribution(const WordDistribution& dist,
                                const Vocabulary& vocabulary) {
  std::vector<std::pair<std::string, double>> rows;
  rows.reserve(dist.support_size());
  for (const auto& [w, p] : dist.entries()) {
    rows.emplace_back(w < vocabulary.size() ? vocabulary.surface(w)
                                            : "#" + std::to_string(w),
                      p);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::string out;
  for (const auto& [s, p] : rows) out += s + "\t" + format_double(p) + "\n";
  return out;
}

}  // namespace winnower
