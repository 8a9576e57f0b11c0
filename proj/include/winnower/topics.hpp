#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "winnower/corpus.hpp"

namespace winnower {

struct LdaConfig {
  int num_topics = 100;
  // Defaults to 50 / num_topics when unset.
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t rng_seed = 0;

  double alpha_value() const { return alpha.value_or(50.0 / num_topics); }
};

/// Documents to model, over a compact local vocabulary.
struct TopicCorpus {
  std::vector<std::string> surfaces;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::uint32_t>> docs;

  std::size_t total_tokens() const;
};

// Remaps the selected documents onto the words they actually use.
TopicCorpus make_topic_corpus(const Corpus& corpus,
                              const std::vector<std::string>& doc_ids);

// Bag-of-words documents given as surface counts (e.g. external seed texts).
TopicCorpus make_topic_corpus(
    const std::vector<std::pair<std::string, std::map<std::string, double>>>&
        texts);

class TopicModel;
using SweepObserver = std::function<void(int sweep, const TopicModel&)>;

/// LDA fitted by collapsed Gibbs sampling. Counts reflect the hard
/// assignments of the final sweep.
class TopicModel {
 public:
  static TopicModel train(const TopicCorpus& corpus, const LdaConfig& config,
                          const SweepObserver& observer = {});

  int num_topics() const { return num_topics_; }
  std::size_t vocabulary_size() const { return surfaces_.size(); }
  std::size_t num_documents() const { return doc_ids_.size(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int iterations_run() const { return iterations_run_; }
  std::uint64_t rng_seed() const { return rng_seed_; }
  const std::vector<std::string>& surfaces() const { return surfaces_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  long topic_word_count(int k, std::uint32_t w) const {
    return topic_word_[static_cast<std::size_t>(k) * surfaces_.size() + w];
  }
  long topic_total(int k) const { return topic_total_[k]; }
  long doc_topic_count(std::size_t d, int k) const {
    return doc_topic_[d * num_topics_ + k];
  }
  const std::vector<std::vector<std::uint16_t>>& assignments() const {
    return assignments_;
  }

  /// Both marginal conservation laws; throws kInternal on violation.
  void verify_counts() const;

  // Fraction of all tokens assigned to each topic.
  std::vector<double> prevalence() const;

  /// Words ranked by (n_kw + β) / (n_k + |V|β), descending, ties by surface.
  std::vector<std::pair<std::string, double>> top_words(int k,
                                                        std::size_t n = 20) const;

  std::string to_json() const;
  static TopicModel from_json(const std::string& text);

 private:
  void recount();

  int num_topics_ = 0;
  double alpha_ = 0;
  double beta_ = 0;
  int iterations_run_ = 0;
  std::uint64_t rng_seed_ = 0;
  std::vector<std::string> surfaces_;
  std::vector<std::string> doc_ids_;
  std::vector<std::vector<std::uint32_t>> docs_;
  std::vector<std::vector<std::uint16_t>> assignments_;
  std::vector<long> topic_word_;
  std::vector<long> doc_topic_;
  std::vector<long> topic_total_;
};

struct TopicSummary {
  int topic_id = 0;
  std::optional<std::string> scholar_name;
  double prevalence = 0;
  std::vector<std::pair<std::string, double>> top_words;

  std::string display_name() const {
    return scholar_name ? *scholar_name : "topic-" + std::to_string(topic_id);
  }
};

std::vector<TopicSummary> topic_prevalence_summaries(const TopicModel& model,
                                                     std::size_t n = 20);

/// Attaches names to summaries; names never influence counts or ranking.
/// Unknown topic ids are rejected together in one error.
std::vector<TopicSummary> assign_names(const TopicModel& model,
                                       const std::map<int, std::string>& names,
                                       std::size_t n = 20);

/// One block per topic, most prevalent first: `topic_id<TAB>name<TAB>prevalence`
/// then one `surface<TAB>probability` line per top word.
std::string format_topic_report(const std::vector<TopicSummary>& summaries);

// `topic_id<TAB>name` lines.
std::map<int, std::string> parse_topic_names(std::string_view text);
std::string format_topic_names(const std::map<int, std::string>& names);

}  // namespace winnower
