#include "winnower/topics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"
#include "winnower/error.hpp"
#include "winnower/io.hpp"
#include "winnower/rng.hpp"

namespace winnower {
using nlohmann::json;

std::size_t TopicCorpus::total_tokens() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.size();
  return n;
}

TopicCorpus make_topic_corpus(const Corpus& corpus,
                              const std::vector<std::string>& doc_ids) {
  std::set<WordId> used;
  for (const auto& id : doc_ids) {
    const auto& doc = corpus.at(id);
    used.insert(doc.tokens.begin(), doc.tokens.end());
  }
  std::map<WordId, std::uint32_t> local;
  TopicCorpus out;
  for (const WordId w : used) {
    local.emplace(w, static_cast<std::uint32_t>(out.surfaces.size()));
    out.surfaces.push_back(corpus.vocabulary().surface(w));
  }
  for (const auto& id : doc_ids) {
    const auto& doc = corpus.at(id);
    std::vector<std::uint32_t> tokens;
    tokens.reserve(doc.tokens.size());
    for (const WordId w : doc.tokens) tokens.push_back(local.at(w));
    out.doc_ids.push_back(id);
    out.docs.push_back(std::move(tokens));
  }
  return out;
}

TopicCorpus make_topic_corpus(
    const std::vector<std::pair<std::string, std::map<std::string, double>>>&
        texts) {
  std::set<std::string> used;
  for (const auto& [id, counts] : texts) {
    for (const auto& [s, c] : counts) used.insert(s);
  }
  TopicCorpus out;
  out.surfaces.assign(used.begin(), used.end());
  std::map<std::string, std::uint32_t> local;
  for (std::size_t i = 0; i < out.surfaces.size(); ++i) {
    local.emplace(out.surfaces[i], static_cast<std::uint32_t>(i));
  }
  for (const auto& [id, counts] : texts) {
    std::vector<std::uint32_t> tokens;
    for (const auto& [s, c] : counts) {
      const auto n = static_cast<long>(std::llround(c));
      tokens.insert(tokens.end(), static_cast<std::size_t>(std::max(0L, n)),
                    local.at(s));
    }
    out.doc_ids.push_back(id);
    out.docs.push_back(std::move(tokens));
  }
  return out;
}

void TopicModel::recount() {
  const std::size_t v = surfaces_.size();
  topic_word_.assign(static_cast<std::size_t>(num_topics_) * v, 0);
  doc_topic_.assign(docs_.size() * num_topics_, 0);
  topic_total_.assign(num_topics_, 0);
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const int k = assignments_[d][i];
      ++topic_word_[static_cast<std::size_t>(k) * v + docs_[d][i]];
      ++doc_topic_[d * num_topics_ + k];
      ++topic_total_[k];
    }
  }
}

TopicModel TopicModel::train(const TopicCorpus& corpus, const LdaConfig& config,
                             const SweepObserver& observer) {
  const std::size_t total = corpus.total_tokens();
  if (corpus.docs.empty() || total == 0) {
    fail(ErrorCode::kInvalidArgument, "empty corpus");
  }
  if (config.num_topics < 2) {
    fail(ErrorCode::kInvalidArgument, "need at least 2 topics");
  }
  if (config.num_topics > std::numeric_limits<std::uint16_t>::max()) {
    fail(ErrorCode::kInvalidArgument, "too many topics");
  }
  if (static_cast<std::size_t>(config.num_topics) > total) {
    fail(ErrorCode::kInvalidArgument,
         std::to_string(config.num_topics) + " topics exceed the " +
             std::to_string(total) + " tokens in the corpus");
  }
  if (config.iterations < 1) {
    fail(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  }
  if (!(config.alpha_value() > 0) || !(config.beta > 0)) {
    fail(ErrorCode::kInvalidArgument, "alpha and beta must be positive");
  }
  for (const auto& d : corpus.docs) {
    for (const auto w : d) {
      if (w >= corpus.surfaces.size()) {
        fail(ErrorCode::kInvalidArgument, "token outside topic vocabulary");
      }
    }
  }

  TopicModel m;
  m.num_topics_ = config.num_topics;
  m.alpha_ = config.alpha_value();
  m.beta_ = config.beta;
  m.rng_seed_ = config.rng_seed;
  m.surfaces_ = corpus.surfaces;
  m.doc_ids_ = corpus.doc_ids;
  m.docs_ = corpus.docs;

  const int K = m.num_topics_;
  const std::size_t V = m.surfaces_.size();
  Xoshiro256 rng(config.rng_seed);
  m.assignments_.resize(m.docs_.size());
  for (std::size_t d = 0; d < m.docs_.size(); ++d) {
    m.assignments_[d].resize(m.docs_[d].size());
    for (auto& z : m.assignments_[d]) {
      z = static_cast<std::uint16_t>(rng.below(static_cast<std::uint64_t>(K)));
    }
  }
  m.recount();

  const double vbeta = static_cast<double>(V) * m.beta_;
  std::vector<double> cumulative(K);
  for (int sweep = 1; sweep <= config.iterations; ++sweep) {
    for (std::size_t d = 0; d < m.docs_.size(); ++d) {
      long* doc_row = &m.doc_topic_[d * K];
      for (std::size_t i = 0; i < m.docs_[d].size(); ++i) {
        const std::uint32_t w = m.docs_[d][i];
        const int old = m.assignments_[d][i];
        --m.topic_word_[static_cast<std::size_t>(old) * V + w];
        --doc_row[old];
        --m.topic_total_[old];

        double acc = 0;
        for (int k = 0; k < K; ++k) {
          acc += (static_cast<double>(doc_row[k]) + m.alpha_) *
                 (static_cast<double>(m.topic_word_[static_cast<std::size_t>(k) * V + w]) +
                  m.beta_) /
                 (static_cast<double>(m.topic_total_[k]) + vbeta);
          cumulative[k] = acc;
        }
        const double u = rng.uniform() * acc;
        int chosen = static_cast<int>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) -
            cumulative.begin());
        if (chosen >= K) chosen = K - 1;

        m.assignments_[d][i] = static_cast<std::uint16_t>(chosen);
        ++m.topic_word_[static_cast<std::size_t>(chosen) * V + w];
        ++doc_row[chosen];
        ++m.topic_total_[chosen];
      }
    }
    m.iterations_run_ = sweep;
    if (observer) observer(sweep, m);
  }
  return m;
}

void TopicModel::verify_counts() const {
  const std::size_t V = surfaces_.size();
  long grand = 0;
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    long row = 0;
    for (int k = 0; k < num_topics_; ++k) row += doc_topic_count(d, k);
    if (row != static_cast<long>(docs_[d].size())) {
      fail(ErrorCode::kInternal,
           "document " + doc_ids_[d] + " topic counts do not sum to its length");
    }
    grand += row;
  }
  long assigned = 0;
  for (int k = 0; k < num_topics_; ++k) {
    long col = 0;
    for (std::size_t w = 0; w < V; ++w) col += topic_word_count(k, static_cast<std::uint32_t>(w));
    if (col != topic_total_[k]) {
      fail(ErrorCode::kInternal,
           "topic " + std::to_string(k) + " word counts do not sum to its total");
    }
    assigned += col;
  }
  if (assigned != grand) {
    fail(ErrorCode::kInternal, "topic totals do not match corpus token count");
  }
}

std::vector<double> TopicModel::prevalence() const {
  long total = 0;
  for (const long t : topic_total_) total += t;
  std::vector<double> out(num_topics_, 0.0);
  if (total == 0) return out;
  for (int k = 0; k < num_topics_; ++k) {
    out[k] = static_cast<double>(topic_total_[k]) / static_cast<double>(total);
  }
  return out;
}

std::vector<std::pair<std::string, double>> TopicModel::top_words(
    int k, std::size_t n) const {
  if (k < 0 || k >= num_topics_) {
    fail(ErrorCode::kInvalidArgument, "no topic " + std::to_string(k));
  }
  const double denom = static_cast<double>(topic_total_[k]) +
                       static_cast<double>(surfaces_.size()) * beta_;
  std::vector<std::pair<std::string, double>> words;
  words.reserve(surfaces_.size());
  for (std::size_t w = 0; w < surfaces_.size(); ++w) {
    words.emplace_back(
        surfaces_[w],
        (static_cast<double>(topic_word_count(k, static_cast<std::uint32_t>(w))) + beta_) /
            denom);
  }
  auto order = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  const std::size_t keep = std::min(n, words.size());
  std::partial_sort(words.begin(), words.begin() + static_cast<long>(keep),
                    words.end(), order);
  words.resize(keep);
  return words;
}

std::string TopicModel::to_json() const {
  json j = {{"format", "winnower-lda"},
            {"num_topics", num_topics_},
            {"alpha", alpha_},
            {"beta", beta_},
            {"iterations_run", iterations_run_},
            {"rng_seed", rng_seed_},
            {"surfaces", surfaces_},
            {"doc_ids", doc_ids_},
            {"docs", docs_},
            {"assignments", assignments_}};
  return j.dump() + "\n";
}

TopicModel TopicModel::from_json(const std::string& text) {
  TopicModel m;
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "winnower-lda") {
      fail(ErrorCode::kParse, "not a topic model file");
    }
    m.num_topics_ = j.at("num_topics").get<int>();
    m.alpha_ = j.at("alpha").get<double>();
    m.beta_ = j.at("beta").get<double>();
    m.iterations_run_ = j.at("iterations_run").get<int>();
    m.rng_seed_ = j.at("rng_seed").get<std::uint64_t>();
    m.surfaces_ = j.at("surfaces").get<std::vector<std::string>>();
    m.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();
    m.docs_ = j.at("docs").get<std::vector<std::vector<std::uint32_t>>>();
    m.assignments_ = j.at("assignments").get<std::vector<std::vector<std::uint16_t>>>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("corrupt topic model: ") + e.what());
  }
  if (m.assignments_.size() != m.docs_.size()) {
    fail(ErrorCode::kParse, "corrupt topic model: assignment shape");
  }
  for (std::size_t d = 0; d < m.docs_.size(); ++d) {
    if (m.assignments_[d].size() != m.docs_[d].size()) {
      fail(ErrorCode::kParse, "corrupt topic model: assignment shape");
    }
    for (std::size_t i = 0; i < m.docs_[d].size(); ++i) {
      if (m.assignments_[d][i] >= m.num_topics_ ||
          m.docs_[d][i] >= m.surfaces_.size()) {
        fail(ErrorCode::kParse, "corrupt topic model: id out of range");
      }
    }
  }
  m.recount();
  return m;
}

std::vector<TopicSummary> topic_prevalence_summaries(const TopicModel& model,
                                                     std::size_t n) {
  return assign_names(model, {}, n);
}

std::vector<TopicSummary> assign_names(const TopicModel& model,
                                       const std::map<int, std::string>& names,
                                       std::size_t n) {
  std::string unknown;
  for (const auto& [id, name] : names) {
    if (id < 0 || id >= model.num_topics()) {
      unknown += (unknown.empty() ? "" : ", ") + std::to_string(id);
    }
  }
  if (!unknown.empty()) {
    fail(ErrorCode::kInvalidArgument, "unknown topic ids: " + unknown);
  }
  const auto prevalence = model.prevalence();
  std::vector<TopicSummary> out;
  for (int k = 0; k < model.num_topics(); ++k) {
    TopicSummary s;
    s.topic_id = k;
    if (auto it = names.find(k); it != names.end()) s.scholar_name = it->second;
    s.prevalence = prevalence[k];
    s.top_words = model.top_words(k, n);
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_topic_report(const std::vector<TopicSummary>& summaries) {
  std::vector<const TopicSummary*> order;
  for (const auto& s : summaries) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    if (a->prevalence != b->prevalence) return a->prevalence > b->prevalence;
    return a->topic_id < b->topic_id;
  });
  std::string out;
  for (const auto* s : order) {
    out += std::to_string(s->topic_id) + "\t" + s->display_name() + "\t" +
           format_double(s->prevalence) + "\n";
    for (const auto& [word, p] : s->top_words) {
      out += word + "\t" + format_double(p) + "\n";
    }
  }
  return out;
}

std::map<int, std::string> parse_topic_names(std::string_view text) {
  std::map<int, std::string> names;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(ErrorCode::kParse, "topic name line needs topic_id<TAB>name: " + line);
    }
    names[static_cast<int>(parse_int(line.substr(0, tab)))] = line.substr(tab + 1);
  }
  return names;
}

std::string format_topic_names(const std::map<int, std::string>& names) {
  std::string out;
  for (const auto& [id, name] : names) out += std::to_string(id) + "\t" + name + "\n";
  return out;
}

}  // namespace winnower
