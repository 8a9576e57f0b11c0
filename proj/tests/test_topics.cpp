#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "winnower/error.hpp"
#include "winnower/io.hpp"
#include "winnower/text.hpp"
#include "winnower/topics.hpp"

using namespace winnower;

namespace {

LdaConfig two_topics(int iterations = 200, std::uint64_t seed = 0) {
  LdaConfig c;
  c.num_topics = 2;
  c.iterations = iterations;
  c.rng_seed = seed;
  return c;
}

// Fraction of each document's tokens in its most used topic, minimised over docs.
double worst_purity(const TopicModel& m) {
  double worst = 1;
  for (std::size_t d = 0; d < m.num_documents(); ++d) {
    long total = 0, best = 0;
    for (int k = 0; k < m.num_topics(); ++k) {
      total += m.doc_topic_count(d, k);
      best = std::max(best, m.doc_topic_count(d, k));
    }
    worst = std::min(worst, static_cast<double>(best) / total);
  }
  return worst;
}

std::set<std::string> top_set(const TopicModel& m, int k, std::size_t n) {
  std::set<std::string> out;
  for (const auto& [w, p] : m.top_words(k, n)) out.insert(w);
  return out;
}

}  // namespace

TEST(Lda, PlantedTopicsRecovered) {
  const auto planted = fixtures::planted_topics();
  const auto corpus = make_topic_corpus(planted.docs);
  const auto m = TopicModel::train(corpus, two_topics());
  EXPECT_GE(worst_purity(m), 0.95);
  const std::set<std::string> a(planted.vocab_a.begin(), planted.vocab_a.end());
  const std::set<std::string> b(planted.vocab_b.begin(), planted.vocab_b.end());
  const auto t0 = top_set(m, 0, 10), t1 = top_set(m, 1, 10);
  EXPECT_TRUE((t0 == a && t1 == b) || (t0 == b && t1 == a));
}

TEST(Lda, CountsConservedEverySweep) {
  const auto planted = fixtures::planted_topics(60, 0.5, 30);
  const auto corpus = make_topic_corpus(planted.docs);
  int sweeps = 0;
  const auto m = TopicModel::train(corpus, two_topics(50), [&](int, const TopicModel& model) {
    ++sweeps;
    EXPECT_NO_THROW(model.verify_counts());
    long total = 0;
    for (int k = 0; k < model.num_topics(); ++k) total += model.topic_total(k);
    EXPECT_EQ(static_cast<std::size_t>(total), corpus.total_tokens());
  });
  EXPECT_EQ(sweeps, 50);
  EXPECT_EQ(m.iterations_run(), 50);
}

TEST(Lda, SingleDocumentStillConsistent) {
  const auto corpus = make_topic_corpus({{"only", {{"rent", 3}, {"land", 2}}}});
  const auto m = TopicModel::train(corpus, two_topics(20));
  EXPECT_NO_THROW(m.verify_counts());
  long n = m.doc_topic_count(0, 0) + m.doc_topic_count(0, 1);
  EXPECT_EQ(n, 5);
}

TEST(Lda, SameSeedSameAssignments) {
  const auto planted = fixtures::planted_topics(80, 0.5, 20);
  const auto corpus = make_topic_corpus(planted.docs);
  const auto a = TopicModel::train(corpus, two_topics(30, 9));
  const auto b = TopicModel::train(corpus, two_topics(30, 9));
  EXPECT_EQ(a.assignments(), b.assignments());
  EXPECT_EQ(format_topic_report(topic_prevalence_summaries(a)),
            format_topic_report(topic_prevalence_summaries(b)));
  const auto c = TopicModel::train(corpus, two_topics(30, 10));
  EXPECT_NE(a.assignments(), c.assignments());
}

TEST(Lda, PrevalenceFollowsDocumentSplit) {
  const auto planted = fixtures::planted_topics(200, 0.6);
  const auto m = TopicModel::train(make_topic_corpus(planted.docs), two_topics());
  auto prev = m.prevalence();
  std::sort(prev.begin(), prev.end(), std::greater<>());
  EXPECT_NEAR(prev[0], 0.6, 0.05);
  EXPECT_NEAR(prev[1], 0.4, 0.05);
  EXPECT_NEAR(prev[0] + prev[1], 1.0, 1e-12);
}

TEST(Lda, PrevalenceAllInOneTopic) {
  // A one-word vocabulary with a tiny alpha collapses onto a single topic.
  const auto corpus = make_topic_corpus({{"d", {{"rent", 40}}}});
  LdaConfig c = two_topics(200);
  c.alpha = 1e-6;
  const auto m = TopicModel::train(corpus, c);
  auto prev = m.prevalence();
  std::sort(prev.begin(), prev.end(), std::greater<>());
  EXPECT_EQ(prev[0], 1.0);
  EXPECT_EQ(prev[1], 0.0);
}

TEST(Lda, Preconditions) {
  const auto corpus = make_topic_corpus({{"d", {{"rent", 3}}}});
  LdaConfig c = two_topics(10);
  c.num_topics = 1;
  EXPECT_THROW(TopicModel::train(corpus, c), Error);
  c = two_topics(10);
  c.num_topics = 4;  // more topics than tokens
  EXPECT_THROW(TopicModel::train(corpus, c), Error);
  c = two_topics(0);
  EXPECT_THROW(TopicModel::train(corpus, c), Error);
  c = two_topics(10);
  c.beta = 0;
  EXPECT_THROW(TopicModel::train(corpus, c), Error);
  EXPECT_THROW(TopicModel::train(TopicCorpus{}, two_topics()), Error);
}

TEST(Lda, DefaultHyperparameters) {
  LdaConfig c;
  EXPECT_EQ(c.num_topics, 100);
  EXPECT_DOUBLE_EQ(c.alpha_value(), 0.5);
  EXPECT_DOUBLE_EQ(c.beta, 0.01);
  EXPECT_EQ(c.iterations, 1000);
  EXPECT_EQ(c.rng_seed, 0u);
}

TEST(TopWords, OrderedAndClamped) {
  const auto planted = fixtures::planted_topics(40, 0.5, 20);
  const auto m = TopicModel::train(make_topic_corpus(planted.docs), two_topics(50));
  for (int k = 0; k < 2; ++k) {
    const auto words = m.top_words(k, 20);
    EXPECT_EQ(words.size(), 20u);
    for (std::size_t i = 1; i < words.size(); ++i) {
      EXPECT_TRUE(words[i - 1].second > words[i].second ||
                  (words[i - 1].second == words[i].second && words[i - 1].first < words[i].first));
    }
    EXPECT_EQ(m.top_words(k, 500).size(), m.vocabulary_size());
  }
  EXPECT_THROW(m.top_words(2), Error);
  EXPECT_THROW(m.top_words(-1), Error);
}

TEST(TopWords, SmoothedEstimate) {
  const auto planted = fixtures::planted_topics(20, 0.5, 10);
  const auto m = TopicModel::train(make_topic_corpus(planted.docs), two_topics(20));
  const double v = static_cast<double>(m.vocabulary_size());
  for (const auto& [w, p] : m.top_words(0, 5)) {
    const auto idx = std::find(m.surfaces().begin(), m.surfaces().end(), w) - m.surfaces().begin();
    const double expected = (m.topic_word_count(0, static_cast<std::uint32_t>(idx)) + m.beta()) /
                            (m.topic_total(0) + v * m.beta());
    EXPECT_DOUBLE_EQ(p, expected);
  }
}

TEST(Model, JsonRoundTrip) {
  const auto planted = fixtures::planted_topics(30, 0.5, 15);
  const auto m = TopicModel::train(make_topic_corpus(planted.docs), two_topics(25, 4));
  const auto back = TopicModel::from_json(m.to_json());
  EXPECT_EQ(back.assignments(), m.assignments());
  EXPECT_EQ(back.prevalence(), m.prevalence());
  EXPECT_EQ(back.to_json(), m.to_json());
  EXPECT_NO_THROW(back.verify_counts());
  EXPECT_THROW(TopicModel::from_json("{}"), Error);
}

TEST(Report, ShapeAndNames) {
  const auto planted = fixtures::planted_topics(60, 0.6, 20);
  const auto m = TopicModel::train(make_topic_corpus(planted.docs), two_topics(50));
  const auto named = assign_names(m, {{0, "Land question"}}, 5);
  const std::string report = format_topic_report(named);
  const auto lines = split(report, '\n');
  // two blocks of one header + five words, trailing newline
  EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 12);
  const auto header = split(lines[0], '\t');
  ASSERT_EQ(header.size(), 3u);
  EXPECT_GE(parse_double(header[2]), parse_double(split(lines[6], '\t')[2]));
  EXPECT_NE(report.find("Land question"), std::string::npos);
  EXPECT_NE(report.find("topic-1"), std::string::npos);
  EXPECT_THROW(assign_names(m, {{5, "x"}, {7, "y"}}), Error);
  // naming changes no numbers
  const auto unnamed = topic_prevalence_summaries(m, 5);
  for (const auto& s : named) {
    const auto it = std::find_if(unnamed.begin(), unnamed.end(),
                                 [&](const auto& u) { return u.topic_id == s.topic_id; });
    EXPECT_EQ(it->prevalence, s.prevalence);
    EXPECT_EQ(it->top_words, s.top_words);
  }
}

TEST(Report, NamesTsvRoundTrip) {
  const std::map<int, std::string> names = {{0, "Land"}, {12, "Navy estimates"}};
  EXPECT_EQ(parse_topic_names(format_topic_names(names)), names);
  EXPECT_THROW(parse_topic_names("x\tLand\n"), Error);
}

TEST(TopicCorpus, FromIngestedCorpus) {
  const Corpus c = ingest_records({fixtures::record("a", "rent land rent"),
                                   fixtures::record("b", "navy fleet"),
                                   fixtures::record("c", "rent navy")},
                                  NormalizationConfig{});
  const auto tc = make_topic_corpus(c, {"c", "a"});
  EXPECT_EQ(tc.total_tokens(), 5u);
  EXPECT_EQ(tc.surfaces, (std::vector<std::string>{"land", "navy", "rent"}));
  EXPECT_THROW(make_topic_corpus(c, {"zzz"}), Error);
}
