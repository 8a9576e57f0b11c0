#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "winnower/divergence.hpp"
#include "winnower/error.hpp"
#include "winnower/io.hpp"
#include "winnower/text.hpp"

using namespace winnower;

namespace {

WordDistribution dist(std::vector<WordDistribution::Entry> e) {
  return WordDistribution::from_probabilities(std::move(e));
}

double total(const WordDistribution& d) {
  double s = 0;
  for (const auto& [w, p] : d.entries()) s += p;
  return s;
}

constexpr WordId a = 0, b = 1, c = 2;

}  // namespace

TEST(Distribution, FromCounts) {
  const auto d = build_distribution({{a, 2}, {b, 1}});
  EXPECT_NEAR(d.probability(a), 2.0 / 3, 1e-15);
  EXPECT_NEAR(d.probability(b), 1.0 / 3, 1e-15);
  EXPECT_EQ(d.mass(), 3.0);
  EXPECT_EQ(build_distribution({{a, 5}}).probability(a), 1.0);
}

TEST(Distribution, UnsortedDuplicateAndZeroCounts) {
  const auto d = build_distribution({{c, 1}, {a, 1}, {c, 2}, {b, 0}});
  EXPECT_EQ(d.support_size(), 2u);
  EXPECT_NEAR(d.probability(c), 0.75, 1e-15);
  EXPECT_FALSE(d.contains(b));
}

TEST(Distribution, EmptyDocumentRejected) {
  EXPECT_THROW(build_distribution({}), Error);
  EXPECT_THROW(build_distribution({{a, 0}}), Error);
}

TEST(Distribution, ProbabilityValidation) {
  EXPECT_THROW(dist({{a, 0.5}, {b, 0.4}}), Error);
  EXPECT_THROW(dist({{a, 1.0}, {b, 0.0}}), Error);
  EXPECT_THROW(dist({{a, 1.5}, {b, -0.5}}), Error);
}

TEST(Distribution, SeedHeadOrderFollowsCounts) {
  const Vocabulary vocab({"land", "rent", "tenants", "the"});
  const auto d = build_distribution({{0, 6103}, {1, 6686}, {2, 5748}, {3, 100}});
  const std::string tsv = export_distribution(d, vocab);
  EXPECT_EQ(tsv.substr(0, tsv.find('\t')), "rent");
  const auto lines = split(tsv, '\n');
  EXPECT_EQ(lines[1].substr(0, 4), "land");
  EXPECT_EQ(lines[2].substr(0, 7), "tenants");
}

TEST(Smooth, SpecExamples) {
  SmoothingConfig cfg;
  const auto q = dist({{a, 1.0}});
  const WordId only_a[] = {a};
  EXPECT_EQ(smooth(q, only_a, cfg).probability(a), 1.0);
  const WordId ab[] = {a, b};
  const auto s = smooth(q, ab, cfg);
  EXPECT_NEAR(s.probability(a), 0.75, 1e-15);
  EXPECT_NEAR(s.probability(b), 0.25, 1e-15);
}

TEST(Smooth, SmallEpsilonApproachesIdentity) {
  Xoshiro256 rng(11);
  SmoothingConfig cfg;
  cfg.epsilon = 1e-6;
  for (int trial = 0; trial < 200; ++trial) {
    const auto qd = oracle::random_dense(8, rng);
    const auto q = oracle::to_distribution(qd);
    auto ref = q.support();
    ref.resize(1 + rng.below(ref.size()));
    const auto s = smooth(q, ref, cfg);
    double tv = 0;
    for (WordId w = 0; w < 8; ++w) tv += std::abs(s.probability(w) - q.probability(w));
    EXPECT_LT(0.5 * tv, 1e-4);
  }
}

TEST(Smooth, MassScalesPseudoCounts) {
  // 4 tokens of a: q' = (4·1 + 0.5)/(4 + 1) on a, 0.5/5 on b.
  const auto q = build_distribution({{a, 4}});
  const WordId ab[] = {a, b};
  const auto s = smooth(q, ab, SmoothingConfig{});
  EXPECT_NEAR(s.probability(a), 0.9, 1e-15);
  EXPECT_NEAR(s.probability(b), 0.1, 1e-15);
}

TEST(Smooth, CorpusWideVocabulary) {
  SmoothingConfig cfg;
  cfg.vocabulary_mode = VocabularyMode::kCorpusWide;
  cfg.vocabulary_size = 4;
  const auto q = dist({{a, 1.0}});
  const WordId ab[] = {a, b};
  const auto s = smooth(q, ab, cfg);
  EXPECT_NEAR(s.probability(a), 1.5 / 3.0, 1e-15);
  EXPECT_NEAR(s.probability(3), 0.5 / 3.0, 1e-15);
  EXPECT_NEAR(total(s), 1.0, 1e-12);
}

TEST(Smooth, AlwaysSumsToOne) {
  Xoshiro256 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const auto q = oracle::to_distribution(oracle::random_dense(10, rng));
    const auto p = oracle::to_distribution(oracle::random_dense(10, rng));
    const auto ref = p.support();
    SmoothingConfig cfg;
    cfg.epsilon = 0.01 + rng.uniform();
    const auto s = smooth(q, ref, cfg);
    EXPECT_NEAR(total(s), 1.0, 1e-9);
    for (WordId w : ref) EXPECT_GT(s.probability(w), 0.0);
  }
}

TEST(Pool, Examples) {
  const SparseCounts s1 = {{a, 1}};
  const SparseCounts s2 = {{b, 3}};
  const auto pooled = pool_seeds({s1, s2});
  EXPECT_NEAR(pooled.probability(a), 0.25, 1e-15);
  EXPECT_NEAR(pooled.probability(b), 0.75, 1e-15);

  const SparseCounts s = {{a, 2}, {c, 5}};
  const auto one = pool_seeds({s});
  const auto direct = build_distribution(s);
  const auto twice = pool_seeds({s, s});
  for (WordId w : {a, b, c}) {
    EXPECT_DOUBLE_EQ(one.probability(w), direct.probability(w));
    EXPECT_DOUBLE_EQ(twice.probability(w), direct.probability(w));
  }
  EXPECT_THROW(pool_seeds({}), Error);
  EXPECT_THROW(pool_seeds({SparseCounts{}}), Error);
}

TEST(Kld, Examples) {
  const auto p = dist({{a, 0.8}, {b, 0.2}});
  const auto q = dist({{a, 0.5}, {b, 0.5}});
  EXPECT_NEAR(kld(p, q), 0.19274, 1e-4);
  EXPECT_NEAR(kld(q, p), 0.22314, 1e-4);
  EXPECT_NEAR(kld(dist({{a, 1.0}}), q), std::log(2.0), 1e-12);
  EXPECT_EQ(kld(p, p), 0.0);
}

TEST(Kld, UnsmoothedInputRejected) {
  EXPECT_THROW(kld(dist({{a, 0.5}, {b, 0.5}}), dist({{a, 1.0}})), Error);
}

TEST(SymmetricKld, Examples) {
  const auto p = dist({{a, 0.8}, {b, 0.2}});
  const auto q = dist({{a, 0.5}, {b, 0.5}});
  SmoothingConfig cfg;
  EXPECT_NEAR(symmetric_kld(p, q, cfg), 0.41589, 1e-4);
  EXPECT_NEAR(symmetric_kld(p, p, cfg), 0.0, 1e-12);
}

TEST(Jsd, Examples) {
  EXPECT_NEAR(jsd(dist({{a, 1.0}}), dist({{b, 1.0}})), std::log(2.0), 1e-12);
  const auto p = dist({{a, 0.3}, {c, 0.7}});
  EXPECT_NEAR(jsd(p, p), 0.0, 1e-15);
}

TEST(Oracle, RandomPairsMatchBruteForce) {
  Xoshiro256 rng(2024);
  SmoothingConfig cfg;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t v = 1 + rng.below(10);
    const auto pd = oracle::random_dense(v, rng);
    const auto qd = oracle::random_dense(v, rng);
    const auto p = oracle::to_distribution(pd);
    const auto q = oracle::to_distribution(qd);

    const auto qs = smooth(q, p.support(), cfg);
    EXPECT_NEAR(kld(p, qs), oracle::kld(pd, oracle::smooth(qd, pd, 1.0, cfg.epsilon)), 1e-12);
    EXPECT_NEAR(symmetric_kld(p, q, cfg), oracle::symmetric_kld(pd, qd, cfg.epsilon), 1e-12);
    EXPECT_NEAR(jsd(p, q), oracle::jsd(pd, qd), 1e-12);
    EXPECT_NEAR(divergence(Metric::kKld, p, q, cfg),
                oracle::kld(pd, oracle::smooth(qd, pd, 1.0, cfg.epsilon)), 1e-12);

    EXPECT_GE(kld(p, qs), 0.0);
    EXPECT_GE(symmetric_kld(p, q, cfg), 0.0);
    EXPECT_GE(jsd(p, q), 0.0);
    EXPECT_LE(jsd(p, q), std::log(2.0));
    EXPECT_NEAR(symmetric_kld(p, q, cfg), symmetric_kld(q, p, cfg), 1e-12);
    EXPECT_NEAR(jsd(p, q), jsd(q, p), 1e-12);
    EXPECT_NEAR(kld(p, p), 0.0, 1e-9);
    EXPECT_NEAR(jsd(p, p), 0.0, 1e-9);
  }
}

TEST(Metric, Names) {
  for (auto m : {Metric::kKld, Metric::kSymmetricKld, Metric::kJsd}) {
    EXPECT_EQ(parse_metric(metric_name(m)), m);
  }
  EXPECT_EQ(parse_metric("symmetric-kld"), Metric::kSymmetricKld);
  EXPECT_THROW(parse_metric("cosine"), Error);
}

TEST(SeedRefs, ParseAndPrint) {
  EXPECT_EQ(SeedRef::parse("pooled"), SeedRef::pooled_ref());
  EXPECT_EQ(SeedRef::parse("seed:report-1").seed_id, "report-1");
  EXPECT_EQ(SeedRef::seed("x").str(), "seed:x");
  EXPECT_THROW(SeedRef::parse("bogus"), Error);
}

namespace {

Corpus small_corpus(const std::vector<std::string>& texts) {
  std::vector<ManifestRecord> recs;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    recs.push_back(fixtures::record(fixtures::doc_id(static_cast<int>(i)), texts[i]));
  }
  return ingest_records(recs, NormalizationConfig{});
}

std::vector<const Document*> all_docs(const Corpus& c) {
  std::vector<const Document*> out;
  for (const auto& d : c.documents()) out.push_back(&d);
  return out;
}

WordDistribution seed_of(const Corpus& c, const std::string& text) {
  std::vector<WordId> ids;
  for (const auto& t : normalize(text, NormalizationConfig{})) ids.push_back(*c.vocabulary().find(t));
  return build_distribution(count_tokens(ids));
}

}  // namespace

TEST(ScoreCorpus, IdenticalDocumentScoresZero) {
  const Corpus c = small_corpus({"rent land rent tenant"});
  const auto seed = seed_of(c, "rent land rent tenant");
  for (auto m : {Metric::kKld, Metric::kSymmetricKld, Metric::kJsd}) {
    const auto batch = score_corpus({{SeedRef::pooled_ref(), seed}}, all_docs(c), m, {});
    ASSERT_EQ(batch.scores.size(), 1u);
    EXPECT_NEAR(batch.scores[0].value, 0.0, 1e-12) << metric_name(m);
  }
}

TEST(ScoreCorpus, DecreasingWithOverlap) {
  const Corpus c = small_corpus({"rent land tenant evict lease farm",
                                 "rent land tenant evict navy army",
                                 "rent land ship navy army fleet",
                                 "rent land tenant evict lease farm ship navy army fleet"});
  const auto seed = seed_of(c, "rent land tenant evict lease farm");
  for (auto m : {Metric::kKld, Metric::kSymmetricKld, Metric::kJsd}) {
    auto scores = score_corpus({{SeedRef::pooled_ref(), seed}}, all_docs(c), m, {}).scores;
    EXPECT_LT(scores[0].value, scores[1].value) << metric_name(m);
    EXPECT_LT(scores[1].value, scores[2].value) << metric_name(m);
  }
}

TEST(ScoreCorpus, KldAndJsdRankDifferently) {
  const auto f = fixtures::disagreement_fixture();
  const Corpus c = ingest_records(f.corpus, NormalizationConfig{});
  const auto seed = seed_of(c, *f.seed.text);
  const auto k = score_corpus({{SeedRef::pooled_ref(), seed}}, all_docs(c), Metric::kKld, {});
  const auto j = score_corpus({{SeedRef::pooled_ref(), seed}}, all_docs(c), Metric::kJsd, {});
  std::vector<std::string> rk, rj;
  auto sorted = [](std::vector<DivergenceScore> s) {
    std::sort(s.begin(), s.end(), [](const auto& x, const auto& y) {
      return std::tie(x.value, x.doc_id) < std::tie(y.value, y.doc_id);
    });
    std::vector<std::string> ids;
    for (const auto& d : s) ids.push_back(d.doc_id);
    return ids;
  };
  EXPECT_NE(sorted(k.scores), sorted(j.scores));
}

TEST(ScoreCorpus, PerSeedAndDeterministicOrder) {
  const Corpus c = small_corpus({"rent land", "navy army", "rent navy"});
  const auto s1 = seed_of(c, "rent land");
  const auto s2 = seed_of(c, "navy army");
  std::vector<ScoringSeed> seeds = {{SeedRef::seed("b"), s2}, {SeedRef::pooled_ref(), s1},
                                    {SeedRef::seed("a"), s1}};
  auto docs = all_docs(c);
  const auto first = score_corpus(seeds, docs, Metric::kJsd, {});
  std::reverse(docs.begin(), docs.end());
  const auto second = score_corpus(seeds, docs, Metric::kJsd, {});
  EXPECT_EQ(export_scores(first.scores), export_scores(second.scores));
  EXPECT_EQ(first.scores.size(), 9u);
  EXPECT_EQ(select_seed(first.scores, SeedRef::seed("b")).size(), 3u);
}

TEST(ScoreTable, ExportParseRoundTrip) {
  std::vector<DivergenceScore> s = {{"d1", Metric::kKld, SeedRef::pooled_ref(), 0.1234567890123},
                                    {"d2", Metric::kKld, SeedRef::seed("x"), 1e-300}};
  const auto back = parse_scores(export_scores(s));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].value, s[0].value);
  EXPECT_EQ(back[1].value, s[1].value);
  EXPECT_EQ(back[1].seed_ref, s[1].seed_ref);
  EXPECT_THROW(parse_scores("d1\tkld\tpooled\n"), Error);
}
