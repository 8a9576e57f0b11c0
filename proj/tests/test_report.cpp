#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "winnower/error.hpp"
#include "winnower/io.hpp"
#include "winnower/report.hpp"
#include "winnower/text.hpp"
#include "winnower/winnow.hpp"

using namespace winnower;

namespace {

std::vector<DivergenceScore> scores_of(const std::vector<double>& v,
                                       SeedRef ref = SeedRef::pooled_ref()) {
  std::vector<DivergenceScore> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back({fixtures::doc_id(static_cast<int>(i)), Metric::kJsd, ref, v[i]});
  }
  return out;
}

}  // namespace

TEST(Histogram, CountsMatchLinearScan) {
  Xoshiro256 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(1 + rng.below(300));
    for (auto& x : v) x = rng.uniform() * 3;
    const int bins = 1 + static_cast<int>(rng.below(60));
    const auto h = histogram(scores_of(v), bins);
    ASSERT_EQ(h.counts.size(), static_cast<std::size_t>(bins));
    ASSERT_EQ(h.bin_edges.size(), static_cast<std::size_t>(bins + 1));
    std::size_t total = 0;
    for (int b = 0; b < bins; ++b) {
      // Oracle: a value belongs to the bin whose edges bracket it; the top
      // edge belongs to the last bin.
      std::size_t expected = 0;
      for (double x : v) {
        const bool last = b == bins - 1;
        if (x >= h.bin_edges[b] && (x < h.bin_edges[b + 1] || (last && x <= h.bin_edges[b + 1]))) {
          ++expected;
        }
      }
      EXPECT_EQ(h.counts[b], expected);
      total += h.counts[b];
    }
    EXPECT_EQ(total, v.size());
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    EXPECT_EQ(h.bin_edges.front(), *lo);
    if (*hi > *lo) EXPECT_EQ(h.bin_edges.back(), *hi);
  }
}

TEST(Histogram, DegenerateSpan) {
  const auto h = histogram(scores_of({0.3, 0.3, 0.3}), 5);
  std::size_t total = 0;
  for (auto c : h.counts) total += c;
  EXPECT_EQ(total, 3u);
  for (std::size_t i = 1; i < h.bin_edges.size(); ++i) EXPECT_LT(h.bin_edges[i - 1], h.bin_edges[i]);
}

TEST(Histogram, RejectsMixedInputs) {
  auto s = scores_of({0.1, 0.2});
  s[1].seed_ref = SeedRef::seed("x");
  EXPECT_THROW(histogram(s, 10), Error);
  EXPECT_THROW(histogram({}, 10), Error);
  EXPECT_THROW(histogram(scores_of({0.1}), 0), Error);
}

TEST(Histogram, PerSeedPooledFirst) {
  auto s = scores_of({0.1, 0.2}, SeedRef::seed("b"));
  const auto p = scores_of({0.3, 0.4});
  s.insert(s.end(), p.begin(), p.end());
  const auto hs = histograms_by_seed(s, 4);
  ASSERT_EQ(hs.size(), 2u);
  EXPECT_TRUE(hs[0].seed_ref.pooled);
  EXPECT_EQ(hs[1].seed_ref.seed_id, "b");
}

TEST(Histogram, Format) {
  const auto text = format_histogram(histogram(scores_of({0.0, 1.0}), 2));
  EXPECT_EQ(text, "# jsd pooled\n0\t0.5\t1\n0.5\t1\t1\n");
}

TEST(YearSeries, CountsSurvivorsPerYear) {
  std::vector<ManifestRecord> recs;
  for (int i = 0; i < 8; ++i) recs.push_back(fixtures::record(fixtures::doc_id(i), "rent", 1880 + i % 3));
  const Corpus c = ingest_records(recs, NormalizationConfig{});
  const auto s = scores_of({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
  const auto ys = year_series(s, c, 50);
  // survivors d0000..d0003 -> years 1880, 1881, 1882, 1880
  EXPECT_EQ(ys.counts, (std::map<int, std::size_t>{{1880, 2}, {1881, 1}, {1882, 1}}));
  EXPECT_EQ(format_year_series(ys), "# jsd pooled\n1880\t2\n1881\t1\n1882\t1\n");
  std::size_t total = 0;
  for (const auto& [y, n] : year_series(s, c, 100).counts) total += n;
  EXPECT_EQ(total, 8u);
  auto missing = s;
  missing[0].doc_id = "ghost";
  EXPECT_THROW(year_series(missing, c, 100), Error);
}

TEST(Ngrams, TopCounts) {
  const Corpus c = ingest_records({fixtures::record("a", "rent land rent"),
                                   fixtures::record("b", "land rent navy"),
                                   fixtures::record("c", "navy navy navy navy")},
                                  NormalizationConfig{});
  const auto rows = top_ngrams(c, {"a", "b"}, 10);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::pair<std::string, std::size_t>{"rent", 3}));
  EXPECT_EQ(rows[1], (std::pair<std::string, std::size_t>{"land", 2}));
  EXPECT_EQ(rows[2], (std::pair<std::string, std::size_t>{"navy", 1}));
  EXPECT_EQ(format_ngrams(rows), "1\trent\t3\n2\tland\t2\n3\tnavy\t1\n");
  EXPECT_EQ(top_ngrams(c, {"a", "b", "c"}, 1)[0].first, "navy");
  const std::map<std::string, double> counts = {{"b", 2}, {"a", 2}, {"c", 5}};
  const auto seeded = top_ngrams(counts, 2);
  EXPECT_EQ(seeded[0].first, "c");
  EXPECT_EQ(seeded[1].first, "a");
}
