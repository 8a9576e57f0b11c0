#pragma once

#include <map>
#include <string>
#include <vector>

#include "winnower/divergence.hpp"

namespace winnower {

struct Histogram {
  Metric metric = Metric::kKld;
  SeedRef seed_ref;
  std::vector<double> bin_edges;  // B + 1 ascending edges
  std::vector<std::size_t> counts;
};

inline constexpr int kDefaultHistogramBins = 50;

/// Equal-width bins over [min, max] of the values; the maximum lands in the
/// last bin. A zero span is widened so the edges stay strictly increasing.
/// All scores must share one metric and seed reference.
Histogram histogram(const std::vector<DivergenceScore>& scores, int bins);

// One histogram per seed reference present, pooled first.
std::vector<Histogram> histograms_by_seed(
    const std::vector<DivergenceScore>& scores, int bins);

struct YearSeries {
  Metric metric = Metric::kKld;
  SeedRef seed_ref;
  double percentile = 100;
  std::map<int, std::size_t> counts;  // years without survivors omitted
};

/// Per-year counts of the documents surviving cut(scores, percentile).
YearSeries year_series(const std::vector<DivergenceScore>& scores,
                       const Corpus& corpus, double percentile);

/// Descending count, ties by ascending surface.
std::vector<std::pair<std::string, std::size_t>> top_ngrams(
    const Corpus& corpus, const std::vector<std::string>& doc_ids,
    std::size_t n);

std::vector<std::pair<std::string, std::size_t>> top_ngrams(
    const std::map<std::string, double>& counts, std::size_t n);

// `# metric seed_ref` header, then `bin_low<TAB>bin_high<TAB>count` lines.
std::string format_histogram(const Histogram& h);
// `# metric seed_ref` header, then `year<TAB>count` lines.
std::string format_year_series(const YearSeries& s);
// `rank<TAB>surface<TAB>count` lines, rank from 1.
std::string format_ngrams(
    const std::vector<std::pair<std::string, std::size_t>>& rows);

}  // namespace winnower
