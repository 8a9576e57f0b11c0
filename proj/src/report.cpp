#include "winnower/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "winnower/error.hpp"
#include "winnower/io.hpp"
#include "winnower/winnow.hpp"

namespace winnower {

Histogram histogram(const std::vector<DivergenceScore>& scores, int bins) {
  if (bins < 1) fail(ErrorCode::kInvalidArgument, "bins must be >= 1");
  if (scores.empty()) fail(ErrorCode::kInvalidArgument, "no scores to bin");
  for (const auto& s : scores) {
    if (s.metric != scores.front().metric || !(s.seed_ref == scores.front().seed_ref)) {
      fail(ErrorCode::kInvalidArgument,
           "histogram input mixes metrics or seed references");
    }
  }
  const auto [lo_it, hi_it] = std::minmax_element(
      scores.begin(), scores.end(),
      [](const auto& a, const auto& b) { return a.value < b.value; });
  const double lo = lo_it->value;
  double hi = hi_it->value;
  if (!(hi > lo)) {
    hi = lo + std::max(std::abs(lo), 1.0) * std::numeric_limits<double>::epsilon() *
                  static_cast<double>(bins);
  }
  const double width = (hi - lo) / bins;

  Histogram h;
  h.metric = scores.front().metric;
  h.seed_ref = scores.front().seed_ref;
  h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.bin_edges[i] = lo + width * i;
  h.bin_edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const auto& s : scores) {
    auto bin = static_cast<long>(std::floor((s.value - lo) / width));
    bin = std::clamp(bin, 0L, static_cast<long>(bins) - 1);
    // keep the bin consistent with the printed edges despite rounding
    while (bin > 0 && s.value < h.bin_edges[bin]) --bin;
    while (bin < bins - 1 && s.value >= h.bin_edges[bin + 1]) ++bin;
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

std::vector<Histogram> histograms_by_seed(
    const std::vector<DivergenceScore>& scores, int bins) {
  std::vector<std::string> refs;
  std::set<std::string> seen;
  for (const auto& s : scores) {
    if (seen.insert(s.seed_ref.str()).second) refs.push_back(s.seed_ref.str());
  }
  std::stable_sort(refs.begin(), refs.end(), [](const auto& a, const auto& b) {
    if ((a == "pooled") != (b == "pooled")) return a == "pooled";
    return a < b;
  });
  std::vector<Histogram> out;
  for (const auto& r : refs) {
    out.push_back(histogram(select_seed(scores, SeedRef::parse(r)), bins));
  }
  return out;
}

YearSeries year_series(const std::vector<DivergenceScore>& scores,
                       const Corpus& corpus, double percentile) {
  if (scores.empty()) fail(ErrorCode::kInvalidArgument, "no scores");
  std::string missing;
  for (const auto& s : scores) {
    if (corpus.find(s.doc_id) == nullptr) {
      missing += (missing.empty() ? "" : ", ") + s.doc_id;
    }
  }
  if (!missing.empty()) {
    fail(ErrorCode::kNotFound, "no year metadata for: " + missing);
  }
  YearSeries series;
  series.metric = scores.front().metric;
  series.seed_ref = scores.front().seed_ref;
  series.percentile = percentile;
  for (const auto& id : cut(scores, percentile)) {
    ++series.counts[corpus.at(id).year];
  }
  return series;
}

namespace {

std::vector<std::pair<std::string, std::size_t>> rank_counts(
    std::vector<std::pair<std::string, std::size_t>> rows, std::size_t n) {
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (rows.size() > n) rows.resize(n);
  return rows;
}

}  // namespace

std::vector<std::pair<std::string, std::size_t>> top_ngrams(
    const Corpus& corpus, const std::vector<std::string>& doc_ids,
    std::size_t n) {
  std::vector<std::size_t> counts(corpus.vocabulary().size(), 0);
  for (const auto& id : doc_ids) {
    for (const WordId w : corpus.at(id).tokens) ++counts[w];
  }
  std::vector<std::pair<std::string, std::size_t>> rows;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    if (counts[w] > 0) {
      rows.emplace_back(corpus.vocabulary().surface(static_cast<WordId>(w)),
                        counts[w]);
    }
  }
  return rank_counts(std::move(rows), n);
}

std::vector<std::pair<std::string, std::size_t>> top_ngrams(
    const std::map<std::string, double>& counts, std::size_t n) {
  std::vector<std::pair<std::string, std::size_t>> rows;
  for (const auto& [s, c] : counts) {
    if (c > 0) rows.emplace_back(s, static_cast<std::size_t>(std::llround(c)));
  }
  return rank_counts(std::move(rows), n);
}

std::string format_histogram(const Histogram& h) {
  std::string out = std::string("# ") + metric_name(h.metric) + " " +
                    h.seed_ref.str() + "\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out += format_double(h.bin_edges[i]) + "\t" +
           format_double(h.bin_edges[i + 1]) + "\t" +
           std::to_string(h.counts[i]) + "\n";
  }
  return out;
}

std::string format_year_series(const YearSeries& s) {
  std::string out = std::string("# ") + metric_name(s.metric) + " " +
                    s.seed_ref.str() + "\n";
  for (const auto& [year, count] : s.counts) {
    out += std::to_string(year) + "\t" + std::to_string(count) + "\n";
  }
  return out;
}

std::string format_ngrams(
    const std::vector<std::pair<std::string, std::size_t>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += std::to_string(i + 1) + "\t" + rows[i].first + "\t" +
           std::to_string(rows[i].second) + "\n";
  }
  return out;
}

}  // namespace winnower
