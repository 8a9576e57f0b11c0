#include "winnower/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "winnower/error.hpp"
#include "winnower/io.hpp"
#include "winnower/parallel.hpp"

namespace winnower {

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::kKld:
      return "kld";
    case Metric::kSymmetricKld:
      return "skld";
    case Metric::kJsd:
      return "jsd";
  }
  return "kld";
}

Metric parse_metric(std::string_view name) {
  if (name == "kld") return Metric::kKld;
  if (name == "skld" || name == "symmetric-kld") return Metric::kSymmetricKld;
  if (name == "jsd") return Metric::kJsd;
  fail(ErrorCode::kInvalidArgument,
       "unknown metric '" + std::string(name) + "' (expected kld, skld or jsd)");
}

double kld(const WordDistribution& p, const WordDistribution& q) {
  const auto& pe = p.entries();
  const auto& qe = q.entries();
  double sum = 0;
  std::size_t j = 0;
  for (const auto& [w, pw] : pe) {
    while (j < qe.size() && qe[j].first < w) ++j;
    if (j == qe.size() || qe[j].first != w) {
      fail(ErrorCode::kInvalidArgument,
           "unsmoothed input: q has no mass on word " + std::to_string(w));
    }
    sum += pw * std::log(pw / qe[j].second);
  }
  // Rounding can leave tiny negatives when p == q.
  return std::max(0.0, sum);
}

double symmetric_kld(const WordDistribution& p, const WordDistribution& q,
                     const SmoothingConfig& config) {
  const auto p_support = p.support();
  const auto q_support = q.support();
  return kld(p, smooth(q, p_support, config)) +
         kld(q, smooth(p, q_support, config));
}

double jsd(const WordDistribution& p, const WordDistribution& q) {
  const auto& pe = p.entries();
  const auto& qe = q.entries();
  double sum = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pe.size() || j < qe.size()) {
    double pw = 0;
    double qw = 0;
    if (j == qe.size() || (i < pe.size() && pe[i].first < qe[j].first)) {
      pw = pe[i++].second;
    } else if (i == pe.size() || qe[j].first < pe[i].first) {
      qw = qe[j++].second;
    } else {
      pw = pe[i++].second;
      qw = qe[j++].second;
    }
    const double m = 0.5 * (pw + qw);
    if (pw > 0) sum += 0.5 * pw * std::log(pw / m);
    if (qw > 0) sum += 0.5 * qw * std::log(qw / m);
  }
  return std::clamp(sum, 0.0, std::log(2.0));
}

double divergence(Metric metric, const WordDistribution& seed,
                  const WordDistribution& doc, const SmoothingConfig& config) {
  switch (metric) {
    case Metric::kKld: {
      const auto support = seed.support();
      return kld(seed, smooth(doc, support, config));
    }
    case Metric::kSymmetricKld:
      return symmetric_kld(seed, doc, config);
    case Metric::kJsd:
      return jsd(seed, doc);
  }
  fail(ErrorCode::kInternal, "unhandled metric");
}

SeedRef SeedRef::parse(std::string_view text) {
  if (text == "pooled") return pooled_ref();
  if (text.starts_with("seed:") && text.size() > 5) {
    return seed(std::string(text.substr(5)));
  }
  fail(ErrorCode::kParse, "bad seed reference '" + std::string(text) + "'");
}

ScoreBatch score_corpus(const std::vector<ScoringSeed>& seeds,
                        const std::vector<const Document*>& documents,
                        Metric metric, const SmoothingConfig& config) {
  if (seeds.empty()) fail(ErrorCode::kInvalidArgument, "no seed to score against");
  if (documents.empty()) fail(ErrorCode::kInvalidArgument, "empty corpus");

  std::vector<const Document*> order(documents);
  std::sort(order.begin(), order.end(),
            [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });

  struct Slot {
    std::vector<DivergenceScore> scores;
    std::optional<std::string> error;
  };
  std::vector<Slot> slots(order.size());
  parallel_for(order.size(), [&](std::size_t i) {
    const Document& doc = *order[i];
    try {
      const auto dist = build_distribution(
          count_tokens(doc.tokens), DistributionSource::document(doc.doc_id));
      for (const auto& seed : seeds) {
        const double value = divergence(metric, seed.distribution, dist, config);
        if (!std::isfinite(value)) {
          fail(ErrorCode::kInternal, "non-finite divergence");
        }
        slots[i].scores.push_back({doc.doc_id, metric, seed.ref, value});
      }
    } catch (const std::exception& e) {
      slots[i].scores.clear();
      slots[i].error = e.what();
    }
  });

  ScoreBatch batch;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (slots[i].error) {
      batch.errors.push_back({order[i]->doc_id, *slots[i].error});
      continue;
    }
    auto& s = slots[i].scores;
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) {
      return a.seed_ref.str() < b.seed_ref.str();
    });
    batch.scores.insert(batch.scores.end(), s.begin(), s.end());
  }
  return batch;
}

std::string export_scores(const std::vector<DivergenceScore>& scores) {
  std::string out;
  for (const auto& s : scores) {
    out += s.doc_id;
    out += '\t';
    out += metric_name(s.metric);
    out += '\t';
    out += s.seed_ref.str();
    out += '\t';
    out += format_double(s.value);
    out += '\n';
  }
  return out;
}

std::vector<DivergenceScore> parse_scores(std::string_view text) {
  std::vector<DivergenceScore> scores;
  for (const auto& line : split(text, '\n')) {
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    if (f.size() != 4) {
      fail(ErrorCode::kParse, "score line needs 4 fields: " + line);
    }
    scores.push_back(
        {f[0], parse_metric(f[1]), SeedRef::parse(f[2]), parse_double(f[3])});
  }
  return scores;
}

std::vector<DivergenceScore> select_seed(
    const std::vector<DivergenceScore>& scores, const SeedRef& ref) {
  std::vector<DivergenceScore> out;
  for (const auto& s : scores) {
    if (s.seed_ref == ref) out.push_back(s);
  }
  return out;
}

}  // namespace winnower
