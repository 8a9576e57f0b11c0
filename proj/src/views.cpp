#include "winnower/views.hpp"

#include <algorithm>

#include "winnower/error.hpp"

namespace winnower {
using nlohmann::json;

json round_summary_json(const Round& r) {
  const auto effective = r.effective();
  const auto relevant = std::count_if(effective.begin(), effective.end(),
                                      [](const Label& l) { return l.relevant; });
  std::size_t sampled = 0;
  for (const auto& t : r.tranches) sampled += t.sample_size();
  json j = {
      {"round_id", r.round_id},
      {"parent_round", r.parent_round},
      {"parent_size", r.parent_size},
      {"metric", metric_name(r.metric)},
      {"status", round_status_name(r.status())},
      {"seed_kind", r.seed.kind == SeedSpec::Kind::kLabels ? "labels" : "external"},
      {"seed_count", r.seed.ids.size()},
      {"survivors", r.derived_doc_ids.size()},
      {"sampled", sampled},
      {"labeled", effective.size()},
      {"relevant", relevant},
  };
  j["cutoff_percentile"] = r.cutoff_percentile ? json(*r.cutoff_percentile) : json(nullptr);
  j["hit_rate"] = effective.empty() ? json(nullptr) : json(hit_rate(effective));
  return j;
}

json round_detail_json(const Round& r) {
  json j = round_summary_json(r);
  j["seed_ids"] = r.seed.ids;
  j["seed_source_round"] = r.seed.source_round;
  j["config_hash"] = r.config_hash;
  j["smoothing_epsilon"] = r.smoothing_epsilon;
  j["derived_doc_ids"] = r.derived_doc_ids;
  j["tranches"] = tranches_json(r.tranches);
  return j;
}

json tranches_json(const std::vector<Tranche>& tranches) {
  json out = json::array();
  for (const auto& t : tranches) {
    out.push_back({{"tranche_id", t.tranche_id},
                   {"band", {t.band.low, t.band.high}},
                   {"rng_seed", t.rng_seed},
                   {"sample_size", t.sample_size()},
                   {"doc_ids", t.sampled_doc_ids},
                   {"ranks", t.ranks}});
  }
  return out;
}

json label_json(const Label& l) {
  return {{"doc_id", l.doc_id},
          {"relevant", l.relevant},
          {"annotator", l.annotator},
          {"round_id", l.round_id},
          {"timestamp", l.timestamp}};
}

json label_report_json(const LabelReport& report) {
  json conflicts = json::array();
  for (const auto& c : report.conflicts) {
    conflicts.push_back({{"overwritten", label_json(c.overwritten)},
                         {"effective", label_json(c.effective)}});
  }
  json rejected = json::array();
  for (const auto& r : report.rejected) {
    rejected.push_back({{"label", label_json(r.label)}, {"reason", r.reason}});
  }
  return {{"accepted", report.accepted}, {"conflicts", conflicts}, {"rejected", rejected}};
}

json queue_json(const std::vector<QueueItem>& items) {
  json out = json::array();
  for (const auto& i : items) {
    out.push_back({{"doc_id", i.doc_id},
                   {"title", i.title},
                   {"year", i.year},
                   {"value", i.value},
                   {"rank", i.rank},
                   {"tranche_id", i.tranche_id},
                   {"band", {i.band.low, i.band.high}},
                   {"label", !i.relevant ? "unlabeled" : (*i.relevant ? "relevant" : "irrelevant")}});
  }
  return out;
}

json ingest_summary_json(const IngestSummary& s) {
  return {{"documents", s.documents},
          {"skipped", s.skipped},
          {"errors", s.errors},
          {"vocabulary", s.vocabulary},
          {"tokens", s.tokens},
          {"config_hash", s.config_hash}};
}

json topic_summaries_json(const std::vector<TopicSummary>& summaries) {
  json out = json::array();
  for (const auto& s : summaries) {
    json words = json::array();
    for (const auto& [w, p] : s.top_words) words.push_back({w, p});
    out.push_back({{"topic_id", s.topic_id},
                   {"name", s.display_name()},
                   {"prevalence", s.prevalence},
                   {"top_words", words}});
  }
  return out;
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& into) {
  if (j.contains(key) && !j[key].is_null()) into = j[key].get<T>();
}

}  // namespace

void apply_init_options(const json& j, InitOptions& o) {
  try {
    auto& c = o.config;
    take(j, "lowercase", c.lowercase);
    take(j, "strip_punctuation", c.strip_punctuation);
    take(j, "min_token_length", c.min_token_length);
    take(j, "reducer", c.reducer);
    take(j, "epsilon", c.smoothing_epsilon);
    if (j.contains("vocabulary_mode")) {
      c.vocabulary_mode = parse_vocabulary_mode(j["vocabulary_mode"].get<std::string>());
    }
    take(j, "num_topics", c.lda.num_topics);
    if (j.contains("alpha") && !j["alpha"].is_null()) c.lda.alpha = j["alpha"].get<double>();
    take(j, "beta", c.lda.beta);
    take(j, "iterations", c.lda.iterations);
    take(j, "lda_seed", c.lda.rng_seed);
    take(j, "bins", c.histogram_bins);
    take(j, "samples_per_band", c.samples_per_band);
    if (j.contains("bands")) c.bands = parse_bands(j["bands"].get<std::string>());
    if (j.contains("stopwords")) o.stopwords_file = j["stopwords"].get<std::string>();
    if (j.contains("lemmas")) o.lemma_file = j["lemmas"].get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("bad init options: ") + e.what());
  }
}

void apply_report_options(const json& j, ReportOptions& o) {
  try {
    if (j.contains("bins")) o.bins = j["bins"].get<int>();
    if (j.contains("percentile")) o.percentile = j["percentile"].get<double>();
    if (j.contains("seed_ref")) o.seed_ref = j["seed_ref"].get<std::string>();
    if (j.contains("n")) o.top_n = j["n"].get<std::size_t>();
    if (j.contains("scope")) o.scope = parse_topic_scope(j["scope"].get<std::string>());
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("bad report options: ") + e.what());
  }
}

void apply_lda_options(const json& j, LdaConfig& c, TopicScope& scope) {
  try {
    take(j, "num_topics", c.num_topics);
    if (j.contains("alpha") && !j["alpha"].is_null()) c.alpha = j["alpha"].get<double>();
    take(j, "beta", c.beta);
    take(j, "iterations", c.iterations);
    take(j, "rng_seed", c.rng_seed);
    if (j.contains("scope")) scope = parse_topic_scope(j["scope"].get<std::string>());
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("bad topic options: ") + e.what());
  }
}

}  // namespace winnower
