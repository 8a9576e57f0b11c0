#include "winnower/winnow.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "winnower/error.hpp"
#include "winnower/io.hpp"
#include "winnower/rng.hpp"

namespace winnower {
namespace fs = std::filesystem;
using nlohmann::json;

std::size_t cut_size(std::size_t n, double percentile) {
  if (!(percentile > 0) || percentile > 100) {
    fail(ErrorCode::kInvalidArgument,
         "percentile must lie in (0, 100], got " + format_double(percentile));
  }
  const double exact = percentile * static_cast<double>(n) / 100.0;
  const double nearest = std::round(exact);
  const double count =
      std::abs(exact - nearest) <= 1e-12 * std::max(1.0, exact) ? nearest
                                                               : std::ceil(exact);
  return std::min(n, static_cast<std::size_t>(count));
}

std::vector<DivergenceScore> rank_scores(std::vector<DivergenceScore> scores) {
  std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.doc_id < b.doc_id;
  });
  return scores;
}

std::vector<std::string> cut(const std::vector<DivergenceScore>& scores,
                             double percentile) {
  if (scores.empty()) fail(ErrorCode::kInvalidArgument, "no scores to cut");
  const std::size_t keep = cut_size(scores.size(), percentile);
  const auto ranked = rank_scores(scores);
  std::vector<std::string> ids;
  ids.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) ids.push_back(ranked[i].doc_id);
  return ids;
}

std::string PercentileBand::str() const {
  return format_double(low) + "-" + format_double(high);
}

PercentileBand PercentileBand::parse(std::string_view text) {
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    fail(ErrorCode::kParse, "band '" + std::string(text) + "' is not low-high");
  }
  PercentileBand band{parse_double(text.substr(0, dash)),
                      parse_double(text.substr(dash + 1))};
  if (band.low < 0 || band.high > 100 || !(band.low < band.high)) {
    fail(ErrorCode::kInvalidArgument,
         "band '" + std::string(text) + "' must satisfy 0 <= low < high <= 100");
  }
  return band;
}

std::vector<PercentileBand> parse_bands(std::string_view text) {
  std::vector<PercentileBand> bands;
  for (const auto& part : split(text, ',')) {
    if (!part.empty()) bands.push_back(PercentileBand::parse(part));
  }
  if (bands.empty()) fail(ErrorCode::kInvalidArgument, "no bands given");
  return bands;
}

std::vector<PercentileBand> default_bands() {
  return {{0, 1}, {1, 5}, {5, 25}};
}

std::vector<Tranche> sample_tranches(const std::vector<DivergenceScore>& scores,
                                     const std::vector<PercentileBand>& bands,
                                     int k_per_band, std::uint64_t rng_seed) {
  if (k_per_band < 1) fail(ErrorCode::kInvalidArgument, "k_per_band must be >= 1");
  if (scores.empty()) fail(ErrorCode::kInvalidArgument, "no scores to sample");
  auto sorted = bands;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.low < b.low; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& b = sorted[i];
    if (b.low < 0 || b.high > 100 || !(b.low < b.high)) {
      fail(ErrorCode::kInvalidArgument, "invalid band " + b.str());
    }
    if (i > 0 && b.low < sorted[i - 1].high) {
      fail(ErrorCode::kInvalidArgument,
           "overlapping bands " + sorted[i - 1].str() + " and " + b.str());
    }
  }

  const auto ranked = rank_scores(scores);
  const std::size_t n = ranked.size();
  Xoshiro256 rng(rng_seed);
  std::vector<Tranche> tranches;
  for (std::size_t t = 0; t < bands.size(); ++t) {
    const auto& band = bands[t];
    const std::size_t begin = band.low == 0 ? 0 : cut_size(n, band.low);
    const std::size_t end = cut_size(n, band.high);
    std::vector<std::size_t> pool;
    for (std::size_t r = begin; r < end; ++r) pool.push_back(r);
    const std::size_t take =
        std::min(pool.size(), static_cast<std::size_t>(k_per_band));
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    std::sort(pool.begin(), pool.end());

    Tranche tranche;
    tranche.tranche_id = static_cast<int>(t + 1);
    tranche.band = band;
    tranche.rng_seed = rng_seed;
    for (const std::size_t r : pool) {
      tranche.sampled_doc_ids.push_back(ranked[r].doc_id);
      tranche.ranks.push_back(r + 1);
    }
    tranches.push_back(std::move(tranche));
  }
  return tranches;
}

namespace {

long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

int digits(std::string_view s, std::size_t pos, std::size_t count,
           std::string_view whole) {
  if (pos + count > s.size()) {
    fail(ErrorCode::kParse, "malformed timestamp '" + std::string(whole) + "'");
  }
  int v = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') {
      fail(ErrorCode::kParse, "malformed timestamp '" + std::string(whole) + "'");
    }
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

long double timestamp_seconds(std::string_view ts) {
  auto expect = [&](std::size_t pos, char c) {
    if (pos >= ts.size() || ts[pos] != c) {
      fail(ErrorCode::kParse, "malformed timestamp '" + std::string(ts) + "'");
    }
  };
  const int year = digits(ts, 0, 4, ts);
  expect(4, '-');
  const int month = digits(ts, 5, 2, ts);
  expect(7, '-');
  const int day = digits(ts, 8, 2, ts);
  if (ts.size() <= 10 || (ts[10] != 'T' && ts[10] != ' ')) {
    fail(ErrorCode::kParse, "malformed timestamp '" + std::string(ts) + "'");
  }
  const int hour = digits(ts, 11, 2, ts);
  expect(13, ':');
  const int minute = digits(ts, 14, 2, ts);
  expect(16, ':');
  const int second = digits(ts, 17, 2, ts);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 60) {
    fail(ErrorCode::kParse, "timestamp out of range '" + std::string(ts) + "'");
  }
  std::size_t pos = 19;
  long double fraction = 0;
  if (pos < ts.size() && ts[pos] == '.') {
    long double scale = 0.1L;
    ++pos;
    const std::size_t start = pos;
    while (pos < ts.size() && ts[pos] >= '0' && ts[pos] <= '9') {
      fraction += scale * (ts[pos] - '0');
      scale /= 10;
      ++pos;
    }
    if (pos == start) {
      fail(ErrorCode::kParse, "malformed timestamp '" + std::string(ts) + "'");
    }
  }
  long long offset = 0;
  if (pos < ts.size()) {
    if (ts[pos] == 'Z' && pos + 1 == ts.size()) {
      pos = ts.size();
    } else if ((ts[pos] == '+' || ts[pos] == '-') && pos + 6 == ts.size()) {
      const int sign = ts[pos] == '+' ? 1 : -1;
      const int oh = digits(ts, pos + 1, 2, ts);
      expect(pos + 3, ':');
      const int om = digits(ts, pos + 4, 2, ts);
      offset = sign * (oh * 3600LL + om * 60LL);
    } else {
      fail(ErrorCode::kParse, "malformed timestamp '" + std::string(ts) + "'");
    }
  }
  const long long days = days_from_civil(year, static_cast<unsigned>(month),
                                         static_cast<unsigned>(day));
  return static_cast<long double>(days * 86400LL + hour * 3600LL +
                                  minute * 60LL + second - offset) +
         fraction;
}

std::vector<Label> parse_labels(std::string_view text, int round_id) {
  std::vector<Label> labels;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 4 || (f[1] != "0" && f[1] != "1")) {
      fail(ErrorCode::kParse,
           "label line " + std::to_string(line_no) +
               ": expected doc_id<TAB>0|1<TAB>annotator<TAB>timestamp");
    }
    timestamp_seconds(f[3]);
    labels.push_back({f[0], f[1] == "1", f[2], round_id, f[3]});
  }
  return labels;
}

std::string format_label(const Label& l) {
  return l.doc_id + "\t" + (l.relevant ? "1" : "0") + "\t" + l.annotator +
         "\t" + l.timestamp + "\n";
}

namespace {

// Index of the winning label per doc_id.
std::map<std::string, std::size_t> winners(const std::vector<Label>& log) {
  std::map<std::string, std::size_t> best;
  for (std::size_t i = 0; i < log.size(); ++i) {
    auto [it, inserted] = best.emplace(log[i].doc_id, i);
    if (!inserted && timestamp_seconds(log[i].timestamp) >=
                         timestamp_seconds(log[it->second].timestamp)) {
      it->second = i;
    }
  }
  return best;
}

}  // namespace

std::vector<Label> effective_labels(const std::vector<Label>& log) {
  std::vector<Label> out;
  for (const auto& [id, index] : winners(log)) out.push_back(log[index]);
  return out;
}

std::vector<LabelConflict> label_conflicts(const std::vector<Label>& log) {
  const auto best = winners(log);
  std::vector<LabelConflict> conflicts;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const std::size_t w = best.at(log[i].doc_id);
    if (w != i) conflicts.push_back({log[i], log[w]});
  }
  return conflicts;
}

double hit_rate(const std::vector<Label>& effective) {
  if (effective.empty()) fail(ErrorCode::kState, "nothing labeled");
  const auto relevant = std::count_if(effective.begin(), effective.end(),
                                      [](const Label& l) { return l.relevant; });
  return static_cast<double>(relevant) / static_cast<double>(effective.size());
}

const char* round_status_name(RoundStatus status) {
  switch (status) {
    case RoundStatus::kScored:
      return "scored";
    case RoundStatus::kWinnowed:
      return "winnowed";
    case RoundStatus::kSampled:
      return "sampled";
    case RoundStatus::kLabeled:
      return "labeled";
    case RoundStatus::kClosed:
      return "closed";
  }
  return "scored";
}

RoundStatus Round::status() const {
  if (closed) return RoundStatus::kClosed;
  if (!labels.empty()) return RoundStatus::kLabeled;
  if (!tranches.empty()) return RoundStatus::kSampled;
  if (cutoff_percentile) return RoundStatus::kWinnowed;
  return RoundStatus::kScored;
}

std::vector<DivergenceScore> Round::pooled_scores() const {
  return select_seed(scores, SeedRef::pooled_ref());
}

bool Round::in_round(std::string_view doc_id) const {
  if (std::find(derived_doc_ids.begin(), derived_doc_ids.end(), doc_id) !=
      derived_doc_ids.end()) {
    return true;
  }
  for (const auto& t : tranches) {
    if (std::find(t.sampled_doc_ids.begin(), t.sampled_doc_ids.end(), doc_id) !=
        t.sampled_doc_ids.end()) {
      return true;
    }
  }
  return false;
}

void winnow_round(Round& round, double percentile) {
  if (round.status() != RoundStatus::kScored) {
    fail(ErrorCode::kState, "round " + std::to_string(round.round_id) +
                                " is already " + round_status_name(round.status()));
  }
  round.derived_doc_ids = cut(round.pooled_scores(), percentile);
  round.cutoff_percentile = percentile;
}

LabelReport ingest_labels(Round& round, const std::vector<Label>& labels) {
  if (round.closed) {
    fail(ErrorCode::kConflict,
         "round " + std::to_string(round.round_id) + " is closed");
  }
  const std::set<std::string> before_conflicts = [&] {
    std::set<std::string> keys;
    for (const auto& c : label_conflicts(round.labels)) {
      keys.insert(format_label(c.overwritten));
    }
    return keys;
  }();

  LabelReport report;
  for (auto label : labels) {
    label.round_id = round.round_id;
    if (!round.in_round(label.doc_id)) {
      report.rejected.push_back(
          {label, "document is not in round " + std::to_string(round.round_id)});
      continue;
    }
    round.labels.push_back(label);
    ++report.accepted;
  }
  for (const auto& c : label_conflicts(round.labels)) {
    if (before_conflicts.count(format_label(c.overwritten)) == 0) {
      report.conflicts.push_back(c);
    }
  }
  return report;
}

double hit_rate(const Round& round) { return hit_rate(round.effective()); }

SeedSpec assemble_next_seed(const Round& round) {
  SeedSpec spec;
  spec.kind = SeedSpec::Kind::kLabels;
  spec.source_round = round.round_id;
  for (const auto& l : round.effective()) {
    if (l.relevant) spec.ids.push_back(l.doc_id);
  }
  if (spec.ids.empty()) {
    fail(ErrorCode::kState, "round " + std::to_string(round.round_id) +
                                " has no relevant labels");
  }
  return spec;
}

SeedText seed_from_documents(const std::string& seed_id, const Corpus& corpus,
                             const std::vector<std::string>& doc_ids) {
  SeedText seed{seed_id, {}};
  const auto& vocab = corpus.vocabulary();
  for (const auto& id : doc_ids) {
    for (const WordId w : corpus.at(id).tokens) seed.counts[vocab.surface(w)] += 1;
  }
  return seed;
}

std::vector<ScoringSeed> resolve_seeds(const Round& round,
                                       const Vocabulary& vocabulary,
                                       bool per_seed) {
  if (round.seed_texts.empty()) fail(ErrorCode::kInvalidArgument, "round has no seed");
  // Unknown surfaces are numbered in sorted order across all seeds.
  std::map<std::string, WordId> extra;
  for (const auto& s : round.seed_texts) {
    for (const auto& [surface, c] : s.counts) {
      if (!vocabulary.find(surface)) extra.emplace(surface, 0);
    }
  }
  {
    WordId next = static_cast<WordId>(vocabulary.size());
    for (auto& [surface, id] : extra) id = next++;
  }
  auto id_of = [&](const std::string& surface) {
    if (auto id = vocabulary.find(surface)) return *id;
    return extra.at(surface);
  };

  std::vector<SparseCounts> counts;
  for (const auto& s : round.seed_texts) {
    SparseCounts c;
    for (const auto& [surface, n] : s.counts) c.emplace_back(id_of(surface), n);
    counts.push_back(std::move(c));
  }
  std::vector<ScoringSeed> seeds;
  seeds.push_back({SeedRef::pooled_ref(), pool_seeds(counts)});
  if (per_seed) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto& id = round.seed_texts[i].seed_id;
      seeds.push_back({SeedRef::seed(id),
                       build_distribution(counts[i], DistributionSource::seed(id))});
    }
  }
  return seeds;
}

void score_round(const Corpus& corpus,
                 const std::vector<const Document*>& documents, Round& round,
                 bool per_seed) {
  SmoothingConfig cfg;
  cfg.epsilon = round.smoothing_epsilon;
  cfg.vocabulary_mode = round.vocabulary_mode;
  cfg.vocabulary_size = corpus.vocabulary().size();
  const auto seeds = resolve_seeds(round, corpus.vocabulary(), per_seed);
  auto batch = score_corpus(seeds, documents, round.metric, cfg);
  if (!batch.errors.empty()) {
    fail(ErrorCode::kInternal, "scoring failed for " + batch.errors.front().doc_id +
                                   ": " + batch.errors.front().message);
  }
  round.scores = std::move(batch.scores);
  round.parent_size = documents.size();
}

Round run_round(const Corpus& corpus,
                const std::vector<const Document*>& documents, Round round,
                double percentile, bool per_seed) {
  cut_size(documents.size(), percentile);
  score_round(corpus, documents, round, per_seed);
  winnow_round(round, percentile);
  return round;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

const char* seed_kind_name(SeedSpec::Kind k) {
  return k == SeedSpec::Kind::kLabels ? "labels" : "external";
}

std::string tranche_lines(const std::vector<Tranche>& tranches) {
  std::string out;
  for (const auto& t : tranches) {
    for (std::size_t i = 0; i < t.sampled_doc_ids.size(); ++i) {
      out += std::to_string(t.tranche_id) + "\t" + format_double(t.band.low) +
             "\t" + format_double(t.band.high) + "\t" +
             std::to_string(t.rng_seed) + "\t" + std::to_string(t.ranks[i]) +
             "\t" + t.sampled_doc_ids[i] + "\n";
    }
  }
  return out;
}

std::string conflict_lines(const std::vector<Label>& log) {
  std::string out;
  for (const auto& c : label_conflicts(log)) {
    std::string line = format_label(c.overwritten);
    line.pop_back();
    out += line + "\t" + c.effective.timestamp + "\n";
  }
  return out;
}

}  // namespace

RoundStore::RoundStore(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
}

fs::path RoundStore::round_dir(int round_id) const {
  char name[32];
  std::snprintf(name, sizeof name, "round-%04d", round_id);
  return dir_ / name;
}

std::vector<int> RoundStore::ids() const {
  std::vector<int> ids;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && name.starts_with("round-") &&
        fs::exists(entry.path() / "config.json")) {
      ids.push_back(static_cast<int>(parse_int(name.substr(6))));
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

int RoundStore::latest() const {
  const auto all = ids();
  return all.empty() ? 0 : all.back();
}

bool RoundStore::exists(int round_id) const {
  return round_id > 0 && fs::exists(round_dir(round_id) / "config.json");
}

void RoundStore::create(const Round& round) {
  const fs::path dir = round_dir(round.round_id);
  if (fs::exists(dir / "config.json")) {
    fail(ErrorCode::kConflict,
         "round " + std::to_string(round.round_id) + " already exists");
  }
  fs::create_directories(dir);

  std::string seed;
  for (const auto& s : round.seed_texts) {
    for (const auto& [surface, n] : s.counts) {
      seed += s.seed_id + "\t" + surface + "\t" + format_double(n) + "\n";
    }
  }
  write_file_atomic(dir / "seed.tsv", seed);
  write_file_atomic(dir / "scores.tsv", export_scores(round.scores));

  if (round.cutoff_percentile) save_winnow(round);
  if (!round.tranches.empty()) save_tranches(round);
  if (!round.labels.empty()) append_labels(round, round.labels);

  json seed_ids = json::array();
  for (const auto& s : round.seed_texts) seed_ids.push_back(s.seed_id);
  const json config = {
      {"round_id", round.round_id},
      {"parent_round", round.parent_round},
      {"parent_size", round.parent_size},
      {"metric", metric_name(round.metric)},
      {"seed_kind", seed_kind_name(round.seed.kind)},
      {"seed_ids", round.seed.ids},
      {"seed_source_round", round.seed.source_round},
      {"seed_texts", seed_ids},
      {"smoothing_epsilon", round.smoothing_epsilon},
      {"vocabulary_mode", vocabulary_mode_name(round.vocabulary_mode)},
      {"config_hash", round.config_hash},
  };
  // config.json last: its presence marks the round as committed.
  write_file_atomic(dir / "config.json", config.dump(2) + "\n");
}

void RoundStore::save_winnow(const Round& round) {
  const fs::path dir = round_dir(round.round_id);
  if (fs::exists(dir / "winnow.json")) {
    fail(ErrorCode::kState,
         "round " + std::to_string(round.round_id) + " is already winnowed");
  }
  std::string survivors;
  for (const auto& id : round.derived_doc_ids) survivors += id + "\n";
  write_file_atomic(dir / "survivors.txt", survivors);
  const json w = {{"cutoff_percentile", *round.cutoff_percentile},
                  {"parent_size", round.parent_size},
                  {"survivors", round.derived_doc_ids.size()}};
  write_file_atomic(dir / "winnow.json", w.dump(2) + "\n");
}

void RoundStore::save_tranches(const Round& round) {
  const fs::path dir = round_dir(round.round_id);
  if (fs::exists(dir / "tranches.tsv")) {
    fail(ErrorCode::kState,
         "round " + std::to_string(round.round_id) + " is already sampled");
  }
  write_file_atomic(dir / "tranches.tsv", tranche_lines(round.tranches));
}

void RoundStore::append_labels(const Round& round,
                               const std::vector<Label>& added) {
  const fs::path dir = round_dir(round.round_id);
  std::string lines;
  for (const auto& l : added) lines += format_label(l);
  append_file(dir / "labels.tsv", lines);
  write_file_atomic(dir / "conflicts.tsv", conflict_lines(round.labels));
}

Round RoundStore::load(int round_id) const {
  const fs::path dir = round_dir(round_id);
  if (!exists(round_id)) {
    fail(ErrorCode::kNotFound, "unknown round " + std::to_string(round_id));
  }
  Round round;
  try {
    const json config = json::parse(read_file(dir / "config.json"));
    round.round_id = config.at("round_id").get<int>();
    round.parent_round = config.at("parent_round").get<int>();
    round.parent_size = config.at("parent_size").get<std::size_t>();
    round.metric = parse_metric(config.at("metric").get<std::string>());
    round.seed.kind = config.at("seed_kind").get<std::string>() == "labels"
                          ? SeedSpec::Kind::kLabels
                          : SeedSpec::Kind::kExternal;
    round.seed.ids = config.at("seed_ids").get<std::vector<std::string>>();
    round.seed.source_round = config.at("seed_source_round").get<int>();
    round.smoothing_epsilon = config.at("smoothing_epsilon").get<double>();
    round.vocabulary_mode =
        parse_vocabulary_mode(config.at("vocabulary_mode").get<std::string>());
    round.config_hash = config.at("config_hash").get<std::string>();
    for (const auto& id : config.at("seed_texts")) {
      round.seed_texts.push_back({id.get<std::string>(), {}});
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, "corrupt round config " + std::to_string(round_id) +
                                ": " + e.what());
  }

  for (const auto& line : read_lines(dir / "seed.tsv")) {
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    if (f.size() != 3) fail(ErrorCode::kParse, "bad seed line: " + line);
    auto it = std::find_if(round.seed_texts.begin(), round.seed_texts.end(),
                           [&](const SeedText& s) { return s.seed_id == f[0]; });
    if (it == round.seed_texts.end()) {
      fail(ErrorCode::kParse, "seed line for unknown seed " + f[0]);
    }
    it->counts[f[1]] = parse_double(f[2]);
  }
  round.scores = parse_scores(read_file(dir / "scores.tsv"));

  if (fs::exists(dir / "winnow.json")) {
    const json w = json::parse(read_file(dir / "winnow.json"));
    round.cutoff_percentile = w.at("cutoff_percentile").get<double>();
    for (const auto& line : read_lines(dir / "survivors.txt")) {
      if (!line.empty()) round.derived_doc_ids.push_back(line);
    }
  }
  if (fs::exists(dir / "tranches.tsv")) {
    for (const auto& line : read_lines(dir / "tranches.tsv")) {
      if (line.empty()) continue;
      const auto f = split(line, '\t');
      if (f.size() != 6) fail(ErrorCode::kParse, "bad tranche line: " + line);
      const int id = static_cast<int>(parse_int(f[0]));
      if (round.tranches.empty() || round.tranches.back().tranche_id != id) {
        Tranche t;
        t.tranche_id = id;
        t.band = {parse_double(f[1]), parse_double(f[2])};
        t.rng_seed = std::stoull(f[3]);
        round.tranches.push_back(std::move(t));
      }
      round.tranches.back().ranks.push_back(
          static_cast<std::size_t>(parse_int(f[4])));
      round.tranches.back().sampled_doc_ids.push_back(f[5]);
    }
  }
  if (fs::exists(dir / "labels.tsv")) {
    round.labels = parse_labels(read_file(dir / "labels.tsv"), round_id);
  }
  round.closed = latest() > round_id;
  return round;
}

}  // namespace winnower
