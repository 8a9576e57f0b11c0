#include "winnower/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

#include "winnower/error.hpp"
#include "winnower/hash.hpp"
#include "winnower/io.hpp"
#include "winnower/parallel.hpp"

namespace winnower {
namespace fs = std::filesystem;
using nlohmann::json;

Vocabulary::Vocabulary(std::vector<std::string> surfaces)
    : surfaces_(std::move(surfaces)) {
  ids_.reserve(surfaces_.size());
  for (std::size_t i = 0; i < surfaces_.size(); ++i) {
    if (!ids_.emplace(surfaces_[i], static_cast<WordId>(i)).second) {
      fail(ErrorCode::kInternal, "duplicate vocabulary entry " + surfaces_[i]);
    }
  }
}

std::optional<WordId> Vocabulary::find(std::string_view surface) const {
  auto it = ids_.find(std::string(surface));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::surface(WordId id) const {
  if (id >= surfaces_.size()) {
    fail(ErrorCode::kInvalidArgument,
         "word id " + std::to_string(id) + " outside vocabulary");
  }
  return surfaces_[id];
}

Corpus::Corpus(Vocabulary vocabulary, std::vector<Document> documents,
               std::vector<SkippedDocument> skipped,
               std::vector<DocumentError> errors,
               std::map<std::string, std::string> inline_texts)
    : vocabulary_(std::move(vocabulary)),
      documents_(std::move(documents)),
      skipped_(std::move(skipped)),
      errors_(std::move(errors)),
      inline_texts_(std::move(inline_texts)) {
  std::sort(documents_.begin(), documents_.end(),
            [](const Document& a, const Document& b) {
              return a.doc_id < b.doc_id;
            });
  auto by_id = [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; };
  std::sort(skipped_.begin(), skipped_.end(), by_id);
  std::sort(errors_.begin(), errors_.end(), by_id);
}

std::size_t Corpus::total_tokens() const {
  std::size_t n = 0;
  for (const auto& d : documents_) n += d.token_count();
  return n;
}

const Document* Corpus::find(std::string_view doc_id) const {
  auto it = std::lower_bound(
      documents_.begin(), documents_.end(), doc_id,
      [](const Document& d, std::string_view id) { return d.doc_id < id; });
  if (it == documents_.end() || it->doc_id != doc_id) return nullptr;
  return &*it;
}

const Document& Corpus::at(std::string_view doc_id) const {
  const Document* d = find(doc_id);
  if (d == nullptr) {
    fail(ErrorCode::kNotFound, "unknown document " + std::string(doc_id));
  }
  return *d;
}

std::string Corpus::text(const Document& doc) const {
  if (doc.text_ref == "inline") {
    auto it = inline_texts_.find(doc.doc_id);
    if (it == inline_texts_.end()) {
      fail(ErrorCode::kNotFound, "no inline text for " + doc.doc_id);
    }
    return it->second;
  }
  return read_file(doc.text_ref);
}

namespace {

void check_id(const std::string& doc_id, const std::string& where) {
  if (doc_id.empty()) fail(ErrorCode::kParse, where + ": empty doc_id");
  if (doc_id.find_first_of("\t\r\n/") != std::string::npos) {
    fail(ErrorCode::kParse,
         where + ": doc_id '" + doc_id + "' contains a tab, newline or '/'");
  }
}

}  // namespace

std::vector<ManifestRecord> read_manifest(const fs::path& path) {
  const auto lines = read_lines(path);
  const fs::path base = fs::absolute(path).parent_path();
  std::vector<ManifestRecord> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::kParse, where + ": " + e.what());
    }
    if (!row.is_object()) fail(ErrorCode::kParse, where + ": not an object");
    ManifestRecord rec;
    try {
      rec.doc_id = row.at("doc_id").get<std::string>();
      rec.title = row.value("title", std::string());
      if (!row.contains("year") || !row["year"].is_number_integer()) {
        fail(ErrorCode::kParse, where + ": year must be an integer");
      }
      rec.year = row["year"].get<int>();
      if (row.contains("text")) rec.text = row["text"].get<std::string>();
      if (row.contains("path")) {
        fs::path p = row["path"].get<std::string>();
        rec.path = (p.is_absolute() ? p : base / p).lexically_normal().string();
      }
    } catch (const json::exception& e) {
      fail(ErrorCode::kParse, where + ": " + e.what());
    }
    check_id(rec.doc_id, where);
    if (rec.text.has_value() == rec.path.has_value()) {
      fail(ErrorCode::kParse,
           where + ": exactly one of text or path is required");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

Corpus ingest_records(const std::vector<ManifestRecord>& records,
                      const NormalizationConfig& config) {
  if (records.empty()) fail(ErrorCode::kInvalidArgument, "empty manifest");
  {
    std::set<std::string> seen;
    for (const auto& r : records) {
      if (!seen.insert(r.doc_id).second) {
        fail(ErrorCode::kConflict, "duplicate doc_id " + r.doc_id);
      }
    }
  }

  struct Outcome {
    std::vector<std::string> tokens;
    std::optional<std::string> error;
  };
  std::vector<Outcome> outcomes(records.size());
  parallel_for(records.size(), [&](std::size_t i) {
    const auto& rec = records[i];
    try {
      const std::string text = rec.text ? *rec.text : read_file(*rec.path);
      outcomes[i].tokens = normalize(text, config);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });

  // Ids are assigned in sorted surface order, which makes the vocabulary
  // independent of manifest order.
  std::set<std::string> surfaces;
  for (const auto& o : outcomes) surfaces.insert(o.tokens.begin(), o.tokens.end());
  Vocabulary vocabulary(std::vector<std::string>(surfaces.begin(), surfaces.end()));

  std::vector<Document> documents;
  std::vector<SkippedDocument> skipped;
  std::vector<DocumentError> errors;
  std::map<std::string, std::string> inline_texts;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    auto& outcome = outcomes[i];
    if (outcome.error) {
      errors.push_back({rec.doc_id, *outcome.error});
      continue;
    }
    if (outcome.tokens.empty()) {
      skipped.push_back({rec.doc_id, "no tokens after normalization"});
      continue;
    }
    Document doc;
    doc.doc_id = rec.doc_id;
    doc.title = rec.title;
    doc.year = rec.year;
    doc.text_ref = rec.text ? "inline" : *rec.path;
    doc.tokens.reserve(outcome.tokens.size());
    for (const auto& t : outcome.tokens) doc.tokens.push_back(*vocabulary.find(t));
    if (rec.text) inline_texts.emplace(rec.doc_id, *rec.text);
    documents.push_back(std::move(doc));
  }
  return Corpus(std::move(vocabulary), std::move(documents), std::move(skipped),
                std::move(errors), std::move(inline_texts));
}

Corpus ingest_corpus(const fs::path& manifest,
                     const NormalizationConfig& config) {
  return ingest_records(read_manifest(manifest), config);
}

std::string file_digest(const fs::path& path) {
  Fnv1a h;
  h.bytes(read_file(path));
  return h.hex();
}

void save_corpus(const Corpus& corpus, const fs::path& dir,
                 const CacheTag& tag) {
  fs::create_directories(dir);

  std::string vocab;
  for (const auto& s : corpus.vocabulary().surfaces()) {
    vocab += s;
    vocab += '\n';
  }
  write_file_atomic(dir / "vocab.txt", vocab);

  std::string docs;
  for (const auto& d : corpus.documents()) {
    json row = {{"doc_id", d.doc_id},
                {"title", d.title},
                {"year", d.year},
                {"text_ref", d.text_ref},
                {"tokens", d.tokens}};
    docs += row.dump();
    docs += '\n';
  }
  write_file_atomic(dir / "documents.jsonl", docs);

  std::string texts;
  for (const auto& [id, text] : corpus.inline_texts()) {
    texts += json{{"doc_id", id}, {"text", text}}.dump();
    texts += '\n';
  }
  write_file_atomic(dir / "inline.jsonl", texts);

  std::string skipped;
  for (const auto& s : corpus.skipped()) skipped += s.doc_id + "\t" + s.reason + "\n";
  write_file_atomic(dir / "skipped.tsv", skipped);

  std::string errors;
  for (const auto& e : corpus.errors()) {
    std::string message = e.message;
    std::replace_if(message.begin(), message.end(),
                    [](char c) { return c == '\t' || c == '\n'; }, ' ');
    errors += e.doc_id + "\t" + message + "\n";
  }
  write_file_atomic(dir / "errors.tsv", errors);

  // Written last: a cache without meta.json is never considered valid.
  json meta = {{"format", "winnower-corpus"},
               {"version", kCorpusCacheVersion},
               {"config_hash", tag.config_hash},
               {"manifest_hash", tag.manifest_hash},
               {"documents", corpus.size()},
               {"vocabulary", corpus.vocabulary().size()}};
  write_file_atomic(dir / "meta.json", meta.dump(2) + "\n");
}

std::optional<CacheTag> read_cache_tag(const fs::path& dir) {
  if (!fs::exists(dir / "meta.json")) return std::nullopt;
  try {
    const json meta = json::parse(read_file(dir / "meta.json"));
    if (meta.value("format", "") != "winnower-corpus" ||
        meta.value("version", 0) != kCorpusCacheVersion) {
      return std::nullopt;
    }
    return CacheTag{meta.at("config_hash").get<std::string>(),
                    meta.at("manifest_hash").get<std::string>()};
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

Corpus load_corpus(const fs::path& dir) {
  if (!read_cache_tag(dir)) {
    fail(ErrorCode::kState, "no corpus cache in " + dir.string());
  }
  std::vector<std::string> surfaces = read_lines(dir / "vocab.txt");
  Vocabulary vocabulary(std::move(surfaces));

  std::vector<Document> documents;
  try {
    for (const auto& line : read_lines(dir / "documents.jsonl")) {
      if (line.empty()) continue;
      const json row = json::parse(line);
      Document d;
      d.doc_id = row.at("doc_id").get<std::string>();
      d.title = row.at("title").get<std::string>();
      d.year = row.at("year").get<int>();
      d.text_ref = row.at("text_ref").get<std::string>();
      d.tokens = row.at("tokens").get<std::vector<WordId>>();
      for (const WordId w : d.tokens) {
        if (w >= vocabulary.size()) {
          fail(ErrorCode::kParse, "corpus cache token outside vocabulary in " +
                                      d.doc_id);
        }
      }
      documents.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, "corrupt corpus cache: " + std::string(e.what()));
  }

  std::map<std::string, std::string> inline_texts;
  for (const auto& line : read_lines(dir / "inline.jsonl")) {
    if (line.empty()) continue;
    const json row = json::parse(line);
    inline_texts.emplace(row.at("doc_id").get<std::string>(),
                         row.at("text").get<std::string>());
  }

  std::vector<SkippedDocument> skipped;
  for (const auto& line : read_lines(dir / "skipped.tsv")) {
    if (line.empty()) continue;
    auto f = split(line, '\t');
    skipped.push_back({f[0], f.size() > 1 ? f[1] : ""});
  }
  std::vector<DocumentError> errors;
  for (const auto& line : read_lines(dir / "errors.tsv")) {
    if (line.empty()) continue;
    auto f = split(line, '\t');
    errors.push_back({f[0], f.size() > 1 ? f[1] : ""});
  }
  return Corpus(std::move(vocabulary), std::move(documents), std::move(skipped),
                std::move(errors), std::move(inline_texts));
}

}  // namespace winnower
