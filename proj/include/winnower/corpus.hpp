#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "winnower/text.hpp"

namespace winnower {

using WordId = std::uint32_t;

/// Dense bijection between word ids 0..size-1 and surface forms.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Ids follow the order of `surfaces`, which must be free of duplicates.
  explicit Vocabulary(std::vector<std::string> surfaces);

  std::optional<WordId> find(std::string_view surface) const;
  const std::string& surface(WordId id) const;
  std::size_t size() const { return surfaces_.size(); }
  const std::vector<std::string>& surfaces() const { return surfaces_; }

 private:
  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, WordId> ids_;
};

struct Document {
  std::string doc_id;
  std::string title;
  int year = 0;
  // Absolute path of the source text, or "inline" when the manifest carried
  // the text itself.
  std::string text_ref;
  std::vector<WordId> tokens;

  std::size_t token_count() const { return tokens.size(); }
};

struct SkippedDocument {
  std::string doc_id;
  std::string reason;
};

struct DocumentError {
  std::string doc_id;
  std::string message;
};

struct ManifestRecord {
  std::string doc_id;
  std::string title;
  int year = 0;
  std::optional<std::string> text;
  std::optional<std::string> path;
};

/// An ingested corpus. Immutable once built; documents are sorted by doc_id.
class Corpus {
 public:
  Corpus() = default;
  Corpus(Vocabulary vocabulary, std::vector<Document> documents,
         std::vector<SkippedDocument> skipped,
         std::vector<DocumentError> errors,
         std::map<std::string, std::string> inline_texts);

  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<SkippedDocument>& skipped() const { return skipped_; }
  const std::vector<DocumentError>& errors() const { return errors_; }
  std::size_t size() const { return documents_.size(); }
  std::size_t total_tokens() const;

  const Document* find(std::string_view doc_id) const;
  const Document& at(std::string_view doc_id) const;

  // Raw UTF-8 text of a document, from the manifest or from its source file.
  std::string text(const Document& doc) const;

  const std::map<std::string, std::string>& inline_texts() const {
    return inline_texts_;
  }

 private:
  Vocabulary vocabulary_;
  std::vector<Document> documents_;
  std::vector<SkippedDocument> skipped_;
  std::vector<DocumentError> errors_;
  std::map<std::string, std::string> inline_texts_;
};

/// Parses a newline-delimited manifest. Relative `path` fields are resolved
/// against the manifest's directory.
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

Corpus ingest_records(const std::vector<ManifestRecord>& records,
                      const NormalizationConfig& config);

Corpus ingest_corpus(const std::filesystem::path& manifest,
                     const NormalizationConfig& config);

inline constexpr int kCorpusCacheVersion = 1;

struct CacheTag {
  std::string config_hash;
  std::string manifest_hash;
};

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir,
                 const CacheTag& tag);

// Reads the cache tag only; nullopt when no (compatible) cache exists.
std::optional<CacheTag> read_cache_tag(const std::filesystem::path& dir);

Corpus load_corpus(const std::filesystem::path& dir);

// FNV-1a digest of a file's bytes.
std::string file_digest(const std::filesystem::path& path);

}  // namespace winnower
