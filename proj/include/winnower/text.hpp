#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace winnower {

enum class Reducer { kNone, kStemmer, kLemmatizer };

const char* reducer_name(Reducer r);
Reducer parse_reducer(std::string_view name);

/// Text normalization settings. Steps run in a fixed order: lowercase, strip
/// punctuation, minimum-length filter, stopword removal, reducer.
struct NormalizationConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
  std::set<std::string> stopwords;
  Reducer reducer = Reducer::kNone;
  // surface -> lemma; consulted only when reducer == kLemmatizer.
  std::map<std::string, std::string> lemma_table;
  int min_token_length = 2;

  // Stable digest over every field that affects output (the lemma table only
  // under the lemmatizer), used to invalidate the corpus cache.
  std::string hash() const;
};

std::vector<std::string> normalize(std::string_view text,
                                   const NormalizationConfig& config);

/// Classic Porter (1980) suffix stripper. Expects a lowercase ASCII word;
/// words of length <= 2 and words with non-ASCII bytes are returned unchanged.
std::string porter_stem(std::string_view word);

std::set<std::string> load_stopwords(const std::filesystem::path& path);

/// Reads `surface<TAB>lemma` lines. Blank lines and lines starting with '#'
/// are ignored; a line without a tab is a parse error.
std::map<std::string, std::string> load_lemma_table(
    const std::filesystem::path& path);

// Number of UTF-8 code points in s.
std::size_t utf8_length(std::string_view s);

}  // namespace winnower
