#include "winnower/text.hpp"

#include <cctype>
#include <fstream>

#include "winnower/error.hpp"
#include "winnower/hash.hpp"

namespace winnower {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Non-ASCII bytes count as word characters so UTF-8 letters survive.
bool is_word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

void split_punctuation(const std::string& token,
                       std::vector<std::string>& out) {
  std::string current;
  for (std::size_t i = 0; i < token.size(); ++i) {
    const auto c = static_cast<unsigned char>(token[i]);
    if (is_word_byte(c)) {
      current.push_back(static_cast<char>(c));
      continue;
    }
    const bool inner = !current.empty() && i + 1 < token.size() &&
                       is_word_byte(static_cast<unsigned char>(token[i + 1]));
    if (inner && c == '\'') {
      current.push_back('\'');
    } else if (inner && c == '-') {
      // tenant-right -> tenantright
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
}

std::string trim(std::string s) {
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) {
    s.pop_back();
  }
  std::size_t start = 0;
  while (start < s.size() && is_space(static_cast<unsigned char>(s[start]))) {
    ++start;
  }
  return s.substr(start);
}

}  // namespace

const char* reducer_name(Reducer r) {
  switch (r) {
    case Reducer::kNone:
      return "none";
    case Reducer::kStemmer:
      return "stemmer";
    case Reducer::kLemmatizer:
      return "lemmatizer";
  }
  return "none";
}

Reducer parse_reducer(std::string_view name) {
  if (name == "none") return Reducer::kNone;
  if (name == "stemmer") return Reducer::kStemmer;
  if (name == "lemmatizer") return Reducer::kLemmatizer;
  fail(ErrorCode::kInvalidArgument,
       "unknown reducer '" + std::string(name) +
           "' (expected none, stemmer or lemmatizer)");
}

std::string NormalizationConfig::hash() const {
  Fnv1a h;
  h.field(lowercase ? "1" : "0");
  h.field(strip_punctuation ? "1" : "0");
  h.field(std::to_string(min_token_length));
  h.field(reducer_name(reducer));
  h.field(std::to_string(stopwords.size()));
  for (const auto& s : stopwords) h.field(s);
  if (reducer == Reducer::kLemmatizer) {
    h.field(std::to_string(lemma_table.size()));
    for (const auto& [surface, lemma] : lemma_table) {
      h.field(surface);
      h.field(lemma);
    }
  }
  return h.hex();
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (const char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<std::string> normalize(std::string_view text,
                                   const NormalizationConfig& config) {
  std::vector<std::string> raw;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      if (!current.empty()) raw.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(config.lowercase && c < 0x80
                            ? static_cast<char>(std::tolower(c))
                            : ch);
    }
  }
  if (!current.empty()) raw.push_back(std::move(current));

  std::vector<std::string> tokens;
  if (config.strip_punctuation) {
    for (const auto& t : raw) split_punctuation(t, tokens);
  } else {
    tokens = std::move(raw);
  }

  std::vector<std::string> out;
  out.reserve(tokens.size());
  const auto min_length = static_cast<std::size_t>(
      config.min_token_length > 0 ? config.min_token_length : 0);
  for (auto& t : tokens) {
    if (utf8_length(t) < min_length) continue;
    if (config.stopwords.count(t) != 0) continue;
    switch (config.reducer) {
      case Reducer::kNone:
        out.push_back(std::move(t));
        break;
      case Reducer::kStemmer:
        out.push_back(porter_stem(t));
        break;
      case Reducer::kLemmatizer: {
        auto it = config.lemma_table.find(t);
        out.push_back(it == config.lemma_table.end() ? std::move(t)
                                                     : it->second);
        break;
      }
    }
  }
  return out;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read stopword file " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) words.insert(line);
  }
  return words;
}

std::map<std::string, std::string> load_lemma_table(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read lemma table " + path.string());
  std::map<std::string, std::string> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) +
                                  ": expected surface<TAB>lemma");
    }
    table[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return table;
}

}  // namespace winnower
