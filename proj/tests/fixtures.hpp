#pragma once

// Synthetic corpora with planted structure, shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <unistd.h>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "winnower/corpus.hpp"
#include "winnower/rng.hpp"

namespace fixtures {

using winnower::ManifestRecord;

inline std::vector<std::string> words(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(prefix + std::string(1, static_cast<char>('a' + i / 26)) +
                  std::string(1, static_cast<char>('a' + i % 26)));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

inline std::string doc_id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "d%04d", i);
  return buf;
}

// Draws `n` tokens uniformly from `vocab`.
inline void draw(std::vector<std::string>& out, const std::vector<std::string>& vocab,
                 int n, winnower::Xoshiro256& rng) {
  for (int i = 0; i < n; ++i) out.push_back(vocab[rng.below(vocab.size())]);
}

inline std::string manifest_line(const ManifestRecord& r) {
  nlohmann::json j = {{"doc_id", r.doc_id}, {"title", r.title}, {"year", r.year}};
  if (r.text) j["text"] = *r.text;
  if (r.path) j["path"] = *r.path;
  return j.dump();
}

inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<ManifestRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (const auto& r : records) out << manifest_line(r) << "\n";
}

inline ManifestRecord record(std::string id, std::string text, int year = 1900,
                             std::string title = "") {
  ManifestRecord r;
  r.doc_id = std::move(id);
  r.title = title.empty() ? r.doc_id : std::move(title);
  r.year = year;
  r.text = std::move(text);
  return r;
}

/// Seed over 20 "rent" words used by the metric-disagreement corpus.
struct DisagreementFixture {
  std::vector<ManifestRecord> corpus;
  ManifestRecord seed;
  std::set<std::string> short_docs;  // near-uniform after heavy smoothing
  std::set<std::string> long_docs;   // close to the seed's proportions
};

/// 200 documents. Four very short documents touching two seed words each
/// (years 1850-1853) look close to the seed under smoothed KLD, whose
/// pseudo-counts flatten short texts; four long documents that follow the
/// seed's proportions with some noise (years 1900-1903) are closest under
/// JSD. The rest mix a few seed words into mostly unrelated vocabulary.
inline DisagreementFixture disagreement_fixture() {
  DisagreementFixture f;
  winnower::Xoshiro256 rng(20240601);
  const auto seed_words = words("rent", 20);
  const auto noise = words("misc", 300);

  std::vector<std::string> seed_tokens;
  for (int rep = 0; rep < 10; ++rep) {
    for (const auto& w : seed_words) seed_tokens.push_back(w);
  }
  f.seed = record("seed-report", join(seed_tokens), 1880, "Seed report");

  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> tokens;
    int year = 1850 + static_cast<int>(rng.below(60));
    const std::string id = doc_id(i);
    if (i < 4) {
      tokens = {seed_words[2 * i], seed_words[2 * i + 1]};
      year = 1850 + i;
      f.short_docs.insert(id);
    } else if (i < 8) {
      for (int rep = 0; rep < 8; ++rep) {
        for (const auto& w : seed_words) tokens.push_back(w);
      }
      draw(tokens, noise, 40, rng);
      year = 1900 + (i - 4);
      f.long_docs.insert(id);
    } else {
      draw(tokens, seed_words, 20 + static_cast<int>(rng.below(20)), rng);
      draw(tokens, noise, 80 + static_cast<int>(rng.below(40)), rng);
    }
    f.corpus.push_back(record(id, join(tokens), year));
  }
  return f;
}

/// Full-loop corpus: a "property" sublanguage P planted in a minority of
/// documents, a generic parliamentary vocabulary G shared with near misses,
/// and noise N.
struct LoopFixture {
  std::vector<ManifestRecord> corpus;
  std::vector<ManifestRecord> seeds;
  std::set<std::string> relevant;
};

inline LoopFixture loop_fixture() {
  LoopFixture f;
  winnower::Xoshiro256 rng(1842);
  const auto property = words("prop", 20);
  const auto generic = words("parl", 20);
  const auto noise = words("noise", 400);

  for (int s = 0; s < 2; ++s) {
    std::vector<std::string> tokens;
    draw(tokens, property, 60, rng);
    draw(tokens, generic, 240, rng);
    f.seeds.push_back(record("seed-" + std::to_string(s + 1), join(tokens), 1880));
  }

  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> tokens;
    const std::string id = doc_id(i);
    const int len = 120 + static_cast<int>(rng.below(60));
    const auto r = rng.below(500);
    if (r < 30) {
      // relevant: property talk among general debate
      const int p = len * (6 + static_cast<int>(rng.below(10))) / 100;
      const int g = len * (25 + static_cast<int>(rng.below(20))) / 100;
      draw(tokens, property, p, rng);
      draw(tokens, generic, g, rng);
      draw(tokens, noise, len - p - g, rng);
      f.relevant.insert(id);
    } else if (r < 150) {
      // near miss: generic debate vocabulary only
      const int g = len * (30 + static_cast<int>(rng.below(30))) / 100;
      draw(tokens, generic, g, rng);
      draw(tokens, noise, len - g, rng);
    } else {
      const int g = len * static_cast<int>(rng.below(10)) / 100;
      draw(tokens, generic, g, rng);
      draw(tokens, noise, len - g, rng);
    }
    f.corpus.push_back(record(id, join(tokens), 1850 + static_cast<int>(rng.below(60))));
  }
  return f;
}

/// Two disjoint ten-word vocabularies; each document draws from exactly one.
struct PlantedTopics {
  std::vector<std::string> vocab_a;
  std::vector<std::string> vocab_b;
  std::vector<std::pair<std::string, std::map<std::string, double>>> docs;
  std::set<std::string> docs_a;
};

inline PlantedTopics planted_topics(int n_docs = 200, double share_a = 0.5,
                                    int doc_len = 50, std::uint64_t seed = 7) {
  PlantedTopics p;
  p.vocab_a = words("land", 10);
  p.vocab_b = words("navy", 10);
  winnower::Xoshiro256 rng(seed);
  const int n_a = static_cast<int>(n_docs * share_a + 0.5);
  for (int i = 0; i < n_docs; ++i) {
    const bool a = i < n_a;
    std::map<std::string, double> counts;
    for (int t = 0; t < doc_len; ++t) {
      const auto& v = a ? p.vocab_a : p.vocab_b;
      counts[v[rng.below(v.size())]] += 1;
    }
    const std::string id = doc_id(i);
    if (a) p.docs_a.insert(id);
    p.docs.emplace_back(id, std::move(counts));
  }
  return p;
}

/// Twelve short documents with decreasing overlap with the seed.
inline std::vector<ManifestRecord> twelve_docs() {
  const auto seed_words = words("rent", 6);
  const auto other = words("other", 12);
  std::vector<ManifestRecord> out;
  for (int i = 0; i < 12; ++i) {
    std::vector<std::string> tokens;
    for (int j = 0; j < 6; ++j) {
      if (j < 6 - i / 2) tokens.push_back(seed_words[j]);
    }
    for (int j = 0; j <= i; ++j) tokens.push_back(other[j]);
    out.push_back(record(doc_id(i), join(tokens), 1880 + i));
  }
  return out;
}

inline ManifestRecord twelve_seed() {
  return record("seed-a", join(words("rent", 6)), 1880);
}

}  // namespace fixtures

namespace fixtures {

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "winnower") {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Relative path -> contents for every regular file under dir.
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      out[std::filesystem::relative(e.path(), dir).string()] = read_text(e.path());
    }
  }
  return out;
}

}  // namespace fixtures
