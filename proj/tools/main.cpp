#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "winnower/winnower.h"

namespace {

using nlohmann::json;

struct Failure {
  winnower_status status;
  std::string message;
};

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return s;
}

void check(winnower_status status) {
  if (status != WINNOWER_OK) throw Failure{status, winnower_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  winnower_free_string(s);
  return out;
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class Handle {
 public:
  explicit Handle(const std::string& root) { check(winnower_project_open(root.c_str(), &p_)); }
  ~Handle() { winnower_project_close(p_); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  winnower_project* get() { return p_; }

 private:
  winnower_project* p_ = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"winnower: iterative corpus winnowing by divergence from seed texts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", winnower_version());

  std::string root = ".";
  app.add_option("-p,--project", root, "Project directory (env WINNOWER_PROJECT)")
      ->envname("WINNOWER_PROJECT");

  // init
  auto* init = app.add_subcommand("init", "Create a project directory");
  bool no_lowercase = false, keep_punctuation = false;
  std::optional<std::string> stopwords, lemmas, reducer, vocab_mode, bands_init;
  std::optional<int> min_len, num_topics_init, iterations_init, bins_init, samples_init;
  std::optional<double> epsilon, alpha_init, beta_init;
  std::optional<std::uint64_t> lda_seed_init;
  init->add_flag("--no-lowercase", no_lowercase, "Keep letter case");
  init->add_flag("--keep-punctuation", keep_punctuation, "Do not split on punctuation");
  init->add_option("--stopwords", stopwords, "Stopword list, one word per line")->check(CLI::ExistingFile);
  init->add_option("--lemmas", lemmas, "Lemma table: surface<TAB>lemma")->check(CLI::ExistingFile);
  init->add_option("--reducer", reducer, "none, stemmer, lemmatizer or auto");
  init->add_option("--min-token-length", min_len, "Shortest token kept (default 2)");
  init->add_option("--epsilon", epsilon, "Smoothing pseudo-count (default 0.5)");
  init->add_option("--vocabulary-mode", vocab_mode, "union_of_pair or corpus_wide");
  init->add_option("--num-topics", num_topics_init, "Default LDA topic count (default 100)");
  init->add_option("--alpha", alpha_init, "Default LDA alpha (default 50/K)");
  init->add_option("--beta", beta_init, "Default LDA beta (default 0.01)");
  init->add_option("--iterations", iterations_init, "Default Gibbs sweeps (default 1000)");
  init->add_option("--lda-seed", lda_seed_init, "Default LDA rng seed (default 0)");
  init->add_option("--bins", bins_init, "Default histogram bins (default 50)");
  init->add_option("--bands", bands_init, "Default sampling bands (default 0-1,1-5,5-25)");
  init->add_option("--samples-per-band", samples_init, "Default documents per band (default 20)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Normalize and cache a corpus manifest");
  std::string manifest;
  ingest->add_option("-m,--manifest", manifest, "JSONL manifest")->required();

  // rank
  auto* rank = app.add_subcommand("rank", "Score the whole corpus against seed texts (new round)");
  std::string metric = "kld", seed_manifest;
  bool per_seed = false;
  rank->add_option("--metric", metric, "kld, skld or jsd")->capture_default_str();
  rank->add_option("--seed-manifest", seed_manifest, "JSONL manifest of seed texts")->required();
  rank->add_flag("--per-seed", per_seed, "Also score against each seed separately");

  auto round_option = [](CLI::App* sub, int& round) {
    sub->add_option("-r,--round", round, "Round id (0 = newest)")->capture_default_str();
  };

  // winnow
  auto* winnow = app.add_subcommand("winnow", "Keep the closest percentile of a round");
  int winnow_round = 0;
  double percentile = 0;
  std::optional<std::string> winnow_metric;
  round_option(winnow, winnow_round);
  winnow->add_option("--percentile", percentile, "Percent of documents kept")->required();
  winnow->add_option("--metric", winnow_metric, "Re-score with this metric (new round)");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw review tranches from a winnowed round");
  int sample_round = 0, k = 0;
  std::optional<std::string> bands;
  std::uint64_t rng_seed = 0;
  round_option(sample, sample_round);
  sample->add_option("--bands", bands, "Percentile bands, e.g. 0-1,1-5,5-25");
  sample->add_option("-k,--per-band", k, "Documents per band (0 = project default)");
  sample->add_option("--rng-seed", rng_seed, "Sampling seed")->capture_default_str();

  // label
  auto* label = app.add_subcommand("label", "Append expert labels to a round");
  int label_round = 0;
  std::string label_file;
  round_option(label, label_round);
  label->add_option("-f,--file", label_file, "TSV: doc_id, 0|1, annotator, timestamp")
      ->required()->check(CLI::ExistingFile);

  // hit-rate
  auto* hit = app.add_subcommand("hit-rate", "Fraction of effective labels marked relevant");
  int hit_round = 0;
  round_option(hit, hit_round);

  // reseed
  auto* reseed = app.add_subcommand("reseed", "Score survivors against relevant labels (new round)");
  int reseed_round = 0;
  std::optional<std::string> reseed_metric;
  round_option(reseed, reseed_round);
  reseed->add_option("--metric", reseed_metric, "Metric for the new round (default: same)");

  // topics
  auto* topics = app.add_subcommand("topics", "Train an LDA model over a round, or name its topics");
  int topics_round = 0;
  std::optional<std::string> scope, names_file;
  std::optional<int> num_topics, iterations;
  std::optional<double> alpha, beta;
  std::optional<std::uint64_t> topic_seed;
  round_option(topics, topics_round);
  topics->add_option("--scope", scope, "derived, parent or seed (default derived)");
  topics->add_option("-K,--num-topics", num_topics, "Topic count");
  topics->add_option("--alpha", alpha, "Document-topic prior");
  topics->add_option("--beta", beta, "Topic-word prior");
  topics->add_option("--iterations", iterations, "Gibbs sweeps");
  topics->add_option("--rng-seed", topic_seed, "Sampler seed");
  topics->add_option("--names", names_file, "TSV topic_id<TAB>name; names topics instead of training")
      ->check(CLI::ExistingFile);

  // report
  auto* report = app.add_subcommand("report", "Write a report as TSV");
  std::string kind;
  int report_round = 0;
  std::optional<int> bins;
  std::optional<double> report_pct;
  std::optional<std::string> seed_ref, report_scope, out_file;
  std::optional<int> top_n;
  report->add_option("kind", kind, "histogram, year-series, ngrams or topics")
      ->required()->check(CLI::IsMember({"histogram", "year-series", "ngrams", "topics"}));
  round_option(report, report_round);
  report->add_option("--bins", bins, "Histogram bins");
  report->add_option("--percentile", report_pct, "year-series: top percentile counted");
  report->add_option("--seed-ref", seed_ref, "pooled or seed:<id>");
  report->add_option("-n,--top", top_n, "ngrams: rows");
  report->add_option("--scope", report_scope, "ngrams: derived, parent or seed");
  report->add_option("-o,--out", out_file, "Write to a file instead of stdout");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the review API");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> static_dir;
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port (0 = any free port)")->capture_default_str();
  serve->add_option("--static", static_dir, "Directory of UI assets served at /")
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    // Top-level help lists every subcommand with all of its flags.
    for (auto* sub : app.get_subcommands()) {
      std::cout << sub->help();
      return 0;
    }
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << winnower_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error\tinvalid_argument\t" << one_line(e.what()) << "\n";
    return 64;
  }

  try {
    if (init->parsed()) {
      json o = json::object();
      if (no_lowercase) o["lowercase"] = false;
      if (keep_punctuation) o["strip_punctuation"] = false;
      if (stopwords) o["stopwords"] = *stopwords;
      if (lemmas) o["lemmas"] = *lemmas;
      if (reducer) o["reducer"] = *reducer;
      if (min_len) o["min_token_length"] = *min_len;
      if (epsilon) o["epsilon"] = *epsilon;
      if (vocab_mode) o["vocabulary_mode"] = *vocab_mode;
      if (num_topics_init) o["num_topics"] = *num_topics_init;
      if (alpha_init) o["alpha"] = *alpha_init;
      if (beta_init) o["beta"] = *beta_init;
      if (iterations_init) o["iterations"] = *iterations_init;
      if (lda_seed_init) o["lda_seed"] = *lda_seed_init;
      if (bins_init) o["bins"] = *bins_init;
      if (bands_init) o["bands"] = *bands_init;
      if (samples_init) o["samples_per_band"] = *samples_init;
      check(winnower_project_init(root.c_str(), o.dump().c_str()));
      std::cout << json{{"project", root}}.dump() << "\n";
      return 0;
    }

    Handle project(root);
    char* out = nullptr;
    if (ingest->parsed()) {
      check(winnower_ingest(project.get(), manifest.c_str(), &out));
    } else if (rank->parsed()) {
      check(winnower_rank(project.get(), metric.c_str(), seed_manifest.c_str(), per_seed, &out));
    } else if (winnow->parsed()) {
      check(winnower_winnow(project.get(), winnow_round,
                            winnow_metric ? winnow_metric->c_str() : nullptr, percentile, &out));
    } else if (sample->parsed()) {
      check(winnower_sample(project.get(), sample_round, bands ? bands->c_str() : nullptr, k,
                            rng_seed, &out));
    } else if (label->parsed()) {
      check(winnower_label_file(project.get(), label_round, label_file.c_str(), &out));
    } else if (hit->parsed()) {
      double rate = 0;
      check(winnower_hit_rate(project.get(), hit_round, &rate));
      std::cout << shortest(rate) << "\n";
      return 0;
    } else if (reseed->parsed()) {
      check(winnower_reseed(project.get(), reseed_round,
                            reseed_metric ? reseed_metric->c_str() : nullptr, &out));
    } else if (topics->parsed()) {
      if (names_file) {
        check(winnower_name_topics(project.get(), topics_round, names_file->c_str(), &out));
      } else {
        json o = json::object();
        if (scope) o["scope"] = *scope;
        if (num_topics) o["num_topics"] = *num_topics;
        if (alpha) o["alpha"] = *alpha;
        if (beta) o["beta"] = *beta;
        if (iterations) o["iterations"] = *iterations;
        if (topic_seed) o["rng_seed"] = *topic_seed;
        check(winnower_topics(project.get(), topics_round, o.dump().c_str(), &out));
      }
    } else if (report->parsed()) {
      json o = json::object();
      if (bins) o["bins"] = *bins;
      if (report_pct) o["percentile"] = *report_pct;
      if (seed_ref) o["seed_ref"] = *seed_ref;
      if (top_n) o["n"] = *top_n;
      if (report_scope) o["scope"] = *report_scope;
      check(winnower_report(project.get(), report_round, kind.c_str(), o.dump().c_str(), &out));
      const std::string text = take(out);
      if (out_file) {
        std::ofstream f(*out_file, std::ios::binary | std::ios::trunc);
        f << text;
        if (!f.flush()) throw Failure{WINNOWER_ERR_IO, "cannot write " + *out_file};
      } else {
        std::cout << text;
      }
      return 0;
    } else if (serve->parsed()) {
      winnower_server* server = nullptr;
      check(winnower_server_start(project.get(), host.c_str(), port,
                                  static_dir ? static_dir->c_str() : nullptr, &server));
      std::cout << json{{"host", host}, {"port", winnower_server_port(server)},
                        {"version", winnower_version()}}.dump()
                << std::endl;
      winnower_server_wait(server);
      winnower_server_stop(server);
      return 0;
    }
    std::cout << take(out) << "\n";
    return 0;
  } catch (const Failure& f) {
    std::cerr << "error\t" << winnower_status_string(f.status) << "\t" << one_line(f.message) << "\n";
    return static_cast<int>(f.status);
  }
}
