#include "winnower/winnower.h"

#include <cstring>
#include <memory>

#include "json.hpp"
#include "winnower/error.hpp"
#include "winnower/io.hpp"
#include "winnower/project.hpp"
#include "winnower/review_api.hpp"
#include "winnower/views.hpp"

using nlohmann::json;
using namespace winnower;

struct winnower_project {
  std::unique_ptr<Project> project;
};

struct winnower_server {
  std::unique_ptr<ReviewServer> server;
};

struct winnower_distribution {
  WordDistribution dist;
};

namespace {

thread_local std::string last_error;

template <typename F>
winnower_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return WINNOWER_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<winnower_status>(e.code());
  } catch (const json::exception& e) {
    last_error = e.what();
    return WINNOWER_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return WINNOWER_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return WINNOWER_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

Project& need(winnower_project* p) {
  if (!p || !p->project) fail(ErrorCode::kInvalidArgument, "null project handle");
  return *p->project;
}

void need_arg(const void* ptr, const char* name) {
  if (!ptr) fail(ErrorCode::kInvalidArgument, std::string("null ") + name);
}

json parse_options(const char* text) {
  if (!text || !*text) return json::object();
  json j = json::parse(text);
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "options must be a JSON object");
  return j;
}

std::optional<Metric> optional_metric(const char* name) {
  if (!name || !*name) return std::nullopt;
  return parse_metric(name);
}

}  // namespace

extern "C" {

const char* winnower_last_error(void) { return last_error.c_str(); }

const char* winnower_status_string(winnower_status status) {
  if (status == WINNOWER_OK) return "ok";
  if (status < WINNOWER_ERR_INVALID_ARGUMENT || status > WINNOWER_ERR_INTERNAL) return "unknown";
  return error_code_name(static_cast<ErrorCode>(status));
}

const char* winnower_version(void) { return kVersion; }

void winnower_free_string(char* s) { std::free(s); }

winnower_status winnower_project_init(const char* root, const char* options_json) {
  return guard([&] {
    need_arg(root, "root");
    InitOptions options;
    apply_init_options(parse_options(options_json), options);
    Project::init(root, options);
  });
}

winnower_status winnower_project_open(const char* root, winnower_project** out) {
  return guard([&] {
    need_arg(root, "root");
    need_arg(out, "out");
    auto handle = std::make_unique<winnower_project>();
    handle->project = Project::open(root);
    *out = handle.release();
  });
}

void winnower_project_close(winnower_project* project) { delete project; }

winnower_status winnower_ingest(winnower_project* p, const char* manifest, char** out) {
  return guard([&] {
    need_arg(manifest, "manifest");
    auto& project = need(p);
    std::unique_lock lock(project.mutex());
    put(out, ingest_summary_json(project.ingest(manifest)).dump());
  });
}

winnower_status winnower_rank(winnower_project* p, const char* metric,
                              const char* seed_manifest, int per_seed, char** out) {
  return guard([&] {
    need_arg(metric, "metric");
    need_arg(seed_manifest, "seed manifest");
    auto& project = need(p);
    std::unique_lock lock(project.mutex());
    const Round r = project.rank(parse_metric(metric), seed_manifest, per_seed != 0);
    put(out, round_summary_json(r).dump());
  });
}

winnower_status winnower_winnow(winnower_project* p, int round_id, const char* metric,
                                double percentile, char** out) {
  return guard([&] {
    auto& project = need(p);
    std::unique_lock lock(project.mutex());
    put(out, round_summary_json(project.winnow(round_id, optional_metric(metric), percentile)).dump());
  });
}

winnower_status winnower_sample(winnower_project* p, int round_id, const char* bands,
                                int k_per_band, uint64_t rng_seed, char** out) {
  return guard([&] {
    auto& project = need(p);
    std::unique_lock lock(project.mutex());
    const auto b = bands && *bands ? parse_bands(bands) : project.config().bands;
    const int k = k_per_band > 0 ? k_per_band : project.config().samples_per_band;
    const Round r = project.sample(round_id, b, k, rng_seed);
    json j = round_summary_json(r);
    j["rng_seed"] = rng_seed;
    j["tranches"] = tranches_json(r.tranches);
    put(out, j.dump());
  });
}

winnower_status winnower_label_file(winnower_project* p, int round_id,
                                    const char* labels_tsv, char** out) {
  return guard([&] {
    need_arg(labels_tsv, "labels file");
    auto& project = need(p);
    std::unique_lock lock(project.mutex());
    const int id = project.resolve_round(round_id);
    const auto labels = parse_labels(read_file(labels_tsv), id);
    put(out, label_report_json(project.label(id, labels)).dump());
  });
}

winnower_status winnower_hit_rate(winnower_project* p, int round_id, double* out) {
  return guard([&] {
    need_arg(out, "out");
    auto& project = need(p);
    std::shared_lock lock(project.mutex());
    *out = project.hit_rate(round_id);
  });
}

winnower_status winnower_reseed(winnower_project* p, int round_id, const char* metric,
                                char** out) {
  return guard([&] {
    auto& project = need(p);
    std::unique_lock lock(project.mutex());
    put(out, round_summary_json(project.reseed(round_id, optional_metric(metric))).dump());
  });
}

winnower_status winnower_topics(winnower_project* p, int round_id,
                                const char* options_json, char** out) {
  return guard([&] {
    auto& project = need(p);
    LdaConfig lda = project.config().lda;
    TopicScope scope = TopicScope::kDerived;
    apply_lda_options(parse_options(options_json), lda, scope);
    std::unique_lock lock(project.mutex());
    const int id = project.resolve_round(round_id);
    const auto topics = project.train_topics(id, scope, lda);
    put(out, json({{"round_id", id},
                   {"rng_seed", lda.rng_seed},
                   {"num_topics", lda.num_topics},
                   {"scope", topic_scope_name(scope)},
                   {"topics", topic_summaries_json(topics)}})
                 .dump());
  });
}

winnower_status winnower_name_topics(winnower_project* p, int round_id,
                                     const char* names_tsv, char** out) {
  return guard([&] {
    need_arg(names_tsv, "names file");
    auto& project = need(p);
    std::unique_lock lock(project.mutex());
    const int id = project.resolve_round(round_id);
    project.name_topics(id, parse_topic_names(read_file(names_tsv)));
    json names = json::object();
    for (const auto& [k, v] : project.topic_names(id)) names[std::to_string(k)] = v;
    put(out, json({{"round_id", id}, {"names", names}}).dump());
  });
}

winnower_status winnower_report(winnower_project* p, int round_id, const char* kind,
                                const char* options_json, char** out) {
  return guard([&] {
    need_arg(kind, "kind");
    auto& project = need(p);
    ReportOptions options;
    apply_report_options(parse_options(options_json), options);
    std::shared_lock lock(project.mutex());
    put(out, project.report(round_id, kind, options));
  });
}

winnower_status winnower_rounds(winnower_project* p, char** out) {
  return guard([&] {
    auto& project = need(p);
    std::shared_lock lock(project.mutex());
    json rounds = json::array();
    for (const int id : project.round_ids()) rounds.push_back(round_summary_json(project.load_round(id)));
    put(out, json({{"rounds", rounds}}).dump());
  });
}

winnower_status winnower_round(winnower_project* p, int round_id, char** out) {
  return guard([&] {
    auto& project = need(p);
    std::shared_lock lock(project.mutex());
    put(out, round_detail_json(project.load_round(round_id)).dump());
  });
}

winnower_status winnower_queue(winnower_project* p, int round_id, char** out) {
  return guard([&] {
    auto& project = need(p);
    std::shared_lock lock(project.mutex());
    const int id = project.resolve_round(round_id);
    put(out, json({{"round_id", id}, {"items", queue_json(project.queue(id))}}).dump());
  });
}

winnower_status winnower_server_start(winnower_project* p, const char* host, int port,
                                      const char* static_dir, winnower_server** out) {
  return guard([&] {
    need_arg(out, "out");
    auto& project = need(p);
    if (port < 0 || port > 65535) fail(ErrorCode::kInvalidArgument, "port out of range");
    ServerOptions options;
    if (host && *host) options.host = host;
    options.port = port;
    if (static_dir && *static_dir) options.static_dir = static_dir;
    auto handle = std::make_unique<winnower_server>();
    handle->server = std::make_unique<ReviewServer>(project, options);
    handle->server->start();
    *out = handle.release();
  });
}

int winnower_server_port(const winnower_server* server) {
  return server ? server->server->port() : -1;
}

void winnower_server_wait(winnower_server* server) {
  if (server) server->server->wait();
}

void winnower_server_stop(winnower_server* server) { delete server; }

winnower_status winnower_distribution_from_counts(const uint32_t* ids, const double* counts,
                                                  size_t n, winnower_distribution** out) {
  return guard([&] {
    need_arg(out, "out");
    if (n > 0) {
      need_arg(ids, "ids");
      need_arg(counts, "counts");
    }
    SparseCounts c;
    c.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      if (!(counts[i] >= 0)) fail(ErrorCode::kInvalidArgument, "counts must be non-negative");
      c.emplace_back(ids[i], counts[i]);
    }
    auto handle = std::make_unique<winnower_distribution>();
    handle->dist = build_distribution(c);
    *out = handle.release();
  });
}

void winnower_distribution_free(winnower_distribution* dist) { delete dist; }

size_t winnower_distribution_support(const winnower_distribution* dist) {
  return dist ? dist->dist.support_size() : 0;
}

winnower_status winnower_divergence(const char* metric, const winnower_distribution* seed,
                                    const winnower_distribution* doc, double epsilon,
                                    double* out) {
  return guard([&] {
    need_arg(metric, "metric");
    need_arg(seed, "seed");
    need_arg(doc, "doc");
    need_arg(out, "out");
    if (!(epsilon > 0)) fail(ErrorCode::kInvalidArgument, "epsilon must be positive");
    SmoothingConfig config;
    config.epsilon = epsilon;
    *out = divergence(parse_metric(metric), seed->dist, doc->dist, config);
  });
}

}  // extern "C"
