#include "winnower/review_api.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <future>
#include <map>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "winnower/error.hpp"
#include "winnower/io.hpp"
#include "winnower/views.hpp"

namespace winnower {
using nlohmann::json;

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kState:
      return 409;
    case ErrorCode::kLocked:
      return 423;
    case ErrorCode::kIo:
    case ErrorCode::kInternal:
      return 500;
  }
  return 500;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, status, {{"code", code}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed JSON body: ") + e.what());
  }
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

int round_param(const httplib::Request& req) {
  return static_cast<int>(parse_int(req.matches[1].str()));
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), error_code_name(e.code()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "invalid_argument", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

struct Job {
  int id = 0;
  std::string kind;
  int round_id = 0;
  std::string status = "running";
  json result;
  json error;
  std::shared_future<void> done;
};

}  // namespace

struct ReviewServer::Impl {
  Project& project;
  ServerOptions options;
  httplib::Server server;
  std::thread thread;
  int bound_port = -1;

  std::mutex jobs_mutex;
  std::map<int, std::shared_ptr<Job>> jobs;
  int next_job = 1;

  Impl(Project& p, ServerOptions o) : project(p), options(std::move(o)) {}

  json job_json(const Job& job) {
    std::lock_guard<std::mutex> lock(jobs_mutex);
    json j = {{"job_id", job.id}, {"kind", job.kind}, {"round_id", job.round_id},
              {"status", job.status}};
    if (job.status == "done") j["result"] = job.result;
    if (job.status == "failed") j["error"] = job.error;
    return j;
  }

  std::shared_ptr<Job> launch(std::string kind, int round_id, std::function<json()> work) {
    auto job = std::make_shared<Job>();
    job->kind = std::move(kind);
    job->round_id = round_id;
    {
      std::lock_guard<std::mutex> lock(jobs_mutex);
      job->id = next_job++;
      jobs[job->id] = job;
    }
    job->done = std::async(std::launch::async, [this, job, work = std::move(work)] {
      json result;
      json error;
      try {
        result = work();
      } catch (const Error& e) {
        error = {{"code", error_code_name(e.code())}, {"message", e.what()}};
      } catch (const std::exception& e) {
        error = {{"code", "internal"}, {"message", e.what()}};
      }
      std::lock_guard<std::mutex> lock(jobs_mutex);
      if (error.is_null()) {
        job->status = "done";
        job->result = std::move(result);
      } else {
        job->status = "failed";
        job->error = std::move(error);
      }
    }).share();
    return job;
  }

  // ?wait=1 blocks until the job finishes and answers with its final state.
  void respond_job(const httplib::Request& req, httplib::Response& res,
                   const std::shared_ptr<Job>& job) {
    const bool wait = req.has_param("wait") && req.get_param_value("wait") != "0";
    if (!wait) {
      send_json(res, 202, job_json(*job));
      return;
    }
    job->done.wait();
    json j = job_json(*job);
    if (job->status == "failed") {
      const auto code = j["error"]["code"].get<std::string>();
      int status = 500;
      for (int c = 1; c <= 8; ++c) {
        if (code == error_code_name(static_cast<ErrorCode>(c))) {
          status = http_status(static_cast<ErrorCode>(c));
        }
      }
      send_json(res, status, j["error"]);
      return;
    }
    send_json(res, 200, j);
  }

  void routes();
};

void ReviewServer::Impl::routes() {
  using Req = httplib::Request;
  using Res = httplib::Response;

  server.Get("/rounds", guarded([this](const Req&, Res& res) {
    std::shared_lock lock(project.mutex());
    json rounds = json::array();
    for (const int id : project.round_ids()) {
      rounds.push_back(round_summary_json(project.load_round(id)));
    }
    send_json(res, 200, {{"rounds", rounds}});
  }));

  server.Get(R"(/rounds/(\d+))", guarded([this](const Req& req, Res& res) {
    std::shared_lock lock(project.mutex());
    send_json(res, 200, round_detail_json(project.load_round(round_param(req))));
  }));

  server.Get(R"(/rounds/(\d+)/queue)", guarded([this](const Req& req, Res& res) {
    std::shared_lock lock(project.mutex());
    const int id = project.resolve_round(round_param(req));
    send_json(res, 200, {{"round_id", id}, {"items", queue_json(project.queue(id))}});
  }));

  server.Get(R"(/rounds/(\d+)/hit-rate)", guarded([this](const Req& req, Res& res) {
    std::shared_lock lock(project.mutex());
    const Round r = project.load_round(round_param(req));
    const auto effective = r.effective();
    const auto relevant = std::count_if(effective.begin(), effective.end(),
                                        [](const Label& l) { return l.relevant; });
    send_json(res, 200, {{"round_id", r.round_id},
                         {"labeled", effective.size()},
                         {"relevant", relevant},
                         {"hit_rate", hit_rate(effective)}});
  }));

  server.Get(R"(/documents/([^/]+))", guarded([this](const Req& req, Res& res) {
    std::shared_lock lock(project.mutex());
    const Corpus& corpus = project.corpus();
    const Document& doc = corpus.at(req.matches[1].str());
    res.set_header("X-Document-Title", doc.title);
    res.set_header("X-Document-Year", std::to_string(doc.year));
    res.status = 200;
    res.set_content(corpus.text(doc), "text/plain; charset=utf-8");
  }));

  server.Post(R"(/rounds/(\d+)/labels)", guarded([this](const Req& req, Res& res) {
    const json body = parse_body(req);
    const std::string header_annotator = req.get_header_value("X-Annotator");
    std::vector<Label> labels;
    auto read_label = [&](const json& j) {
      if (!j.is_object() || !j.contains("doc_id") || !j["doc_id"].is_string() ||
          !j.contains("relevant") || !j["relevant"].is_boolean()) {
        fail(ErrorCode::kInvalidArgument, "label needs doc_id (string) and relevant (boolean)");
      }
      Label l;
      l.doc_id = j["doc_id"].get<std::string>();
      l.relevant = j["relevant"].get<bool>();
      l.annotator = j.value("annotator", header_annotator);
      if (l.annotator.empty()) fail(ErrorCode::kInvalidArgument, "annotator is required");
      if (l.annotator.find_first_of("\t\r\n") != std::string::npos ||
          l.doc_id.find_first_of("\t\r\n") != std::string::npos) {
        fail(ErrorCode::kInvalidArgument, "fields cannot contain tabs or newlines");
      }
      l.timestamp = j.value("timestamp", utc_now());
      timestamp_seconds(l.timestamp);
      labels.push_back(std::move(l));
    };
    if (body.contains("labels")) {
      if (!body["labels"].is_array()) fail(ErrorCode::kInvalidArgument, "labels must be an array");
      for (const auto& j : body["labels"]) read_label(j);
    } else {
      read_label(body);
    }

    std::unique_lock lock(project.mutex());
    const int id = project.resolve_round(round_param(req));
    const LabelReport report = project.label(id, labels);
    if (report.accepted == 0 && !report.rejected.empty()) {
      send_error(res, 409, "conflict", report.rejected.front().reason);
      return;
    }
    json body_out = label_report_json(report);
    json effective = json::array();
    const Round r = project.load_round(id);
    for (const auto& l : r.effective()) {
      for (const auto& posted : labels) {
        if (posted.doc_id == l.doc_id) {
          effective.push_back(label_json(l));
          break;
        }
      }
    }
    body_out["effective"] = effective;
    body_out["round"] = round_summary_json(r);
    send_json(res, 200, body_out);
  }));

  server.Post(R"(/rounds/(\d+)/sample)", guarded([this](const Req& req, Res& res) {
    const json body = parse_body(req);
    std::unique_lock lock(project.mutex());
    const auto bands = body.contains("bands")
                           ? parse_bands(body["bands"].get<std::string>())
                           : project.config().bands;
    const int k = body.value("k", project.config().samples_per_band);
    const auto seed = body.value("rng_seed", std::uint64_t{0});
    const Round r = project.sample(round_param(req), bands, k, seed);
    send_json(res, 200, round_detail_json(r));
  }));

  server.Post(R"(/rounds/(\d+)/reseed)", guarded([this](const Req& req, Res& res) {
    const json body = parse_body(req);
    std::optional<Metric> metric;
    if (body.contains("metric")) metric = parse_metric(body["metric"].get<std::string>());
    std::unique_lock lock(project.mutex());
    const Round r = project.reseed(round_param(req), metric);
    send_json(res, 201, round_summary_json(r));
  }));

  server.Post(R"(/rounds/(\d+)/winnow)", guarded([this](const Req& req, Res& res) {
    const json body = parse_body(req);
    if (!body.contains("percentile") || !body["percentile"].is_number()) {
      fail(ErrorCode::kInvalidArgument, "percentile (number) is required");
    }
    const double percentile = body["percentile"].get<double>();
    std::optional<Metric> metric;
    if (body.contains("metric")) metric = parse_metric(body["metric"].get<std::string>());
    int id = 0;
    {
      std::shared_lock lock(project.mutex());
      id = project.resolve_round(round_param(req));
    }
    auto job = launch("winnow", id, [this, id, metric, percentile] {
      std::unique_lock lock(project.mutex());
      return round_summary_json(project.winnow(id, metric, percentile));
    });
    respond_job(req, res, job);
  }));

  server.Post(R"(/rounds/(\d+)/topics)", guarded([this](const Req& req, Res& res) {
    const json body = parse_body(req);
    LdaConfig lda = project.config().lda;
    TopicScope scope = TopicScope::kDerived;
    apply_lda_options(body, lda, scope);
    int id = 0;
    {
      std::shared_lock lock(project.mutex());
      id = project.resolve_round(round_param(req));
    }
    auto job = launch("topics", id, [this, id, scope, lda] {
      std::unique_lock lock(project.mutex());
      return json{{"round_id", id},
                  {"rng_seed", lda.rng_seed},
                  {"topics", topic_summaries_json(project.train_topics(id, scope, lda))}};
    });
    respond_job(req, res, job);
  }));

  server.Post(R"(/rounds/(\d+)/topics/names)", guarded([this](const Req& req, Res& res) {
    const json body = parse_body(req);
    std::map<int, std::string> names;
    if (body.contains("names")) {
      if (!body["names"].is_object()) fail(ErrorCode::kInvalidArgument, "names must be an object");
      for (const auto& [k, v] : body["names"].items()) {
        names[static_cast<int>(parse_int(k))] = v.get<std::string>();
      }
    } else {
      if (!body.contains("topic_id") || !body.contains("name")) {
        fail(ErrorCode::kInvalidArgument, "expected topic_id and name");
      }
      names[body["topic_id"].get<int>()] = body["name"].get<std::string>();
    }
    std::unique_lock lock(project.mutex());
    const int id = project.resolve_round(round_param(req));
    project.name_topics(id, names);
    json out = json::object();
    for (const auto& [k, v] : project.topic_names(id)) out[std::to_string(k)] = v;
    send_json(res, 200, {{"round_id", id}, {"names", out}});
  }));

  server.Get(R"(/rounds/(\d+)/reports/([a-z-]+))", guarded([this](const Req& req, Res& res) {
    const std::string kind = req.matches[2].str();
    if (kind != "histogram" && kind != "year-series" && kind != "topics" && kind != "ngrams") {
      fail(ErrorCode::kNotFound, "unknown report " + kind);
    }
    ReportOptions options;
    if (req.has_param("bins")) options.bins = static_cast<int>(parse_int(req.get_param_value("bins")));
    if (req.has_param("percentile")) options.percentile = parse_double(req.get_param_value("percentile"));
    if (req.has_param("seed_ref")) options.seed_ref = req.get_param_value("seed_ref");
    if (req.has_param("n")) options.top_n = static_cast<std::size_t>(parse_int(req.get_param_value("n")));
    if (req.has_param("scope")) options.scope = parse_topic_scope(req.get_param_value("scope"));
    std::shared_lock lock(project.mutex());
    res.status = 200;
    res.set_content(project.report(round_param(req), kind, options),
                    "text/tab-separated-values; charset=utf-8");
  }));

  server.Get(R"(/jobs/(\d+))", guarded([this](const Req& req, Res& res) {
    std::shared_ptr<Job> job;
    {
      std::lock_guard<std::mutex> lock(jobs_mutex);
      auto it = jobs.find(static_cast<int>(parse_int(req.matches[1].str())));
      if (it == jobs.end()) fail(ErrorCode::kNotFound, "unknown job " + req.matches[1].str());
      job = it->second;
    }
    send_json(res, 200, job_json(*job));
  }));

  server.set_error_handler([](const Req& req, Res& res) {
    if (res.body.empty()) {
      send_error(res, res.status, res.status == 404 ? "not_found" : "http_error",
                 "no route for " + req.method + " " + req.path);
    }
  });
  server.set_post_routing_handler([](const Req&, Res& res) {
    res.set_header("X-Winnower-Version", kVersion);
  });
  if (options.static_dir) server.set_mount_point("/", options.static_dir->string());
}

ReviewServer::ReviewServer(Project& project, ServerOptions options)
    : impl_(std::make_unique<Impl>(project, std::move(options))) {
  impl_->routes();
}

ReviewServer::~ReviewServer() {
  stop();
  std::map<int, std::shared_ptr<Job>> jobs;
  {
    std::lock_guard<std::mutex> lock(impl_->jobs_mutex);
    jobs = impl_->jobs;
  }
  for (auto& [id, job] : jobs) job->done.wait();
}

int ReviewServer::start() {
  if (impl_->project.has_corpus()) impl_->project.corpus();
  auto& server = impl_->server;
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->bound_port = server.bind_to_any_port(o.host);
  } else {
    impl_->bound_port = server.bind_to_port(o.host, o.port) ? o.port : -1;
  }
  if (impl_->bound_port < 0) {
    fail(ErrorCode::kIo, "cannot bind " + o.host + ":" + std::to_string(o.port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  // stop() is a no-op until the listener is up
  impl_->server.wait_until_ready();
  return impl_->bound_port;
}

void ReviewServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void ReviewServer::stop() {
  impl_->server.stop();
  wait();
}

int ReviewServer::port() const { return impl_->bound_port; }

}  // namespace winnower
