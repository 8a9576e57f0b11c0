#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "fixtures.hpp"
#include "json.hpp"
#include "winnower/winnower.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  winnower_free_string(s);
  return out;
}

json take_json(char* s) { return json::parse(take(s)); }

}  // namespace

TEST(CApi, StatusStrings) {
  EXPECT_STREQ(winnower_status_string(WINNOWER_OK), "ok");
  EXPECT_STREQ(winnower_status_string(WINNOWER_ERR_NOT_FOUND), "not_found");
  EXPECT_STREQ(winnower_status_string(WINNOWER_ERR_LOCKED), "locked");
  EXPECT_STREQ(winnower_status_string(static_cast<winnower_status>(99)), "unknown");
  EXPECT_STRNE(winnower_version(), "");
}

TEST(CApi, ErrorsReportedNotThrown) {
  winnower_project* p = nullptr;
  EXPECT_EQ(winnower_project_open("/nonexistent/winnower", &p), WINNOWER_ERR_NOT_FOUND);
  EXPECT_EQ(p, nullptr);
  EXPECT_NE(std::string(winnower_last_error()).find("no project"), std::string::npos);
  EXPECT_EQ(winnower_project_open(nullptr, &p), WINNOWER_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(winnower_ingest(nullptr, "x", nullptr), WINNOWER_ERR_INVALID_ARGUMENT);
  fixtures::TempDir dir;
  EXPECT_EQ(winnower_project_init((dir / "p").c_str(), "{not json"), WINNOWER_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(winnower_project_init((dir / "p").c_str(), "{\"reducer\":\"magic\"}"),
            WINNOWER_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(winnower_project_init((dir / "p").c_str(), nullptr), WINNOWER_OK);
  EXPECT_STREQ(winnower_last_error(), "");
}

TEST(CApi, Distributions) {
  const uint32_t ids_p[] = {0, 1};
  const double counts_p[] = {8, 2};
  const uint32_t ids_q[] = {1, 0};
  const double counts_q[] = {5, 5};
  winnower_distribution *p = nullptr, *q = nullptr;
  ASSERT_EQ(winnower_distribution_from_counts(ids_p, counts_p, 2, &p), WINNOWER_OK);
  ASSERT_EQ(winnower_distribution_from_counts(ids_q, counts_q, 2, &q), WINNOWER_OK);
  EXPECT_EQ(winnower_distribution_support(p), 2u);
  double v = -1;
  ASSERT_EQ(winnower_divergence("kld", p, q, 0.5, &v), WINNOWER_OK);
  EXPECT_NEAR(v, 0.19274, 1e-4);
  ASSERT_EQ(winnower_divergence("kld", q, p, 0.5, &v), WINNOWER_OK);
  EXPECT_NEAR(v, 0.22314, 1e-4);
  ASSERT_EQ(winnower_divergence("skld", p, q, 0.5, &v), WINNOWER_OK);
  EXPECT_NEAR(v, 0.41589, 1e-4);
  ASSERT_EQ(winnower_divergence("jsd", p, p, 0.5, &v), WINNOWER_OK);
  EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_EQ(winnower_divergence("cosine", p, q, 0.5, &v), WINNOWER_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(winnower_divergence("kld", p, q, 0.0, &v), WINNOWER_ERR_INVALID_ARGUMENT);
  winnower_distribution* empty = nullptr;
  const double zero[] = {0};
  EXPECT_NE(winnower_distribution_from_counts(ids_p, zero, 1, &empty), WINNOWER_OK);
  winnower_distribution_free(p);
  winnower_distribution_free(q);
}

TEST(CApi, Workflow) {
  fixtures::TempDir dir;
  const auto data = fixtures::loop_fixture();
  fixtures::write_manifest(dir / "m.jsonl", data.corpus);
  fixtures::write_manifest(dir / "s.jsonl", data.seeds);
  const std::string root = (dir / "p").string();
  ASSERT_EQ(winnower_project_init(root.c_str(), "{\"num_topics\":3,\"iterations\":20}"), WINNOWER_OK);
  winnower_project* p = nullptr;
  ASSERT_EQ(winnower_project_open(root.c_str(), &p), WINNOWER_OK);
  winnower_project* second = nullptr;
  EXPECT_EQ(winnower_project_open(root.c_str(), &second), WINNOWER_ERR_LOCKED);

  char* out = nullptr;
  ASSERT_EQ(winnower_ingest(p, (dir / "m.jsonl").c_str(), &out), WINNOWER_OK);
  EXPECT_EQ(take_json(out)["documents"], 500);
  ASSERT_EQ(winnower_rank(p, "jsd", (dir / "s.jsonl").c_str(), 0, &out), WINNOWER_OK);
  EXPECT_EQ(take_json(out)["status"], "scored");
  ASSERT_EQ(winnower_winnow(p, 0, nullptr, 25, &out), WINNOWER_OK);
  EXPECT_EQ(take_json(out)["survivors"], 125);
  ASSERT_EQ(winnower_sample(p, 1, nullptr, 0, 11, &out), WINNOWER_OK);
  const json sampled = take_json(out);
  EXPECT_EQ(sampled["rng_seed"], 11);
  EXPECT_EQ(sampled["tranches"].size(), 3u);

  std::string tsv;
  for (const auto& t : sampled["tranches"]) {
    for (const auto& id : t["doc_ids"]) {
      const std::string s = id.get<std::string>();
      tsv += s + "\t" + (data.relevant.count(s) ? "1" : "0") + "\tauto\t2024-01-01T00:00:00Z\n";
    }
  }
  fixtures::write_text(dir / "labels.tsv", tsv);
  ASSERT_EQ(winnower_label_file(p, 1, (dir / "labels.tsv").c_str(), &out), WINNOWER_OK);
  EXPECT_EQ(take_json(out)["accepted"], 45);
  double rate = 0;
  ASSERT_EQ(winnower_hit_rate(p, 1, &rate), WINNOWER_OK);
  EXPECT_GT(rate, 0.0);

  ASSERT_EQ(winnower_topics(p, 1, nullptr, &out), WINNOWER_OK);
  const json topics = take_json(out);
  EXPECT_EQ(topics["topics"].size(), 3u);
  EXPECT_EQ(topics["rng_seed"], 0);
  fixtures::write_text(dir / "names.tsv", "0\tProperty\n");
  ASSERT_EQ(winnower_name_topics(p, 1, (dir / "names.tsv").c_str(), &out), WINNOWER_OK);
  EXPECT_EQ(take_json(out)["names"]["0"], "Property");
  ASSERT_EQ(winnower_report(p, 1, "topics", nullptr, &out), WINNOWER_OK);
  EXPECT_NE(take(out).find("Property"), std::string::npos);
  ASSERT_EQ(winnower_report(p, 1, "histogram", "{\"bins\":4}", &out), WINNOWER_OK);
  EXPECT_EQ(take(out).substr(0, 12), "# jsd pooled");

  ASSERT_EQ(winnower_reseed(p, 1, "kld", &out), WINNOWER_OK);
  const json r2 = take_json(out);
  EXPECT_EQ(r2["round_id"], 2);
  EXPECT_EQ(r2["metric"], "kld");
  ASSERT_EQ(winnower_rounds(p, &out), WINNOWER_OK);
  EXPECT_EQ(take_json(out)["rounds"].size(), 2u);
  ASSERT_EQ(winnower_round(p, 1, &out), WINNOWER_OK);
  EXPECT_EQ(take_json(out)["status"], "closed");
  ASSERT_EQ(winnower_queue(p, 1, &out), WINNOWER_OK);
  EXPECT_EQ(take_json(out)["items"].size(), 45u);
  EXPECT_EQ(winnower_label_file(p, 1, (dir / "labels.tsv").c_str(), &out), WINNOWER_ERR_CONFLICT);
  EXPECT_EQ(winnower_report(p, 9, "histogram", nullptr, &out), WINNOWER_ERR_NOT_FOUND);
  winnower_project_close(p);
}

TEST(CApi, ServerLifecycle) {
  fixtures::TempDir dir;
  const std::string root = (dir / "p").string();
  ASSERT_EQ(winnower_project_init(root.c_str(), nullptr), WINNOWER_OK);
  winnower_project* p = nullptr;
  ASSERT_EQ(winnower_project_open(root.c_str(), &p), WINNOWER_OK);
  winnower_server* s = nullptr;
  ASSERT_EQ(winnower_server_start(p, "127.0.0.1", 0, nullptr, &s), WINNOWER_OK);
  EXPECT_GT(winnower_server_port(s), 0);
  EXPECT_EQ(winnower_server_start(p, "127.0.0.1", 70000, nullptr, &s), WINNOWER_ERR_INVALID_ARGUMENT);
  winnower_server_stop(s);
  winnower_project_close(p);
}
