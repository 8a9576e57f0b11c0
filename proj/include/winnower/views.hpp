#pragma once

// JSON renderings shared by the C API and the review service, so both expose
// identical field names.

#include "json.hpp"
#include "winnower/project.hpp"

namespace winnower {

nlohmann::json round_summary_json(const Round& round);
nlohmann::json round_detail_json(const Round& round);
nlohmann::json tranches_json(const std::vector<Tranche>& tranches);
nlohmann::json label_json(const Label& label);
nlohmann::json label_report_json(const LabelReport& report);
nlohmann::json queue_json(const std::vector<QueueItem>& items);
nlohmann::json ingest_summary_json(const IngestSummary& summary);
nlohmann::json topic_summaries_json(const std::vector<TopicSummary>& summaries);

// Fields missing from `j` keep the values already in `options`.
void apply_init_options(const nlohmann::json& j, InitOptions& options);
void apply_report_options(const nlohmann::json& j, ReportOptions& options);
void apply_lda_options(const nlohmann::json& j, LdaConfig& config,
                       TopicScope& scope);

}  // namespace winnower
