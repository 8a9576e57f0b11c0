#ifndef WINNOWER_WINNOWER_H
#define WINNOWER_WINNOWER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WINNOWER_API __declspec(dllexport)
#else
#define WINNOWER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  WINNOWER_OK = 0,
  WINNOWER_ERR_INVALID_ARGUMENT = 1,
  WINNOWER_ERR_NOT_FOUND = 2,
  WINNOWER_ERR_CONFLICT = 3,
  WINNOWER_ERR_IO = 4,
  WINNOWER_ERR_PARSE = 5,
  WINNOWER_ERR_STATE = 6,
  WINNOWER_ERR_LOCKED = 7,
  WINNOWER_ERR_INTERNAL = 8
} winnower_status;

typedef struct winnower_project winnower_project;
typedef struct winnower_server winnower_server;
typedef struct winnower_distribution winnower_distribution;

/* Message of the last failed call on this thread; "" after success. */
WINNOWER_API const char* winnower_last_error(void);
/* "ok", "invalid_argument", "not_found", ... */
WINNOWER_API const char* winnower_status_string(winnower_status status);
WINNOWER_API const char* winnower_version(void);
/* Frees strings returned through char** out parameters. */
WINNOWER_API void winnower_free_string(char* s);

/* options_json may be NULL. Keys: lowercase, strip_punctuation,
   min_token_length, reducer, epsilon, vocabulary_mode, num_topics, alpha,
   beta, iterations, lda_seed, bins, samples_per_band, bands, stopwords,
   lemmas. */
WINNOWER_API winnower_status winnower_project_init(const char* root,
                                                   const char* options_json);
WINNOWER_API winnower_status winnower_project_open(const char* root,
                                                   winnower_project** out);
WINNOWER_API void winnower_project_close(winnower_project* project);

/* Every char** out receives a JSON document unless noted. round_id 0 means
   the newest round. */
WINNOWER_API winnower_status winnower_ingest(winnower_project* project,
                                             const char* manifest, char** out);
WINNOWER_API winnower_status winnower_rank(winnower_project* project,
                                           const char* metric,
                                           const char* seed_manifest,
                                           int per_seed, char** out);
/* metric may be NULL to keep the round's metric. */
WINNOWER_API winnower_status winnower_winnow(winnower_project* project,
                                             int round_id, const char* metric,
                                             double percentile, char** out);
/* bands ("0-1,1-5,5-25") may be NULL and k_per_band <= 0 for the project
   defaults. */
WINNOWER_API winnower_status winnower_sample(winnower_project* project,
                                             int round_id, const char* bands,
                                             int k_per_band, uint64_t rng_seed,
                                             char** out);
/* labels_tsv: doc_id, 0|1, annotator, ISO-8601 timestamp per line. */
WINNOWER_API winnower_status winnower_label_file(winnower_project* project,
                                                 int round_id,
                                                 const char* labels_tsv,
                                                 char** out);
WINNOWER_API winnower_status winnower_hit_rate(winnower_project* project,
                                               int round_id, double* out);
WINNOWER_API winnower_status winnower_reseed(winnower_project* project,
                                             int round_id, const char* metric,
                                             char** out);
/* options_json may be NULL. Keys: num_topics, alpha, beta, iterations,
   rng_seed, scope (derived|parent|seed). */
WINNOWER_API winnower_status winnower_topics(winnower_project* project,
                                             int round_id,
                                             const char* options_json,
                                             char** out);
/* names_tsv: topic_id<TAB>name per line. */
WINNOWER_API winnower_status winnower_name_topics(winnower_project* project,
                                                  int round_id,
                                                  const char* names_tsv,
                                                  char** out);
/* kind: histogram, year-series, ngrams, topics. out receives TSV text.
   options_json keys: bins, percentile, seed_ref, n, scope. */
WINNOWER_API winnower_status winnower_report(winnower_project* project,
                                             int round_id, const char* kind,
                                             const char* options_json,
                                             char** out);
WINNOWER_API winnower_status winnower_rounds(winnower_project* project,
                                             char** out);
WINNOWER_API winnower_status winnower_round(winnower_project* project,
                                            int round_id, char** out);
WINNOWER_API winnower_status winnower_queue(winnower_project* project,
                                            int round_id, char** out);

/* port 0 picks a free port. static_dir may be NULL. The project must outlive
   the server. */
WINNOWER_API winnower_status winnower_server_start(winnower_project* project,
                                                   const char* host, int port,
                                                   const char* static_dir,
                                                   winnower_server** out);
WINNOWER_API int winnower_server_port(const winnower_server* server);
WINNOWER_API void winnower_server_wait(winnower_server* server);
/* Stops and frees. */
WINNOWER_API void winnower_server_stop(winnower_server* server);

/* Distribution from raw word counts. ids need not be sorted; zero counts
   are ignored. */
WINNOWER_API winnower_status winnower_distribution_from_counts(
    const uint32_t* ids, const double* counts, size_t n,
    winnower_distribution** out);
WINNOWER_API void winnower_distribution_free(winnower_distribution* dist);
WINNOWER_API size_t winnower_distribution_support(
    const winnower_distribution* dist);
/* metric: kld, skld, jsd. Union-of-pair smoothing with the given epsilon. */
WINNOWER_API winnower_status winnower_divergence(
    const char* metric, const winnower_distribution* seed,
    const winnower_distribution* doc, double epsilon, double* out);

#ifdef __cplusplus
}
#endif

#endif
