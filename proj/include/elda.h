/* Copyright 2026 The Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API for the elda engine: sparse MAP topic-word assignment by monotone
 * submodular maximization. Objects are opaque handles created and destroyed
 * here; every function returns an elda_status, with details available from
 * elda_last_error_message() (thread-local).
 */

#ifndef ELDA_H_
#define ELDA_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ELDA_API __declspec(dllexport)
#else
#define ELDA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct elda_corpus elda_corpus;
typedef struct elda_topics elda_topics;
typedef struct elda_solution elda_solution;

typedef enum elda_status {
  ELDA_OK = 0,
  ELDA_ERR_INVALID_ARGUMENT = 1,
  ELDA_ERR_FORMAT = 2,
  ELDA_ERR_EMPTY_CORPUS = 3,
  ELDA_ERR_IO = 4,
  ELDA_ERR_INTERNAL = 5
} elda_status;

typedef enum elda_algorithm {
  ELDA_ALG_SIMPLE = 0,
  ELDA_ALG_FASTGREEDY = 1,
  ELDA_ALG_LTLG = 2,
  ELDA_ALG_FAST = 3
} elda_algorithm;

typedef enum elda_generator {
  ELDA_GEN_UMASS = 0,
  ELDA_GEN_EXP_UMASS = 1,
  ELDA_GEN_COOCCURRENCE = 2
} elda_generator;

typedef enum elda_popularity {
  ELDA_POPULARITY_AUTO = 0,    /* weighted iff the topics carry weights */
  ELDA_POPULARITY_UNIFORM = 1,
  ELDA_POPULARITY_WEIGHTED = 2
} elda_popularity;

typedef struct elda_tokenizer_options {
  int lowercase;                 /* nonzero to lowercase ASCII */
  const char* stopword_file;     /* NULL for none */
  int32_t min_doc_freq;          /* >= 1 */
  double max_doc_freq_fraction;  /* in (0, 1] */
} elda_tokenizer_options;

typedef struct elda_ingest_stats {
  int64_t docs_in;
  int64_t docs_kept;
  int64_t docs_dropped;
  int64_t tokens_kept;
  int64_t words_removed_by_freq;
} elda_ingest_stats;

typedef struct elda_generator_options {
  elda_generator mode;
  double epsilon;            /* <= 0 for the mode default */
  const char* keyword_file;  /* NULL for every vocabulary word */
} elda_generator_options;

typedef struct elda_fit_options {
  elda_algorithm algorithm;
  double kappa;
  uint64_t seed;
  double epsilon;            /* ltlg / fast accuracy parameter; <= 0 default */
  double delta;              /* fast failure probability; <= 0 default */
  int64_t sample_m;          /* fast sample size override; <= 0 formula */
  double placeholder_log_p;  /* 0 for the default log(1e-10) */
  elda_popularity popularity;
  int lazy_word_skip;        /* nonzero enables exact word skipping */
} elda_fit_options;

typedef struct elda_link_info {
  int64_t step;      /* 1-based greedy order */
  int32_t doc;       /* document index */
  int32_t topic;     /* topic index */
  double marginal;
  double objective;  /* cumulative */
} elda_link_info;

typedef struct elda_oos_options {
  int32_t default_kappa_d;  /* used when a record has no kappa_d; <= 0 = none */
  int lowercase;            /* tokenizer for "text" records */
} elda_oos_options;

typedef struct elda_oos_stats {
  int64_t docs;
  int64_t oov_dropped;
} elda_oos_stats;

ELDA_API const char* elda_version(void);
ELDA_API const char* elda_last_error_message(void);
ELDA_API elda_tokenizer_options elda_tokenizer_options_default(void);
ELDA_API elda_generator_options elda_generator_options_default(void);
ELDA_API elda_fit_options elda_fit_options_default(void);

/* ---- corpus ---- */
ELDA_API elda_status elda_corpus_ingest_file(
    const char* jsonl_path, const elda_tokenizer_options* options,
    elda_corpus** out, elda_ingest_stats* stats /* may be NULL */);
ELDA_API elda_status elda_corpus_load(const char* corpus_path,
                                      const char* vocab_path,
                                      elda_corpus** out);
ELDA_API elda_status elda_corpus_save(const elda_corpus* corpus,
                                      const char* corpus_path,
                                      const char* vocab_path);
ELDA_API int32_t elda_corpus_num_docs(const elda_corpus* corpus);
ELDA_API int32_t elda_corpus_vocab_size(const elda_corpus* corpus);
ELDA_API void elda_corpus_free(elda_corpus* corpus);

/* ---- topics ---- */
ELDA_API elda_status elda_topics_generate(const elda_corpus* corpus,
                                          const elda_generator_options* options,
                                          elda_topics** out);
ELDA_API elda_status elda_topics_import(const char* path,
                                        int32_t expected_vocab /* -1 any */,
                                        elda_topics** out);
ELDA_API elda_status elda_topics_export(const elda_topics* topics,
                                        const char* path);
ELDA_API int32_t elda_topics_count(const elda_topics* topics);
ELDA_API int32_t elda_topics_vocab_size(const elda_topics* topics);
ELDA_API int elda_topics_has_popularity(const elda_topics* topics);
ELDA_API void elda_topics_free(elda_topics* topics);

/* ---- solving ---- */
ELDA_API elda_status elda_fit(const elda_corpus* corpus,
                              const elda_topics* topics,
                              const elda_fit_options* options,
                              elda_solution** out);
ELDA_API int64_t elda_solution_num_links(const elda_solution* solution);
ELDA_API elda_status elda_solution_link(const elda_solution* solution,
                                        int64_t index, elda_link_info* out);
ELDA_API elda_status elda_solution_prefix(const elda_solution* solution,
                                          int64_t num_links,
                                          elda_solution** out);
/* Solver metadata as a JSON string; free with elda_string_free. */
ELDA_API elda_status elda_solution_meta_json(const elda_solution* solution,
                                             char** out);
ELDA_API elda_status elda_solution_save(const elda_solution* solution,
                                        const elda_corpus* corpus,
                                        const elda_topics* topics,
                                        const char* solution_path,
                                        const char* meta_path /* NULL skip */);
ELDA_API elda_status elda_assignment_save(const elda_solution* solution,
                                          const elda_corpus* corpus,
                                          const elda_topics* topics,
                                          const char* path);
ELDA_API elda_status elda_sparsity_table_save(const elda_solution* solution,
                                              const elda_corpus* corpus,
                                              const char* path);
ELDA_API void elda_solution_free(elda_solution* solution);

/* ---- evaluation ---- */
/* Report JSON for a solution over (corpus, topics); h_stars lists the
 * top-word counts. Free the string with elda_string_free. */
ELDA_API elda_status elda_eval_report(const elda_corpus* corpus,
                                      const elda_topics* topics,
                                      const elda_solution* solution,
                                      const int32_t* h_stars, size_t n_h,
                                      double coherence_epsilon,
                                      elda_popularity popularity,
                                      char** out);
/* Rebuilds a solution from its JSONL export (for eval pipelines). */
ELDA_API elda_status elda_solution_load(const char* path,
                                        const elda_corpus* corpus,
                                        const elda_topics* topics,
                                        elda_solution** out);

/* ---- out-of-sample inference ---- */
/* Reads {"id", "text"|"tokens", "kappa_d"} JSON lines, infers each document
 * independently against the vocabulary file, writes per-document assignment
 * records with an "oov_dropped" count. */
ELDA_API elda_status elda_oos_infer_file(const elda_topics* topics,
                                         const char* vocab_path,
                                         const char* input_jsonl,
                                         const char* output_jsonl,
                                         const elda_oos_options* options,
                                         elda_popularity popularity,
                                         elda_oos_stats* stats /* NULL ok */);

/* ---- small utilities ---- */
ELDA_API elda_status elda_expected_topics_per_doc(const int64_t* doc_lengths,
                                                  size_t n, int64_t num_topics,
                                                  double* exact_out,
                                                  double* approx_out);
ELDA_API elda_status elda_file_digest(const char* path, char** out);
ELDA_API void elda_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ELDA_H_ */
