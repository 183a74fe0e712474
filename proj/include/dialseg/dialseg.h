// Copyright 2026 The dialseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Stable C interface. Every call returns a dialseg_status; on failure
 * dialseg_last_error() holds a message for the calling thread. Strings
 * returned through char** are owned by the caller and released with
 * dialseg_string_free(). Borrowed const char* values stay valid until the
 * owning handle is destroyed. */

#ifndef DIALSEG_DIALSEG_H_
#define DIALSEG_DIALSEG_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(DIALSEG_BUILDING)
#define DIALSEG_API __declspec(dllexport)
#else
#define DIALSEG_API __declspec(dllimport)
#endif
#else
#define DIALSEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dialseg_status {
  DIALSEG_OK = 0,
  DIALSEG_ERR_INVALID_ARGUMENT = 1,
  DIALSEG_ERR_CONFIG = 2,
  DIALSEG_ERR_PARSE = 3,
  DIALSEG_ERR_IO = 4,
  DIALSEG_ERR_EMPTY_DOCUMENT = 5,
  DIALSEG_ERR_UNDEFINED_METRIC = 6,
  DIALSEG_ERR_INTERNAL = 7
} dialseg_status;

typedef struct dialseg_config dialseg_config;
typedef struct dialseg_corpus dialseg_corpus;
typedef struct dialseg_boundaries dialseg_boundaries;
typedef struct dialseg_report dialseg_report;

typedef void (*dialseg_log_fn)(const char* message, void* user_data);

DIALSEG_API const char* dialseg_version(void);
DIALSEG_API const char* dialseg_status_name(dialseg_status status);
DIALSEG_API const char* dialseg_last_error(void);
/* NULL restores the default (stderr). */
DIALSEG_API void dialseg_set_log_callback(dialseg_log_fn fn, void* user_data);
DIALSEG_API void dialseg_string_free(char* text);

/* Configuration. Keys are the CLI flag names without leading dashes,
 * e.g. "k", "threshold-sigma", "features", "corpus". */
DIALSEG_API dialseg_status dialseg_config_create(dialseg_config** out);
DIALSEG_API void dialseg_config_destroy(dialseg_config* config);
DIALSEG_API dialseg_status dialseg_config_set(dialseg_config* config,
                                              const char* key,
                                              const char* value);
DIALSEG_API dialseg_status dialseg_config_load_json(dialseg_config* config,
                                                    const char* path);
DIALSEG_API dialseg_status dialseg_config_to_json(const dialseg_config* config,
                                                  char** out_json);
/* Index-th accepted key, or NULL past the end. */
DIALSEG_API const char* dialseg_config_key(size_t index);

/* Corpus loaded from the config's corpus/format/include-docs settings. */
DIALSEG_API dialseg_status dialseg_corpus_load(const dialseg_config* config,
                                               dialseg_corpus** out);
DIALSEG_API void dialseg_corpus_destroy(dialseg_corpus* corpus);
DIALSEG_API size_t dialseg_corpus_size(const dialseg_corpus* corpus);
DIALSEG_API dialseg_status dialseg_corpus_doc_info(const dialseg_corpus* corpus,
                                                   size_t index,
                                                   const char** doc_id,
                                                   size_t* utterances,
                                                   size_t* gold_boundaries);
DIALSEG_API dialseg_status dialseg_corpus_write_native(
    const dialseg_corpus* corpus, const char* path);

/* Boundary sets: one segmentation per document, sorted by doc_id.
 * variant may be NULL to use the config's method/features/stemming;
 * otherwise e.g. "bc+sd", "og", "random". */
DIALSEG_API dialseg_status dialseg_segment(const dialseg_corpus* corpus,
                                           const dialseg_config* config,
                                           const char* variant,
                                           dialseg_boundaries** out);
DIALSEG_API dialseg_status dialseg_boundaries_gold(const dialseg_corpus* corpus,
                                                   dialseg_boundaries** out);
DIALSEG_API dialseg_status dialseg_boundaries_load(const char* path,
                                                   dialseg_boundaries** out);
DIALSEG_API dialseg_status dialseg_boundaries_write(
    const dialseg_boundaries* set, const char* path);
DIALSEG_API dialseg_status dialseg_boundaries_to_jsonl(
    const dialseg_boundaries* set, char** out_text);
DIALSEG_API void dialseg_boundaries_destroy(dialseg_boundaries* set);
DIALSEG_API size_t dialseg_boundaries_size(const dialseg_boundaries* set);
DIALSEG_API dialseg_status dialseg_boundaries_get(const dialseg_boundaries* set,
                                                  size_t index,
                                                  const char** doc_id,
                                                  size_t* utterances,
                                                  const size_t** gaps,
                                                  size_t* gap_count);

/* Evaluation. Uses the config's fk/beta/pk-window settings. */
DIALSEG_API dialseg_status dialseg_evaluate(const dialseg_boundaries* gold,
                                            const dialseg_boundaries* predicted,
                                            const dialseg_config* config,
                                            dialseg_report** out);
DIALSEG_API void dialseg_report_destroy(dialseg_report* report);
DIALSEG_API size_t dialseg_report_documents(const dialseg_report* report);
/* Corpus means; scores are fractions in [0, 1]. */
DIALSEG_API dialseg_status dialseg_report_pk(const dialseg_report* report,
                                             double* out);
DIALSEG_API dialseg_status dialseg_report_f1(const dialseg_report* report,
                                             double* out);
DIALSEG_API dialseg_status dialseg_report_fk(const dialseg_report* report,
                                             size_t tolerance, double* out);
/* Per-document rows plus a final "ALL" row; pretty != 0 aligns columns. */
DIALSEG_API dialseg_status dialseg_report_format(const dialseg_report* report,
                                                 int pretty, char** out_text);

/* Full runs. Either output pointer may be NULL. */
DIALSEG_API dialseg_status dialseg_experiment_run(const dialseg_config* config,
                                                  char** report_tsv,
                                                  char** report_pretty);
DIALSEG_API dialseg_status dialseg_sweep_run(const dialseg_config* config,
                                             const char* const* axes,
                                             size_t axis_count,
                                             char** index_tsv);

#ifdef __cplusplus
}
#endif

#endif /* DIALSEG_DIALSEG_H_ */
