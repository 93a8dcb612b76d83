// vpd/vpd.h

// Copyright 2026  The vpd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the voice pathology detection toolkit.
 *
 * Every function returns a vpd_status. On failure the message of the most
 * recent error on the calling thread is available from vpd_last_error().
 * Strings handed out through char ** parameters are owned by the caller and
 * released with vpd_string_free(). Paths are UTF-8.
 */

#ifndef VPD_VPD_H_
#define VPD_VPD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VPD_API __declspec(dllexport)
#else
#define VPD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vpd_status {
  VPD_OK = 0,
  VPD_E_INVALID_ARGUMENT = 1,
  VPD_E_FORMAT = 2,
  VPD_E_UNSUPPORTED_CHANNELS = 3,
  VPD_E_IO = 4,
  VPD_E_TOO_SHORT = 5,
  VPD_E_UNVOICED = 6,
  VPD_E_INSUFFICIENT_CYCLES = 7,
  VPD_E_MANIFEST = 8,
  VPD_E_SPLIT = 9,
  VPD_E_WEIGHT = 10,
  VPD_E_DIMENSION = 11,
  VPD_E_CONFIG = 12,
  VPD_E_SEARCH = 13,
  VPD_E_DATA = 14,
  VPD_E_INTERNAL = 99
} vpd_status;

typedef struct vpd_options vpd_options;
typedef struct vpd_model vpd_model;

VPD_API const char *vpd_version(void);
VPD_API const char *vpd_status_name(vpd_status status);
VPD_API const char *vpd_last_error(void);
VPD_API void vpd_string_free(char *s);

/* 0 trace, 1 debug, 2 info, 3 warn, 4 error, 5 critical, 6 off. Logs go to stderr. */
VPD_API void vpd_set_log_level(int level);

/* Run options. Defaults: seed 1, jobs 1, proportional sample weights,
 * 120 test chunks per class, 10 folds, 50 search iterations. */
VPD_API vpd_status vpd_options_new(vpd_options **out);
VPD_API void vpd_options_free(vpd_options *opts);
VPD_API vpd_status vpd_options_set_seed(vpd_options *opts, uint64_t seed);
VPD_API vpd_status vpd_options_set_jobs(vpd_options *opts, int jobs);
VPD_API vpd_status vpd_options_set_inverse_weights(vpd_options *opts, int inverse);
VPD_API vpd_status vpd_options_set_split(vpd_options *opts, int test_per_class, int folds);
VPD_API vpd_status vpd_options_set_n_iter(vpd_options *opts, int n_iter);

/* Writes out/wav/<id>.wav files and out/manifest.jsonl. */
VPD_API vpd_status vpd_synth(const char *out, int n_healthy, int n_pathological,
                             const vpd_options *opts);

/* Scans corpus (a manifest.jsonl at its root) and writes the admitted
 * recordings and their chunk listing into work. Either count pointer may be NULL. */
VPD_API vpd_status vpd_preprocess(const char *corpus, const char *work, const vpd_options *opts,
                                  size_t *recordings, size_t *chunks);

/* set: all, af, af-base, af-stats, mfcc, spec or raw. */
VPD_API vpd_status vpd_features(const char *work, const char *set, const vpd_options *opts,
                                size_t *chunks, size_t *dropped);

/* Writes split.json and annotates every feature table with set and weight. */
VPD_API vpd_status vpd_split(const char *work, const vpd_options *opts, size_t *test_chunks,
                             size_t *dev_chunks);

/* kind: gbt, iforest or densenet. subset: all, af, af-base, af-stats or mfcc
 * for the tree models; mfcc, spec or raw for densenet. params_json may be NULL. */
VPD_API vpd_status vpd_train(const char *work, const char *kind, const char *subset,
                             const char *params_json, const vpd_options *opts, vpd_model **out);

/* Randomized search with cross-validation, then a refit on the development
 * set. space_json may be NULL for the default ranges; leaderboard_csv may be NULL. */
VPD_API vpd_status vpd_tune(const char *work, const char *kind, const char *subset,
                            const char *space_json, const vpd_options *opts, vpd_model **out,
                            char **leaderboard_csv);

VPD_API vpd_status vpd_model_load(const char *path, vpd_model **out);
VPD_API vpd_status vpd_model_save(const vpd_model *model, const char *path);
VPD_API vpd_status vpd_model_params(const vpd_model *model, char **params_json);
VPD_API void vpd_model_free(vpd_model *model);

/* Scores the model on the test chunks; report JSON as read by vpd_render_report. */
VPD_API vpd_status vpd_evaluate(const char *work, const vpd_model *model, const char *title,
                                char **report_json);

/* Report JSON for a confusion matrix given as {pred H/true H, pred H/true P,
 * pred P/true H, pred P/true P}. */
VPD_API vpd_status vpd_report_from_counts(const long counts[4], const char *title,
                                          char **report_json);

/* format "text" gives the CM and CR tables, "csv" the 2x2 confusion matrix.
 * A malformed report yields VPD_E_DATA. */
VPD_API vpd_status vpd_render_report(const char *report_json, const char *format, char **text);

/* subsets: comma-separated list, e.g. "all,af-stats,af,af-base,mfcc". */
VPD_API vpd_status vpd_ablate(const char *work, const char *kind, const char *subsets,
                              const vpd_options *opts, char **csv);

/* Per database and pathology: recordings, speakers, male, female. */
VPD_API vpd_status vpd_stats(const char *manifest_path, char **csv);

#ifdef __cplusplus
}
#endif

#endif /* VPD_VPD_H_ */
