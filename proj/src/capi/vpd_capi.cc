// capi/vpd_capi.cc

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

#include "vpd/vpd.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <string>

#include <spdlog/spdlog.h>

#include "base/error.h"
#include "base/text.h"
#include "corpus/manifest.h"
#include "eval/metrics.h"
#include "json.hpp"
#include "pipeline/pipeline.h"
#include "synth/synth.h"
#include "tune/tuner.h"

struct vpd_options {
  vpd::StageOptions stage;
  vpd::SplitOptions split;
  int n_iter = 50;
};

struct vpd_model {
  vpd::ModelBundle bundle;
};

namespace {

thread_local std::string g_last_error;

vpd_status Record(vpd_status status, const char *what) {
  g_last_error = what;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
vpd_status Guard(Fn &&fn) {
  try {
    fn();
    g_last_error.clear();
    return VPD_OK;
  } catch (const vpd::Error &e) {
    return Record(static_cast<vpd_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception &e) {
    return Record(VPD_E_DATA, e.what());
  } catch (const std::filesystem::filesystem_error &e) {
    return Record(VPD_E_IO, e.what());
  } catch (const std::bad_alloc &) {
    return Record(VPD_E_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return Record(VPD_E_INTERNAL, e.what());
  } catch (...) {
    return Record(VPD_E_INTERNAL, "unknown exception");
  }
}

void Need(const void *p, const char *name) {
  if (!p) vpd::Fail(vpd::Errc::kInvalidArgument, std::string(name) + " must not be NULL");
}

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const vpd_options &OptionsOrDefault(const vpd_options *opts) {
  static const vpd_options defaults;
  return opts ? *opts : defaults;
}

nlohmann::json ParseJson(const char *text, const char *what) {
  if (!text) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    vpd::Fail(vpd::Errc::kConfig, std::string(what) + ": " + e.what());
  }
}

}  // namespace

extern "C" {

const char *vpd_version(void) { return "1.0.0"; }

const char *vpd_status_name(vpd_status status) {
  if (status == VPD_OK) return "ok";
  if (status == VPD_E_INTERNAL) return "internal";
  if (status >= VPD_E_INVALID_ARGUMENT && status <= VPD_E_DATA)
    return vpd::ErrcName(static_cast<vpd::Errc>(status));
  return "unknown";
}

const char *vpd_last_error(void) { return g_last_error.c_str(); }

void vpd_string_free(char *s) { std::free(s); }

void vpd_set_log_level(int level) {
  if (level < 0) level = 0;
  if (level > 6) level = 6;
  spdlog::set_level(static_cast<spdlog::level::level_enum>(level));
}

vpd_status vpd_options_new(vpd_options **out) {
  return Guard([&] {
    Need(out, "out");
    *out = new vpd_options;
  });
}

void vpd_options_free(vpd_options *opts) { delete opts; }

vpd_status vpd_options_set_seed(vpd_options *opts, uint64_t seed) {
  return Guard([&] {
    Need(opts, "opts");
    opts->stage.seed = seed;
  });
}

vpd_status vpd_options_set_jobs(vpd_options *opts, int jobs) {
  return Guard([&] {
    Need(opts, "opts");
    vpd::Require(jobs >= 1, vpd::Errc::kInvalidArgument, "jobs must be at least 1");
    opts->stage.jobs = jobs;
  });
}

vpd_status vpd_options_set_inverse_weights(vpd_options *opts, int inverse) {
  return Guard([&] {
    Need(opts, "opts");
    opts->stage.inverse_weights = inverse != 0;
  });
}

vpd_status vpd_options_set_split(vpd_options *opts, int test_per_class, int folds) {
  return Guard([&] {
    Need(opts, "opts");
    vpd::Require(test_per_class >= 1 && folds >= 2, vpd::Errc::kInvalidArgument,
                 "split needs test_per_class >= 1 and folds >= 2");
    opts->split.test_per_class = test_per_class;
    opts->split.folds = folds;
  });
}

vpd_status vpd_options_set_n_iter(vpd_options *opts, int n_iter) {
  return Guard([&] {
    Need(opts, "opts");
    vpd::Require(n_iter >= 1, vpd::Errc::kInvalidArgument, "n_iter must be at least 1");
    opts->n_iter = n_iter;
  });
}

vpd_status vpd_synth(const char *out, int n_healthy, int n_pathological, const vpd_options *opts) {
  return Guard([&] {
    Need(out, "out");
    const vpd_options &o = OptionsOrDefault(opts);
    vpd::SynthCorpus(n_healthy, n_pathological, o.stage.seed, out, o.stage.jobs);
  });
}

vpd_status vpd_preprocess(const char *corpus, const char *work, const vpd_options *opts,
                          size_t *recordings, size_t *chunks) {
  return Guard([&] {
    Need(corpus, "corpus");
    Need(work, "work");
    const vpd::PreprocessSummary s =
        vpd::RunPreprocess(corpus, work, OptionsOrDefault(opts).stage.jobs);
    if (recordings) *recordings = s.recordings;
    if (chunks) *chunks = s.chunks;
  });
}

vpd_status vpd_features(const char *work, const char *set, const vpd_options *opts,
                        size_t *chunks, size_t *dropped) {
  return Guard([&] {
    Need(work, "work");
    Need(set, "set");
    const vpd::FeatureSummary s =
        vpd::RunFeatures(work, vpd::ParseFeatureSet(set), OptionsOrDefault(opts).stage.jobs);
    if (chunks) *chunks = s.chunks;
    if (dropped) *dropped = s.dropped.size();
  });
}

vpd_status vpd_split(const char *work, const vpd_options *opts, size_t *test_chunks,
                     size_t *dev_chunks) {
  return Guard([&] {
    Need(work, "work");
    const vpd_options &o = OptionsOrDefault(opts);
    const vpd::Split s = vpd::RunSplit(work, o.stage.seed, o.split, o.stage.inverse_weights);
    if (test_chunks) *test_chunks = s.test.size();
    if (dev_chunks) *dev_chunks = s.Development().size();
  });
}

vpd_status vpd_train(const char *work, const char *kind, const char *subset,
                     const char *params_json, const vpd_options *opts, vpd_model **out) {
  return Guard([&] {
    Need(work, "work");
    Need(kind, "kind");
    Need(subset, "subset");
    Need(out, "out");
    const nlohmann::json params = ParseJson(params_json, "params");
    auto m = std::make_unique<vpd_model>();
    m->bundle = vpd::RunTrain(work, vpd::ParseModelKind(kind), subset, params,
                              OptionsOrDefault(opts).stage);
    *out = m.release();
  });
}

vpd_status vpd_tune(const char *work, const char *kind, const char *subset,
                    const char *space_json, const vpd_options *opts, vpd_model **out,
                    char **leaderboard_csv) {
  return Guard([&] {
    Need(work, "work");
    Need(kind, "kind");
    Need(subset, "subset");
    Need(out, "out");
    const vpd_options &o = OptionsOrDefault(opts);
    const vpd::SearchSpace space =
        space_json ? vpd::SpaceFromJson(ParseJson(space_json, "search space")) : vpd::SearchSpace{};
    vpd::SearchOptions search;
    search.n_iter = o.n_iter;
    auto m = std::make_unique<vpd_model>();
    vpd::TuneOutcome t = vpd::RunTune(work, vpd::ParseModelKind(kind), subset, space, search, o.stage);
    std::string board = leaderboard_csv ? vpd::LeaderboardCsv(t.search) : std::string();
    m->bundle = std::move(t.bundle);
    if (leaderboard_csv) *leaderboard_csv = Dup(board);
    *out = m.release();
  });
}

vpd_status vpd_model_load(const char *path, vpd_model **out) {
  return Guard([&] {
    Need(path, "path");
    Need(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(vpd::ReadFile(path));
    } catch (const nlohmann::json::exception &e) {
      vpd::Fail(vpd::Errc::kData, std::string(path) + ": " + e.what());
    }
    auto m = std::make_unique<vpd_model>();
    m->bundle = vpd::BundleFromJson(j);
    *out = m.release();
  });
}

vpd_status vpd_model_save(const vpd_model *model, const char *path) {
  return Guard([&] {
    Need(model, "model");
    Need(path, "path");
    vpd::WriteFile(path, vpd::ToJson(model->bundle).dump(1) + "\n");
  });
}

vpd_status vpd_model_params(const vpd_model *model, char **params_json) {
  return Guard([&] {
    Need(model, "model");
    Need(params_json, "params_json");
    *params_json = Dup(model->bundle.params.dump());
  });
}

void vpd_model_free(vpd_model *model) { delete model; }

vpd_status vpd_evaluate(const char *work, const vpd_model *model, const char *title,
                        char **report_json) {
  return Guard([&] {
    Need(work, "work");
    Need(model, "model");
    Need(report_json, "report_json");
    const vpd::ConfusionMatrix cm = vpd::EvaluateBundle(work, model->bundle);
    const std::string t = title ? title : vpd::ModelKindName(model->bundle.kind);
    *report_json = Dup(vpd::ReportToJson(t, cm).dump(2) + "\n");
  });
}

vpd_status vpd_report_from_counts(const long counts[4], const char *title, char **report_json) {
  return Guard([&] {
    Need(counts, "counts");
    Need(report_json, "report_json");
    vpd::ConfusionMatrix cm;
    for (int i = 0; i < 4; ++i) {
      vpd::Require(counts[i] >= 0, vpd::Errc::kInvalidArgument, "counts must be non-negative");
      cm.counts[static_cast<size_t>(i / 2)][static_cast<size_t>(i % 2)] = counts[i];
    }
    *report_json = Dup(vpd::ReportToJson(title ? title : "", cm).dump(2) + "\n");
  });
}

vpd_status vpd_render_report(const char *report_json, const char *format, char **text) {
  return Guard([&] {
    Need(report_json, "report_json");
    Need(text, "text");
    const std::string fmt = format ? format : "text";
    vpd::Require(fmt == "text" || fmt == "csv", vpd::Errc::kInvalidArgument,
                 "format must be text or csv");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(report_json);
    } catch (const nlohmann::json::exception &e) {
      vpd::Fail(vpd::Errc::kData, std::string("report: ") + e.what());
    }
    const vpd::ConfusionMatrix cm = vpd::ConfusionFromJson(j);
    std::string title;
    if (j.is_object() && j.contains("title") && j["title"].is_string())
      title = j["title"].get<std::string>();
    *text = Dup(fmt == "text" ? vpd::RenderTables(title, cm) : vpd::ConfusionCsv(cm));
  });
}

vpd_status vpd_ablate(const char *work, const char *kind, const char *subsets,
                      const vpd_options *opts, char **csv) {
  return Guard([&] {
    Need(work, "work");
    Need(kind, "kind");
    Need(subsets, "subsets");
    Need(csv, "csv");
    const vpd_options &o = OptionsOrDefault(opts);
    std::vector<std::string> names;
    for (auto &s : vpd::SplitCsvLine(subsets))
      if (!s.empty()) names.push_back(s);
    vpd::Require(!names.empty(), vpd::Errc::kConfig, "no subsets given");
    *csv = Dup(vpd::RunAblation(work, vpd::ParseModelKind(kind), names, o.n_iter, o.stage));
  });
}

vpd_status vpd_stats(const char *manifest_path, char **csv) {
  return Guard([&] {
    Need(manifest_path, "manifest_path");
    Need(csv, "csv");
    *csv = Dup(vpd::PathologyStats(vpd::ReadManifest(manifest_path)));
  });
}

}  // extern "C"
