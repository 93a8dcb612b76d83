// unit/capi_test.cc

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

// Links against the shared library only.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "doctest.h"
#include "vpd/vpd.h"

namespace {

namespace fs = std::filesystem;

struct Str {
  char *p = nullptr;
  ~Str() { vpd_string_free(p); }
  std::string s() const { return p ? p : ""; }
};

struct Opts {
  vpd_options *p = nullptr;
  Opts() { REQUIRE(vpd_options_new(&p) == VPD_OK); }
  ~Opts() { vpd_options_free(p); }
};

struct Model {
  vpd_model *p = nullptr;
  ~Model() { vpd_model_free(p); }
};

std::string Slurp(const fs::path &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_CASE("status names and last error") {
  CHECK(std::string(vpd_status_name(VPD_OK)) == "ok");
  CHECK(std::string(vpd_status_name(VPD_E_SPLIT)) == "split");
  CHECK(std::string(vpd_status_name(VPD_E_DATA)) == "data");
  CHECK(std::string(vpd_status_name(VPD_E_INTERNAL)) == "internal");
  CHECK(std::string(vpd_status_name(static_cast<vpd_status>(42))) == "unknown");
  CHECK(std::string(vpd_version()).size() > 0);

  CHECK(vpd_options_new(nullptr) == VPD_E_INVALID_ARGUMENT);
  CHECK(std::string(vpd_last_error()).size() > 0);
  Opts o;
  CHECK(vpd_options_set_jobs(o.p, 0) == VPD_E_INVALID_ARGUMENT);
  CHECK(vpd_options_set_split(o.p, 10, 1) == VPD_E_INVALID_ARGUMENT);
  CHECK(vpd_options_set_n_iter(o.p, 0) == VPD_E_INVALID_ARGUMENT);
  CHECK(vpd_options_set_jobs(o.p, 2) == VPD_OK);
}

TEST_CASE("report from counts renders both formats") {
  const long counts[4] = {82, 26, 38, 94};
  Str report;
  REQUIRE(vpd_report_from_counts(counts, "XGBoost", &report.p) == VPD_OK);
  Str text, csv;
  REQUIRE(vpd_render_report(report.p, "text", &text.p) == VPD_OK);
  CHECK(text.s().find("Testing CM for XGBoost") != std::string::npos);
  CHECK(text.s().find("Testing CR for XGBoost") != std::string::npos);
  CHECK(text.s().find("accuracy: 0.733") != std::string::npos);
  REQUIRE(vpd_render_report(report.p, "csv", &csv.p) == VPD_OK);
  CHECK(csv.s().find("82") != std::string::npos);
  CHECK(csv.s().find("94") != std::string::npos);

  Str bad;
  CHECK(vpd_render_report("{\"nope\": 1}", "text", &bad.p) == VPD_E_DATA);
  CHECK(vpd_render_report("not json", "text", &bad.p) == VPD_E_DATA);
  CHECK(vpd_render_report(report.p, "html", &bad.p) == VPD_E_INVALID_ARGUMENT);
  const long negative[4] = {1, -1, 0, 0};
  CHECK(vpd_report_from_counts(negative, "x", &bad.p) == VPD_E_INVALID_ARGUMENT);
  CHECK(bad.p == nullptr);
}

TEST_CASE("missing inputs map to error codes") {
  Model m;
  CHECK(vpd_model_load("/nonexistent/model.json", &m.p) != VPD_OK);
  CHECK(m.p == nullptr);
  size_t recs = 0;
  CHECK(vpd_preprocess("/nonexistent/corpus", "/tmp/vpd_capi_unused", nullptr, &recs, nullptr) !=
        VPD_OK);
  Str csv;
  CHECK(vpd_stats(nullptr, &csv.p) == VPD_E_INVALID_ARGUMENT);
  CHECK(vpd_synth("/tmp/vpd_capi_unused", 0, 5, nullptr) == VPD_E_INVALID_ARGUMENT);
}

TEST_CASE("pipeline through the C interface") {
  const fs::path root = fs::temp_directory_path() / ("vpd_capi_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::string corpus = (root / "corpus").string(), work = (root / "work").string();
  vpd_set_log_level(4);
  Opts o;
  REQUIRE(vpd_options_set_split(o.p, 8, 3) == VPD_OK);
  REQUIRE(vpd_options_set_n_iter(o.p, 3) == VPD_OK);

  REQUIRE(vpd_synth(corpus.c_str(), 30, 30, o.p) == VPD_OK);
  size_t recs = 0, chunks = 0, dropped = 1;
  REQUIRE(vpd_preprocess(corpus.c_str(), work.c_str(), o.p, &recs, &chunks) == VPD_OK);
  CHECK(recs == 60);
  CHECK(chunks >= 60);
  size_t feat_chunks = 0;
  REQUIRE(vpd_features(work.c_str(), "all", o.p, &feat_chunks, &dropped) == VPD_OK);
  CHECK(feat_chunks + dropped == chunks);
  size_t test = 0, dev = 0;
  REQUIRE(vpd_split(work.c_str(), o.p, &test, &dev) == VPD_OK);
  CHECK(test == 16);
  CHECK(test + dev == feat_chunks);

  Str stats;
  REQUIRE(vpd_stats((root / "corpus" / "manifest.jsonl").c_str(), &stats.p) == VPD_OK);
  CHECK(stats.s().find("SYNTH") != std::string::npos);

  Model gbt;
  REQUIRE(vpd_train(work.c_str(), "gbt", "af", "{\"n_estimators\": 20, \"max_depth\": 3}", o.p,
                    &gbt.p) == VPD_OK);
  Str params;
  REQUIRE(vpd_model_params(gbt.p, &params.p) == VPD_OK);
  CHECK(params.s().find("\"n_estimators\":20") != std::string::npos);

  const std::string path = (root / "gbt.json").string();
  REQUIRE(vpd_model_save(gbt.p, path.c_str()) == VPD_OK);
  Model reloaded;
  REQUIRE(vpd_model_load(path.c_str(), &reloaded.p) == VPD_OK);
  Str r1, r2;
  REQUIRE(vpd_evaluate(work.c_str(), gbt.p, "GBT", &r1.p) == VPD_OK);
  REQUIRE(vpd_evaluate(work.c_str(), reloaded.p, "GBT", &r2.p) == VPD_OK);
  CHECK(r1.s() == r2.s());

  Model bad;
  CHECK(vpd_train(work.c_str(), "svm", "af", nullptr, o.p, &bad.p) != VPD_OK);
  CHECK(vpd_train(work.c_str(), "gbt", "af", "{broken", o.p, &bad.p) == VPD_E_CONFIG);
  CHECK(bad.p == nullptr);

  Model tuned;
  Str board;
  REQUIRE(vpd_tune(work.c_str(), "iforest", "af", nullptr, o.p, &tuned.p, &board.p) == VPD_OK);
  int lines = 0;
  for (char c : board.s()) lines += c == '\n';
  CHECK(lines == 4);  // header and three trials

  Str ablation;
  REQUIRE(vpd_ablate(work.c_str(), "gbt", "af,mfcc", o.p, &ablation.p) == VPD_OK);
  CHECK(ablation.s().find("mfcc") != std::string::npos);
  CHECK(vpd_ablate(work.c_str(), "gbt", "", o.p, &ablation.p) == VPD_E_CONFIG);

  fs::remove_all(root);
}

}  // namespace
