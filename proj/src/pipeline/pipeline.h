// pipeline/pipeline.h

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

#ifndef VPD_PIPELINE_PIPELINE_H_
#define VPD_PIPELINE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/feature_table.h"
#include "corpus/manifest.h"
#include "corpus/split.h"
#include "eval/metrics.h"
#include "json.hpp"
#include "models/classifier.h"
#include "tune/tuner.h"

namespace vpd {

// Work directory layout shared by every stage.
inline constexpr const char *kManifestFile = "manifest.jsonl";
inline constexpr const char *kChunksFile = "chunks.csv";
inline constexpr const char *kFeaturesFile = "features.csv";
inline constexpr const char *kMfccMatrixFile = "mfcc_matrix.csv";
inline constexpr const char *kSpectrogramFile = "spectrogram.csv";
inline constexpr const char *kRawFile = "raw.csv";
inline constexpr const char *kSplitFile = "split.json";

// Admits the corpus recordings and writes work/manifest.jsonl (WAV paths
// rewritten relative to work) and work/chunks.csv. Returns the number of
// admitted recordings and chunks.
struct PreprocessSummary {
  size_t recordings = 0;
  size_t chunks = 0;
};
PreprocessSummary RunPreprocess(const std::filesystem::path &corpus,
                                const std::filesystem::path &work, int jobs = 1);

// all: features.csv (AF + MFCC stats), mfcc_matrix.csv and spectrogram.csv.
// af, af-base, af-stats, mfcc: features.csv with that subset (mfcc also
// writes mfcc_matrix.csv). spec: spectrogram.csv. raw: raw.csv.
enum class FeatureSet { kAll, kAf, kAfBase, kAfStats, kMfcc, kSpec, kRaw };
FeatureSet ParseFeatureSet(std::string_view name);

// Chunks whose acoustic features cannot be measured (no voicing, too few
// cycles) are dropped from every output and logged.
struct FeatureSummary {
  size_t chunks = 0;
  std::vector<std::string> dropped;
  std::vector<std::string> files;
};
FeatureSummary RunFeatures(const std::filesystem::path &work, FeatureSet set, int jobs = 1);

// Named column subsets of features.csv: all, af, af-base, af-stats, mfcc.
// Throws kConfig for other names and kData when a column is missing.
std::vector<std::string> SubsetColumns(const FeatureTable &table, std::string_view subset);
const std::vector<std::string> &SubsetNames();

// Writes work/split.json and rewrites the set and weight columns of every
// table present in work. Weights use the development rows of each table.
Split RunSplit(const std::filesystem::path &work, uint64_t seed, const SplitOptions &options = {},
               bool inverse_weights = false);

struct StageOptions {
  uint64_t seed = 1;
  int jobs = 1;
  bool inverse_weights = false;
};

// Cross-validation view of a tabular subset, with the MFCC statistics left
// unscaled (both tabular models are invariant to per-column affine maps).
CvProblem LoadCvProblem(const std::filesystem::path &work, std::string_view subset,
                        bool inverse_weights);

// What train and tune persist: the fitted model plus everything needed to
// apply it to a table in the work directory.
struct ModelBundle {
  ModelKind kind = ModelKind::kGbt;
  std::string input;   // table file name inside work
  std::string subset;  // feature subset or input representation
  std::vector<std::string> columns;
  nlohmann::ordered_json scaler;  // null when nothing is scaled
  nlohmann::ordered_json params;
  nlohmann::ordered_json model;
};

nlohmann::ordered_json ToJson(const ModelBundle &b);
ModelBundle BundleFromJson(const nlohmann::json &j);

// Fits on the development set. gbt and iforest read features.csv restricted
// to subset; densenet reads mfcc, spec or raw matrices, trains on fold 0's
// training part and stops early on fold 0. Null params mean defaults; other
// non-objects throw kConfig.
ModelBundle RunTrain(const std::filesystem::path &work, ModelKind kind, std::string_view subset,
                     const nlohmann::json &params, const StageOptions &options);

struct TuneOutcome {
  SearchResult search;
  ModelBundle bundle;
};

// Randomized search over space (the reference ranges when empty) and refit.
TuneOutcome RunTune(const std::filesystem::path &work, ModelKind kind, std::string_view subset,
                    const SearchSpace &space, const SearchOptions &search,
                    const StageOptions &options);

// Predictions on the test chunks.
ConfusionMatrix EvaluateBundle(const std::filesystem::path &work, const ModelBundle &bundle);

// One tuning run per distinct subset; rows subset, f1_cv_train, f1_cv_valid,
// f1_test. Duplicates are dropped with a warning.
std::string RunAblation(const std::filesystem::path &work, ModelKind kind,
                        const std::vector<std::string> &subsets, int n_iter,
                        const StageOptions &options);

// database, pathology, recordings, speakers, male, female; healthy
// recordings are counted under "healthy".
std::string PathologyStats(const std::vector<RecordingMeta> &manifest);

}  // namespace vpd

#endif  // VPD_PIPELINE_PIPELINE_H_
