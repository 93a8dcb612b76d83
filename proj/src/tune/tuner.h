// tune/tuner.h

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

#ifndef VPD_TUNE_TUNER_H_
#define VPD_TUNE_TUNER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "base/matrix.h"
#include "corpus/split.h"
#include "feat/spectral.h"
#include "json.hpp"
#include "models/classifier.h"

namespace vpd {

struct ParamRange {
  enum class Kind { kInt, kUniform, kLogUniform, kChoice };
  std::string name;
  Kind kind = Kind::kUniform;
  double lo = 0.0;  // inclusive for kInt
  double hi = 0.0;
  std::vector<nlohmann::json> choices;
};

using SearchSpace = std::vector<ParamRange>;

// lo == hi is allowed and pins the parameter. Throws kConfig on lo > hi, a
// non-positive log-uniform bound, or an empty choice list.
void ValidateSpace(const SearchSpace &space);

// The reference search ranges for gbt and iforest; learning rate is
// log-uniform, everything else uniform.
SearchSpace DefaultSpace(ModelKind kind);

// Space from {"name": {"int"|"uniform"|"loguniform": [lo, hi]} or
// {"choice": [...]}}. Throws kConfig.
SearchSpace SpaceFromJson(const nlohmann::json &j);
nlohmann::ordered_json ToJson(const SearchSpace &space);

// Deterministic in (seed, trial): every trial draws from its own stream.
nlohmann::ordered_json SampleParams(const SearchSpace &space, uint64_t seed, int trial);

// Rows of a feature matrix with what cross-validation needs to know about
// them. split ids missing from chunk_ids (dropped chunks) are ignored.
struct CvProblem {
  Matrix x;
  std::vector<int> y;
  std::vector<std::string> chunk_ids;
  std::vector<WeightKey> weight_keys;
  Split split;
  std::map<std::string, std::string> speakers;  // chunk id -> speaker id
  bool inverse_weights = false;
  // Columns z-scored with statistics of whichever rows a model trains on.
  std::vector<size_t> scaled_columns;

  // Row indices of the given chunk ids that are present, in input order.
  std::vector<size_t> Rows(const std::vector<std::string> &ids) const;
};

// Subgroup sample weights for rows, counted over those same rows.
std::vector<double> UniverseWeights(const CvProblem &problem, std::span<const size_t> rows);

struct TrialRecord {
  int trial = 0;
  nlohmann::ordered_json params;
  std::vector<double> train_f1, valid_f1;  // per fold
  double train_mean = 0.0, train_std = 0.0;
  double valid_mean = 0.0, valid_std = 0.0;
  bool failed = false;
  std::string error;
};

// Trains on each fold's training part with weights counted on that part and
// scores F1-micro on both parts; std is the population value. A failing fold
// marks the record failed. Throws kSplit if a fold's validation speakers
// leak into its training rows.
TrialRecord CrossValidate(ModelKind kind, const nlohmann::json &params, const CvProblem &problem,
                          uint64_t seed, int jobs = 1);

struct SearchOptions {
  int n_iter = 50;
  // Trial index -> parameter set used instead of the random draw.
  std::map<int, nlohmann::json> planted;
};

struct SearchResult {
  std::vector<TrialRecord> trials;  // trial order, failures included
  std::vector<size_t> ranking;      // successful trials, best first
  nlohmann::ordered_json best_params;
  StandardScaler scaler;  // fitted on the development set
  TabularModel model;     // refit on the scaled development set
};

// Ranks by mean validation F1 (ties to the lower trial) and refits the winner
// on every fold. Throws kSearch if all trials fail.
SearchResult SearchAndRefit(ModelKind kind, const SearchSpace &space, const CvProblem &problem,
                            const SearchOptions &options, uint64_t seed, int jobs = 1);

// trial, params, f1_train_mean, f1_train_std, f1_valid_mean, f1_valid_std in
// ranking order.
std::string LeaderboardCsv(const SearchResult &result);

}  // namespace vpd

#endif  // VPD_TUNE_TUNER_H_
