// models/gbt.h

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

#ifndef VPD_MODELS_GBT_H_
#define VPD_MODELS_GBT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "base/matrix.h"
#include "json.hpp"

namespace vpd {

struct GbtParams {
  int n_estimators = 100;
  double learning_rate = 0.3;
  double gamma = 0.0;  // minimum split gain
  int max_depth = 6;   // 0 = no depth limit
  double min_child_weight = 1.0;
  double subsample = 1.0;
  double colsample_bytree = 1.0;
  double lambda = 1.0;  // L2 on leaf weights

  void Validate() const;
};

nlohmann::ordered_json ToJson(const GbtParams &p);
GbtParams GbtParamsFromJson(const nlohmann::json &j);

struct GbtNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_weight = 0.0;
  double gain = 0.0;

  bool is_leaf() const { return feature < 0; }
};

// Node 0 is the root. x < threshold goes left.
struct GbtTree {
  std::vector<GbtNode> nodes;

  double Predict(std::span<const double> x) const;
  int Depth() const;
};

struct GbtModel {
  GbtParams params;
  size_t n_features = 0;
  double base_score = 0.0;  // logit
  std::vector<GbtTree> trees;

  double Margin(std::span<const double> x) const;
  // Throws kDimension if x.cols() != n_features.
  std::vector<double> PredictProba(const Matrix &x) const;
};

struct GradHess {
  double g;
  double h;
};

// Weighted logistic-loss derivatives with respect to the margin.
GradHess LogisticGradHess(int y, double p, double w = 1.0);

// Weighted mean log-loss of probabilities p.
double LogLoss(std::span<const int> y, std::span<const double> p, std::span<const double> w);

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;  // after subtracting gamma
};

// Exact greedy search over the given rows and features. Thresholds are
// midpoints between consecutive distinct values. Returns nothing when no
// split has positive gain with both children at min_child_weight or above.
// Ties go to the lower feature index, then the lower threshold.
std::optional<SplitCandidate> BestSplit(const Matrix &x, std::span<const double> g,
                                        std::span<const double> h,
                                        std::span<const size_t> rows,
                                        std::span<const size_t> features,
                                        const GbtParams &params);

// y in {0, 1}; w are non-negative sample weights. Throws kDimension on size
// mismatch. A single-class target gives a model with no trees.
GbtModel TrainGbt(const Matrix &x, std::span<const int> y, std::span<const double> w,
                  const GbtParams &params, uint64_t seed);

// (feature, total gain) for every feature used in a split, by descending
// gain, ties by feature index.
std::vector<std::pair<int, double>> FeatureImportance(const GbtModel &model);

nlohmann::ordered_json ToJson(const GbtModel &model);
GbtModel GbtModelFromJson(const nlohmann::json &j);

}  // namespace vpd

#endif  // VPD_MODELS_GBT_H_
