// models/iforest.h

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

#ifndef VPD_MODELS_IFOREST_H_
#define VPD_MODELS_IFOREST_H_

#include <cstdint>
#include <span>
#include <vector>

#include "base/matrix.h"
#include "base/rng.h"
#include "json.hpp"

namespace vpd {

struct IForestParams {
  int n_estimators = 100;
  int max_samples = 0;  // 0 = auto, min(256, n)
  double contamination = 0.1;
  double max_features = 1.0;

  void Validate() const;
};

nlohmann::ordered_json ToJson(const IForestParams &p);
IForestParams IForestParamsFromJson(const nlohmann::json &j);

// Average unsuccessful-search path length in a binary search tree of n
// points, used both for the score normalizer and for external-node sizes.
double CFactor(size_t n);

struct ITreeNode {
  int feature = -1;  // -1 marks an external node
  double split = 0.0;
  int left = -1;
  int right = -1;
  int size = 0;  // training points at an external node
};

struct ITree {
  std::vector<ITreeNode> nodes;

  // Edges to the external node plus CFactor(its size).
  double PathLength(std::span<const double> x) const;
  int Height() const;
};

// Grows one isolation tree on the given rows, splitting only on the listed features.
// A node becomes external at the height cap, at one point, or when no listed
// feature varies inside it. The split feature is drawn uniformly from the
// varying ones (in list order), the split value uniformly inside (min, max).
ITree GrowITree(const Matrix &x, std::span<const size_t> rows,
                std::span<const size_t> features, int height_cap, Rng &rng);

struct IForest {
  IForestParams params;
  size_t n_features = 0;
  size_t psi = 0;  // effective subsample size
  double threshold = 0.0;
  std::vector<ITree> trees;

  double Score(std::span<const double> x) const;
  // Throws kDimension if x.cols() != n_features.
  std::vector<double> Scores(const Matrix &x) const;
  // 1 (anomalous) when score >= threshold.
  std::vector<int> Classify(const Matrix &x) const;
};

// Per-tree seeds are DeriveSeed(seed, tree). column_order, when given, maps
// the per-tree feature positions onto columns; the default is the identity.
// Sample weights are not used. The threshold is the linear-interpolated
// (1 - contamination) quantile of the training scores.
IForest FitIForest(const Matrix &x, const IForestParams &params, uint64_t seed, int jobs = 1,
                   std::span<const size_t> column_order = {});

// Linear-interpolated quantile q of v, q in [0, 1].
double Quantile(std::vector<double> v, double q);

nlohmann::ordered_json ToJson(const IForest &forest);
IForest IForestFromJson(const nlohmann::json &j);

}  // namespace vpd

#endif  // VPD_MODELS_IFOREST_H_
