// models/classifier.h

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

#ifndef VPD_MODELS_CLASSIFIER_H_
#define VPD_MODELS_CLASSIFIER_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "base/matrix.h"
#include "json.hpp"
#include "models/gbt.h"
#include "models/iforest.h"

namespace vpd {

enum class ModelKind { kGbt, kIForest, kDenseNet };

// "gbt", "iforest", "densenet"; throws kConfig otherwise.
ModelKind ParseModelKind(std::string_view name);
const char *ModelKindName(ModelKind kind);

// A fitted gbt or iforest behind one interface. Predictions are 0 (H) or
// 1 (P); for the forest, anomalous maps to P. The forest ignores labels and
// weights.
class TabularModel {
 public:
  static TabularModel Fit(ModelKind kind, const nlohmann::json &params, const Matrix &x,
                          std::span<const int> y, std::span<const double> w, uint64_t seed,
                          int jobs = 1);

  ModelKind kind() const;
  std::vector<int> Predict(const Matrix &x) const;
  // Probability of P for gbt, anomaly score for iforest.
  std::vector<double> Scores(const Matrix &x) const;

  const GbtModel *gbt() const { return std::get_if<GbtModel>(&model_); }
  const IForest *iforest() const { return std::get_if<IForest>(&model_); }

  nlohmann::ordered_json ToJson() const;
  static TabularModel FromJson(const nlohmann::json &j);

 private:
  std::variant<GbtModel, IForest> model_;
};

}  // namespace vpd

#endif  // VPD_MODELS_CLASSIFIER_H_
