// models/classifier.cc

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

#include "models/classifier.h"

#include <string>

#include "base/error.h"

namespace vpd {

ModelKind ParseModelKind(std::string_view name) {
  if (name == "gbt") return ModelKind::kGbt;
  if (name == "iforest") return ModelKind::kIForest;
  if (name == "densenet") return ModelKind::kDenseNet;
  Fail(Errc::kConfig, "unknown model kind '" + std::string(name) + "'");
}

const char *ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGbt:
      return "gbt";
    case ModelKind::kIForest:
      return "iforest";
    case ModelKind::kDenseNet:
      return "densenet";
  }
  return "?";
}

TabularModel TabularModel::Fit(ModelKind kind, const nlohmann::json &params, const Matrix &x,
                               std::span<const int> y, std::span<const double> w, uint64_t seed,
                               int jobs) {
  TabularModel m;
  switch (kind) {
    case ModelKind::kGbt:
      m.model_ = TrainGbt(x, y, w, GbtParamsFromJson(params), seed);
      break;
    case ModelKind::kIForest:
      m.model_ = FitIForest(x, IForestParamsFromJson(params), seed, jobs);
      break;
    default:
      Fail(Errc::kConfig, "densenet is not a tabular model");
  }
  return m;
}

ModelKind TabularModel::kind() const {
  return std::holds_alternative<GbtModel>(model_) ? ModelKind::kGbt : ModelKind::kIForest;
}

std::vector<int> TabularModel::Predict(const Matrix &x) const {
  if (const IForest *f = iforest()) return f->Classify(x);
  const std::vector<double> p = gbt()->PredictProba(x);
  std::vector<int> out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[i] = p[i] >= 0.5 ? 1 : 0;
  return out;
}

std::vector<double> TabularModel::Scores(const Matrix &x) const {
  if (const IForest *f = iforest()) return f->Scores(x);
  return gbt()->PredictProba(x);
}

nlohmann::ordered_json TabularModel::ToJson() const {
  if (const IForest *f = iforest()) return vpd::ToJson(*f);
  return vpd::ToJson(*gbt());
}

TabularModel TabularModel::FromJson(const nlohmann::json &j) {
  TabularModel m;
  const std::string kind = j.value("kind", std::string());
  if (kind == "gbt")
    m.model_ = GbtModelFromJson(j);
  else if (kind == "iforest")
    m.model_ = IForestFromJson(j);
  else
    Fail(Errc::kData, "model JSON has unknown kind '" + kind + "'");
  return m;
}

}  // namespace vpd
