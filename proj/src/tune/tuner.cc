// tune/tuner.cc

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

#include "tune/tuner.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "base/error.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "base/text.h"
#include "eval/metrics.h"

namespace vpd {
namespace {

constexpr uint64_t kRefitStream = 0x7265666974ull;

struct FoldScore {
  double train_f1 = 0.0;
  double valid_f1 = 0.0;
  bool failed = false;
  std::string error;
};

void MeanStd(const std::vector<double> &v, double *mean, double *std) {
  double s = 0.0;
  for (double x : v) s += x;
  *mean = v.empty() ? 0.0 : s / static_cast<double>(v.size());
  double q = 0.0;
  for (double x : v) q += (x - *mean) * (x - *mean);
  *std = v.empty() ? 0.0 : std::sqrt(q / static_cast<double>(v.size()));
}

std::vector<int> Gather(const std::vector<int> &v, std::span<const size_t> rows) {
  std::vector<int> out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = v[rows[i]];
  return out;
}

std::vector<size_t> AllRows(size_t n) {
  std::vector<size_t> rows(n);
  std::iota(rows.begin(), rows.end(), size_t{0});
  return rows;
}

FoldScore RunFold(ModelKind kind, const nlohmann::json &params, const CvProblem &problem, int k,
                  uint64_t seed) {
  FoldScore score;
  const FoldIds ids = CvAssign(problem.split, k, problem.speakers);
  const std::vector<size_t> train = problem.Rows(ids.train), valid = problem.Rows(ids.valid);

  std::set<std::string> valid_speakers;
  for (size_t r : valid) valid_speakers.insert(problem.speakers.at(problem.chunk_ids[r]));
  for (size_t r : train)
    if (valid_speakers.count(problem.speakers.at(problem.chunk_ids[r])))
      Fail(Errc::kSplit, "fold " + std::to_string(k) + ": speaker of chunk " +
                             problem.chunk_ids[r] + " is in both training and validation");

  try {
    if (train.empty() || valid.empty()) Fail(Errc::kData, "empty fold");
    const std::vector<double> w = UniverseWeights(problem, train);
    Matrix xt = problem.x.SelectRows(train), xv = problem.x.SelectRows(valid);
    if (!problem.scaled_columns.empty()) {
      StandardScaler scaler;
      scaler.Fit(xt, AllRows(xt.rows()), problem.scaled_columns);
      scaler.Transform(xt);
      scaler.Transform(xv);
    }
    const std::vector<int> yt = Gather(problem.y, train), yv = Gather(problem.y, valid);
    const TabularModel model = TabularModel::Fit(kind, params, xt, yt, w, seed);
    score.train_f1 = F1Micro(yt, model.Predict(xt));
    score.valid_f1 = F1Micro(yv, model.Predict(xv));
  } catch (const Error &e) {
    score.failed = true;
    score.error = e.what();
  }
  return score;
}

TrialRecord Aggregate(int trial, const nlohmann::json &params, std::span<const FoldScore> folds) {
  TrialRecord rec;
  rec.trial = trial;
  rec.params = params;
  for (size_t k = 0; k < folds.size(); ++k) {
    if (folds[k].failed && !rec.failed) {
      rec.failed = true;
      rec.error = "fold " + std::to_string(k) + ": " + folds[k].error;
    }
    rec.train_f1.push_back(folds[k].train_f1);
    rec.valid_f1.push_back(folds[k].valid_f1);
  }
  MeanStd(rec.train_f1, &rec.train_mean, &rec.train_std);
  MeanStd(rec.valid_f1, &rec.valid_mean, &rec.valid_std);
  return rec;
}

ParamRange Range(std::string name, ParamRange::Kind kind, double lo, double hi) {
  ParamRange r;
  r.name = std::move(name);
  r.kind = kind;
  r.lo = lo;
  r.hi = hi;
  return r;
}

}  // namespace

void ValidateSpace(const SearchSpace &space) {
  std::set<std::string> names;
  for (const auto &r : space) {
    Require(names.insert(r.name).second, Errc::kConfig, "search space repeats " + r.name);
    if (r.kind == ParamRange::Kind::kChoice) {
      Require(!r.choices.empty(), Errc::kConfig, r.name + ": empty choice list");
      continue;
    }
    Require(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi, Errc::kConfig,
            r.name + ": range needs lo <= hi");
    if (r.kind == ParamRange::Kind::kLogUniform)
      Require(r.lo > 0.0, Errc::kConfig, r.name + ": log-uniform range must be positive");
    if (r.kind == ParamRange::Kind::kInt)
      Require(r.lo == std::floor(r.lo) && r.hi == std::floor(r.hi), Errc::kConfig,
              r.name + ": integer range needs integer bounds");
  }
}

SearchSpace DefaultSpace(ModelKind kind) {
  using K = ParamRange::Kind;
  switch (kind) {
    case ModelKind::kGbt:
      return {Range("n_estimators", K::kInt, 3, 300),
              Range("learning_rate", K::kLogUniform, 0.006, 1.0),
              Range("gamma", K::kUniform, 10, 60),
              Range("max_depth", K::kInt, 0, 9),
              Range("min_child_weight", K::kUniform, 1, 3),
              Range("subsample", K::kUniform, 0.3, 1.0),
              Range("colsample_bytree", K::kUniform, 0.1, 1.0)};
    case ModelKind::kIForest:
      return {Range("n_estimators", K::kInt, 6, 200),
              Range("max_samples", K::kInt, 8, 64),
              Range("contamination", K::kUniform, 0.40, 0.76),
              Range("max_features", K::kUniform, 0.05, 1.0)};
    default:
      Fail(Errc::kConfig, "no search space for densenet");
  }
}

SearchSpace SpaceFromJson(const nlohmann::json &j) {
  SearchSpace space;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto &spec = it.value();
      if (!spec.is_object() || spec.size() != 1)
        Fail(Errc::kConfig, it.key() + ": expected one of int, uniform, loguniform, choice");
      ParamRange r;
      r.name = it.key();
      const std::string kind = spec.begin().key();
      const auto &arg = spec.begin().value();
      if (kind == "choice") {
        r.kind = ParamRange::Kind::kChoice;
        for (const auto &c : arg) r.choices.push_back(c);
      } else {
        if (kind == "int")
          r.kind = ParamRange::Kind::kInt;
        else if (kind == "uniform")
          r.kind = ParamRange::Kind::kUniform;
        else if (kind == "loguniform")
          r.kind = ParamRange::Kind::kLogUniform;
        else
          Fail(Errc::kConfig, it.key() + ": unknown range kind " + kind);
        if (!arg.is_array() || arg.size() != 2) Fail(Errc::kConfig, it.key() + ": need [lo, hi]");
        r.lo = arg[0].get<double>();
        r.hi = arg[1].get<double>();
      }
      space.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kConfig, std::string("search space: ") + e.what());
  }
  ValidateSpace(space);
  return space;
}

nlohmann::ordered_json ToJson(const SearchSpace &space) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto &r : space) {
    switch (r.kind) {
      case ParamRange::Kind::kInt:
        j[r.name]["int"] = {static_cast<long>(r.lo), static_cast<long>(r.hi)};
        break;
      case ParamRange::Kind::kUniform:
        j[r.name]["uniform"] = {r.lo, r.hi};
        break;
      case ParamRange::Kind::kLogUniform:
        j[r.name]["loguniform"] = {r.lo, r.hi};
        break;
      case ParamRange::Kind::kChoice:
        j[r.name]["choice"] = r.choices;
        break;
    }
  }
  return j;
}

nlohmann::ordered_json SampleParams(const SearchSpace &space, uint64_t seed, int trial) {
  ValidateSpace(space);
  Rng rng(DeriveSeed(seed, static_cast<uint64_t>(trial)));
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto &r : space) {
    switch (r.kind) {
      case ParamRange::Kind::kInt:
        p[r.name] = rng.UniformInt(static_cast<int64_t>(r.lo), static_cast<int64_t>(r.hi));
        break;
      case ParamRange::Kind::kUniform:
        p[r.name] = r.lo == r.hi ? r.lo : rng.Uniform(r.lo, r.hi);
        break;
      case ParamRange::Kind::kLogUniform:
        p[r.name] = r.lo == r.hi ? r.lo
                                 : std::exp(rng.Uniform(std::log(r.lo), std::log(r.hi)));
        break;
      case ParamRange::Kind::kChoice:
        p[r.name] = r.choices[static_cast<size_t>(
            rng.UniformInt(0, static_cast<int64_t>(r.choices.size()) - 1))];
        break;
    }
  }
  return p;
}

std::vector<size_t> CvProblem::Rows(const std::vector<std::string> &ids) const {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < chunk_ids.size(); ++i) index.emplace(chunk_ids[i], i);
  std::vector<size_t> out;
  out.reserve(ids.size());
  for (const auto &id : ids) {
    auto it = index.find(id);
    if (it != index.end()) out.push_back(it->second);
  }
  return out;
}

std::vector<double> UniverseWeights(const CvProblem &problem, std::span<const size_t> rows) {
  std::vector<WeightKey> keys;
  keys.reserve(rows.size());
  for (size_t r : rows) keys.push_back(problem.weight_keys[r]);
  const GroupCounts counts = CountGroups(keys);
  std::vector<double> w(rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    w[i] = SampleWeight(keys[i], counts, problem.inverse_weights);
  return w;
}

TrialRecord CrossValidate(ModelKind kind, const nlohmann::json &params, const CvProblem &problem,
                          uint64_t seed, int jobs) {
  const size_t folds = problem.split.folds.size();
  std::vector<FoldScore> scores(folds);
  ParallelFor(folds, jobs, [&](size_t k) {
    scores[k] = RunFold(kind, params, problem, static_cast<int>(k), DeriveSeed(seed, k));
  });
  return Aggregate(0, params, scores);
}

SearchResult SearchAndRefit(ModelKind kind, const SearchSpace &space, const CvProblem &problem,
                            const SearchOptions &options, uint64_t seed, int jobs) {
  Require(options.n_iter >= 1, Errc::kConfig, "n_iter must be at least 1");
  ValidateSpace(space);
  const size_t n_iter = static_cast<size_t>(options.n_iter);
  const size_t folds = problem.split.folds.size();
  Require(folds >= 2, Errc::kSplit, "cross-validation needs at least two folds");

  std::vector<nlohmann::ordered_json> params(n_iter);
  for (size_t t = 0; t < n_iter; ++t) {
    auto it = options.planted.find(static_cast<int>(t));
    params[t] = it != options.planted.end() ? nlohmann::ordered_json(it->second)
                                            : SampleParams(space, seed, static_cast<int>(t));
  }
  std::vector<FoldScore> scores(n_iter * folds);
  ParallelFor(scores.size(), jobs, [&](size_t i) {
    const size_t t = i / folds, k = i % folds;
    const uint64_t trial_seed = DeriveSeed(seed, t);
    scores[i] = RunFold(kind, params[t], problem, static_cast<int>(k), DeriveSeed(trial_seed, k));
  });

  SearchResult result;
  for (size_t t = 0; t < n_iter; ++t) {
    result.trials.push_back(Aggregate(static_cast<int>(t), params[t],
                                      std::span<const FoldScore>(scores.data() + t * folds, folds)));
    const TrialRecord &rec = result.trials.back();
    if (rec.failed)
      spdlog::warn("trial {} failed and is excluded: {}", t, rec.error);
    else
      result.ranking.push_back(t);
  }
  if (result.ranking.empty()) Fail(Errc::kSearch, "every trial failed");
  std::stable_sort(result.ranking.begin(), result.ranking.end(), [&](size_t a, size_t b) {
    return result.trials[a].valid_mean > result.trials[b].valid_mean;
  });

  const TrialRecord &best = result.trials[result.ranking.front()];
  result.best_params = best.params;
  const std::vector<size_t> dev = problem.Rows(problem.split.Development());
  Require(!dev.empty(), Errc::kData, "development set has no feature rows");
  const std::vector<double> w = UniverseWeights(problem, dev);
  Matrix x = problem.x.SelectRows(dev);
  result.scaler.Fit(x, AllRows(x.rows()), problem.scaled_columns);
  result.scaler.Transform(x);
  result.model = TabularModel::Fit(kind, best.params, x, Gather(problem.y, dev), w,
                                   DeriveSeed(seed, kRefitStream), jobs);
  return result;
}

std::string LeaderboardCsv(const SearchResult &result) {
  std::string out = "trial,params,f1_train_mean,f1_train_std,f1_valid_mean,f1_valid_std\n";
  for (size_t t : result.ranking) {
    const TrialRecord &r = result.trials[t];
    out += std::to_string(r.trial) + "," + CsvField(r.params.dump()) + "," +
           FormatDouble(r.train_mean) + "," + FormatDouble(r.train_std) + "," +
           FormatDouble(r.valid_mean) + "," + FormatDouble(r.valid_std) + "\n";
  }
  return out;
}

}  // namespace vpd
