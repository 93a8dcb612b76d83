// models/gbt.cc

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

#include "models/gbt.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "base/error.h"
#include "base/rng.h"

namespace vpd {
namespace {

constexpr double kRateClamp = 1e-6;

double Sigmoid(double m) { return 1.0 / (1.0 + std::exp(-m)); }

double Score(double g, double h, double lambda) { return g * g / (h + lambda); }

// Scans one feature whose node rows are already sorted by value and updates
// best when a strictly better split is found. Features must be visited in
// ascending index order for the tie-break to hold.
void ScanFeature(const Matrix &x, std::span<const double> g, std::span<const double> h,
                 std::span<const size_t> sorted, size_t feature, double g_total,
                 double h_total, const GbtParams &p, std::optional<SplitCandidate> *best) {
  const double parent = Score(g_total, h_total, p.lambda);
  double gl = 0.0, hl = 0.0;
  for (size_t k = 0; k + 1 < sorted.size(); ++k) {
    const size_t r = sorted[k];
    gl += g[r];
    hl += h[r];
    const double v = x(r, feature), next = x(sorted[k + 1], feature);
    if (!(next > v)) continue;
    const double gr = g_total - gl, hr = h_total - hl;
    if (hl < p.min_child_weight || hr < p.min_child_weight) continue;
    const double gain =
        0.5 * (Score(gl, hl, p.lambda) + Score(gr, hr, p.lambda) - parent) - p.gamma;
    if (!(gain > 0.0)) continue;
    if (!*best || gain > (*best)->gain) {
      const double thr = 0.5 * (v + next);
      // Midpoints of adjacent doubles can round onto the lower value.
      *best = SplitCandidate{static_cast<int>(feature), thr > v ? thr : next, gain};
    }
  }
}

std::vector<size_t> SortedBy(const Matrix &x, std::span<const size_t> rows, size_t feature) {
  std::vector<size_t> out(rows.begin(), rows.end());
  std::sort(out.begin(), out.end(), [&](size_t a, size_t b) {
    const double va = x(a, feature), vb = x(b, feature);
    return va < vb || (va == vb && a < b);
  });
  return out;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix &x, std::span<const double> g, std::span<const double> h,
              std::span<const size_t> features, const GbtParams &p)
      : x_(x), g_(g), h_(h), features_(features), p_(p) {}

  GbtTree Build(std::span<const size_t> rows) {
    std::vector<std::vector<size_t>> sorted;
    sorted.reserve(features_.size());
    for (size_t f : features_) sorted.push_back(SortedBy(x_, rows, f));
    Grow(std::move(sorted), std::vector<size_t>(rows.begin(), rows.end()), 0);
    return std::move(tree_);
  }

 private:
  // sorted[j] holds the node rows ordered by features_[j]; rows is the node
  // in the caller's order, used for the totals.
  int Grow(std::vector<std::vector<size_t>> sorted, std::vector<size_t> rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double gt = 0.0, ht = 0.0;
    for (size_t r : rows) {
      gt += g_[r];
      ht += h_[r];
    }
    std::optional<SplitCandidate> best;
    const bool depth_ok = p_.max_depth <= 0 || depth < p_.max_depth;
    if (depth_ok && rows.size() >= 2)
      for (size_t j = 0; j < features_.size(); ++j)
        ScanFeature(x_, g_, h_, sorted[j], features_[j], gt, ht, p_, &best);
    if (!best) {
      tree_.nodes[static_cast<size_t>(id)].leaf_weight = -gt / (ht + p_.lambda) * p_.learning_rate;
      return id;
    }
    const size_t f = static_cast<size_t>(best->feature);
    auto goes_left = [&](size_t r) { return x_(r, f) < best->threshold; };
    std::vector<std::vector<size_t>> ls(sorted.size()), rs(sorted.size());
    for (size_t j = 0; j < sorted.size(); ++j)
      for (size_t r : sorted[j]) (goes_left(r) ? ls[j] : rs[j]).push_back(r);
    std::vector<size_t> lrows, rrows;
    for (size_t r : rows) (goes_left(r) ? lrows : rrows).push_back(r);
    sorted.clear();
    rows.clear();

    const int left = Grow(std::move(ls), std::move(lrows), depth + 1);
    const int right = Grow(std::move(rs), std::move(rrows), depth + 1);
    GbtNode &node = tree_.nodes[static_cast<size_t>(id)];
    node.feature = best->feature;
    node.threshold = best->threshold;
    node.gain = best->gain;
    node.left = left;
    node.right = right;
    return id;
  }

  const Matrix &x_;
  std::span<const double> g_, h_;
  std::span<const size_t> features_;
  const GbtParams &p_;
  GbtTree tree_;
};

}  // namespace

void GbtParams::Validate() const {
  Require(n_estimators >= 1, Errc::kConfig, "gbt: n_estimators must be at least 1");
  Require(learning_rate > 0.0 && learning_rate <= 1.0, Errc::kConfig,
          "gbt: learning_rate outside (0, 1]");
  Require(gamma >= 0.0, Errc::kConfig, "gbt: gamma must be non-negative");
  Require(max_depth >= 0, Errc::kConfig, "gbt: max_depth must be non-negative");
  Require(min_child_weight >= 0.0, Errc::kConfig, "gbt: min_child_weight must be non-negative");
  Require(subsample > 0.0 && subsample <= 1.0, Errc::kConfig, "gbt: subsample outside (0, 1]");
  Require(colsample_bytree > 0.0 && colsample_bytree <= 1.0, Errc::kConfig,
          "gbt: colsample_bytree outside (0, 1]");
  Require(lambda >= 0.0, Errc::kConfig, "gbt: lambda must be non-negative");
}

nlohmann::ordered_json ToJson(const GbtParams &p) {
  nlohmann::ordered_json j;
  j["n_estimators"] = p.n_estimators;
  j["learning_rate"] = p.learning_rate;
  j["gamma"] = p.gamma;
  j["max_depth"] = p.max_depth;
  j["min_child_weight"] = p.min_child_weight;
  j["subsample"] = p.subsample;
  j["colsample_bytree"] = p.colsample_bytree;
  j["lambda"] = p.lambda;
  return j;
}

GbtParams GbtParamsFromJson(const nlohmann::json &j) {
  GbtParams p;
  try {
    p.n_estimators = j.value("n_estimators", p.n_estimators);
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.gamma = j.value("gamma", p.gamma);
    p.max_depth = j.value("max_depth", p.max_depth);
    p.min_child_weight = j.value("min_child_weight", p.min_child_weight);
    p.subsample = j.value("subsample", p.subsample);
    p.colsample_bytree = j.value("colsample_bytree", p.colsample_bytree);
    p.lambda = j.value("lambda", p.lambda);
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kConfig, std::string("gbt params: ") + e.what());
  }
  p.Validate();
  return p;
}

double GbtTree::Predict(std::span<const double> x) const {
  size_t i = 0;
  while (!nodes[i].is_leaf())
    i = static_cast<size_t>(x[static_cast<size_t>(nodes[i].feature)] < nodes[i].threshold
                                ? nodes[i].left
                                : nodes[i].right);
  return nodes[i].leaf_weight;
}

int GbtTree::Depth() const {
  std::vector<int> depth(nodes.size(), 0);
  int out = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    out = std::max(out, depth[i]);
    if (!nodes[i].is_leaf()) {
      depth[static_cast<size_t>(nodes[i].left)] = depth[i] + 1;
      depth[static_cast<size_t>(nodes[i].right)] = depth[i] + 1;
    }
  }
  return out;
}

double GbtModel::Margin(std::span<const double> x) const {
  double m = base_score;
  for (const auto &t : trees) m += t.Predict(x);
  return m;
}

std::vector<double> GbtModel::PredictProba(const Matrix &x) const {
  if (x.cols() != n_features)
    Fail(Errc::kDimension, "gbt: model expects " + std::to_string(n_features) +
                               " features, got " + std::to_string(x.cols()));
  std::vector<double> p(x.rows());
  for (size_t r = 0; r < x.rows(); ++r) p[r] = Sigmoid(Margin(x.row(r)));
  return p;
}

GradHess LogisticGradHess(int y, double p, double w) {
  return {w * (p - static_cast<double>(y)), w * p * (1.0 - p)};
}

double LogLoss(std::span<const int> y, std::span<const double> p, std::span<const double> w) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double q = std::clamp(p[i], 1e-15, 1.0 - 1e-15);
    num -= w[i] * (y[i] ? std::log(q) : std::log1p(-q));
    den += w[i];
  }
  return den > 0.0 ? num / den : 0.0;
}

std::optional<SplitCandidate> BestSplit(const Matrix &x, std::span<const double> g,
                                        std::span<const double> h,
                                        std::span<const size_t> rows,
                                        std::span<const size_t> features,
                                        const GbtParams &params) {
  std::optional<SplitCandidate> best;
  if (rows.size() < 2) return best;
  double gt = 0.0, ht = 0.0;
  for (size_t r : rows) {
    gt += g[r];
    ht += h[r];
  }
  std::vector<size_t> order(features.begin(), features.end());
  std::sort(order.begin(), order.end());
  for (size_t f : order) {
    const std::vector<size_t> sorted = SortedBy(x, rows, f);
    ScanFeature(x, g, h, sorted, f, gt, ht, params, &best);
  }
  return best;
}

GbtModel TrainGbt(const Matrix &x, std::span<const int> y, std::span<const double> w,
                  const GbtParams &params, uint64_t seed) {
  params.Validate();
  const size_t n = x.rows(), d = x.cols();
  if (y.size() != n || w.size() != n)
    Fail(Errc::kDimension, "gbt: X, y and w disagree on the number of rows");
  if (n == 0 || d == 0) Fail(Errc::kDimension, "gbt: empty training matrix");

  GbtModel model;
  model.params = params;
  model.n_features = d;
  double wpos = 0.0, wsum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    Require(w[i] >= 0.0 && std::isfinite(w[i]), Errc::kWeight, "gbt: invalid sample weight");
    Require(y[i] == 0 || y[i] == 1, Errc::kData, "gbt: labels must be 0 or 1");
    wpos += w[i] * y[i];
    wsum += w[i];
  }
  Require(wsum > 0.0, Errc::kWeight, "gbt: all sample weights are zero");
  const double rate = std::clamp(wpos / wsum, kRateClamp, 1.0 - kRateClamp);
  model.base_score = std::log(rate / (1.0 - rate));
  if (wpos == 0.0 || wpos == wsum) {
    spdlog::warn("gbt: single-class target, training a bias-only model");
    return model;
  }

  std::vector<double> margin(n, model.base_score), g(n), h(n);
  const size_t n_rows = static_cast<size_t>(std::ceil(params.subsample * static_cast<double>(n)));
  const size_t n_cols =
      static_cast<size_t>(std::ceil(params.colsample_bytree * static_cast<double>(d)));
  for (int round = 0; round < params.n_estimators; ++round) {
    for (size_t i = 0; i < n; ++i) {
      const GradHess gh = LogisticGradHess(y[i], Sigmoid(margin[i]), w[i]);
      g[i] = gh.g;
      h[i] = gh.h;
    }
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(round)));
    std::vector<size_t> rows, features;
    if (n_rows < n) {
      rows = rng.SampleWithoutReplacement(n, n_rows);
      std::sort(rows.begin(), rows.end());
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), size_t{0});
    }
    if (n_cols < d) {
      features = rng.SampleWithoutReplacement(d, n_cols);
      std::sort(features.begin(), features.end());
    } else {
      features.resize(d);
      std::iota(features.begin(), features.end(), size_t{0});
    }
    GbtTree tree = TreeBuilder(x, g, h, features, params).Build(rows);
    for (size_t i = 0; i < n; ++i) margin[i] += tree.Predict(x.row(i));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<std::pair<int, double>> FeatureImportance(const GbtModel &model) {
  std::vector<double> gain(model.n_features, 0.0);
  std::vector<bool> used(model.n_features, false);
  for (const auto &t : model.trees)
    for (const auto &node : t.nodes)
      if (!node.is_leaf()) {
        gain[static_cast<size_t>(node.feature)] += node.gain;
        used[static_cast<size_t>(node.feature)] = true;
      }
  std::vector<std::pair<int, double>> out;
  for (size_t f = 0; f < gain.size(); ++f)
    if (used[f]) out.emplace_back(static_cast<int>(f), gain[f]);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  return out;
}

nlohmann::ordered_json ToJson(const GbtModel &model) {
  nlohmann::ordered_json j;
  j["kind"] = "gbt";
  j["params"] = ToJson(model.params);
  j["n_features"] = model.n_features;
  j["base_score"] = model.base_score;
  j["trees"] = nlohmann::ordered_json::array();
  for (const auto &t : model.trees) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto &n : t.nodes) {
      nlohmann::ordered_json o;
      if (n.is_leaf()) {
        o["leaf_weight"] = n.leaf_weight;
      } else {
        o["feat"] = n.feature;
        o["thr"] = n.threshold;
        o["left"] = n.left;
        o["right"] = n.right;
        o["gain"] = n.gain;
      }
      nodes.push_back(std::move(o));
    }
    j["trees"].push_back({{"nodes", std::move(nodes)}});
  }
  return j;
}

GbtModel GbtModelFromJson(const nlohmann::json &j) {
  GbtModel m;
  try {
    if (j.value("kind", std::string("gbt")) != "gbt") Fail(Errc::kData, "not a gbt model");
    m.params = GbtParamsFromJson(j.at("params"));
    m.n_features = j.at("n_features").get<size_t>();
    m.base_score = j.at("base_score").get<double>();
    for (const auto &jt : j.at("trees")) {
      GbtTree t;
      for (const auto &jn : jt.at("nodes")) {
        GbtNode n;
        if (jn.contains("leaf_weight")) {
          n.leaf_weight = jn.at("leaf_weight").get<double>();
        } else {
          n.feature = jn.at("feat").get<int>();
          n.threshold = jn.at("thr").get<double>();
          n.left = jn.at("left").get<int>();
          n.right = jn.at("right").get<int>();
          n.gain = jn.value("gain", 0.0);
        }
        t.nodes.push_back(n);
      }
      const int size = static_cast<int>(t.nodes.size());
      if (size == 0) Fail(Errc::kData, "gbt: empty tree");
      for (int i = 0; i < size; ++i) {
        const GbtNode &n = t.nodes[static_cast<size_t>(i)];
        if (n.is_leaf()) continue;
        if (n.feature >= static_cast<int>(m.n_features) || n.left <= i || n.right <= i ||
            n.left >= size || n.right >= size)
          Fail(Errc::kData, "gbt: malformed tree node");
      }
      m.trees.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kData, std::string("gbt model: ") + e.what());
  }
  return m;
}

}  // namespace vpd
