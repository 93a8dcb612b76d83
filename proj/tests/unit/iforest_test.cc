// unit/iforest_test.cc

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

#include <cmath>
#include <numeric>

#include "base/rng.h"
#include "doctest.h"
#include "models/iforest.h"
#include "test_util.h"

namespace vpd {
namespace {

using testing::CodeOf;

double HarmonicC(size_t n) {
  double h = 0.0;
  for (size_t i = 1; i < n; ++i) h += 1.0 / static_cast<double>(i);
  return 2.0 * h - 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
}

// Exact expected path length of value x over random 1-D isolation trees
// grown on the multiset s: the split is uniform over (min, max), so each gap
// between consecutive distinct values is hit with probability proportional
// to its width.
double ExpectedPath(double x, std::vector<double> s, int depth, int cap) {
  std::sort(s.begin(), s.end());
  if (depth >= cap || s.size() <= 1 || s.front() == s.back())
    return depth + CFactor(s.size());
  std::vector<double> u = s;
  u.erase(std::unique(u.begin(), u.end()), u.end());
  const double width = u.back() - u.front();
  double e = 0.0;
  for (size_t i = 0; i + 1 < u.size(); ++i) {
    const double p = (u[i + 1] - u[i]) / width;
    std::vector<double> side;
    for (double v : s)
      if ((v <= u[i]) == (x <= u[i])) side.push_back(v);
    e += p * ExpectedPath(x, side, depth + 1, cap);
  }
  return e;
}

Matrix Blob(size_t n, uint64_t seed, size_t d = 2) {
  Rng rng(seed);
  Matrix x(n, d);
  for (double &v : x.data()) v = rng.Normal();
  return x;
}

std::vector<size_t> Iota(size_t n) {
  std::vector<size_t> v(n);
  std::iota(v.begin(), v.end(), size_t{0});
  return v;
}

}  // namespace

TEST_CASE("c factor") {
  CHECK(CFactor(0) == 0.0);
  CHECK(CFactor(1) == 0.0);
  CHECK(CFactor(2) == 1.0);
  CHECK(std::abs(CFactor(256) - 10.2448) < 0.02);
  CHECK(std::abs(CFactor(256) - HarmonicC(256)) < 0.02);
  for (size_t n = 3; n <= 4096; ++n) {
    const double exact = HarmonicC(n);
    REQUIRE(std::abs(CFactor(n) - exact) <= 0.003 * exact);
  }
}

TEST_CASE("constant matrix gives single-node trees") {
  IForestParams p;
  p.n_estimators = 20;
  p.contamination = 0.3;
  const IForest f = FitIForest(Matrix(50, 3, 2.5), p, 1);
  for (const auto &t : f.trees) {
    REQUIRE(t.nodes.size() == 1);
    CHECK(t.nodes[0].size == static_cast<int>(f.psi));
  }
  // Every path is c(psi), so every score is 0.5 and the tie flags everything.
  const auto s = f.Scores(Matrix(50, 3, 2.5));
  for (double v : s) CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
  const auto c = f.Classify(Matrix(50, 3, 2.5));
  CHECK(std::accumulate(c.begin(), c.end(), 0) == 50);
}

TEST_CASE("tree height respects the cap") {
  const Matrix x = Blob(500, 3, 4);
  for (int psi : {8, 20, 64, 256}) {
    IForestParams p;
    p.n_estimators = 30;
    p.max_samples = psi;
    const IForest f = FitIForest(x, p, 7);
    const int cap = static_cast<int>(std::ceil(std::log2(psi)));
    for (const auto &t : f.trees) {
      CHECK(t.Height() <= cap);
      int points = 0;
      for (const auto &n : t.nodes)
        if (n.feature < 0) points += n.size;
      CHECK(points == psi);
    }
  }
}

TEST_CASE("score fixed point") {
  IForest f;
  f.n_features = 1;
  f.psi = 64;
  ITree t;
  t.nodes.push_back(ITreeNode{-1, 0.0, -1, -1, 64});
  f.trees.push_back(t);
  const std::vector<double> x = {0.0};
  CHECK(f.Score(x) == doctest::Approx(0.5).epsilon(1e-15));
  // Shorter paths score higher.
  f.trees[0].nodes[0].size = 10;
  CHECK(f.Score(x) > 0.5);
}

TEST_CASE("a far outlier scores above every inlier") {
  Matrix x = Blob(256, 11);
  Matrix with(257, 2);
  std::copy(x.data().begin(), x.data().end(), with.data().begin());
  with(256, 0) = 8.0;
  with(256, 1) = 8.0;
  IForestParams p;
  p.n_estimators = 100;
  p.max_samples = 64;
  const IForest f = FitIForest(with, p, 5);
  const auto s = f.Scores(with);
  for (size_t i = 0; i < 256; ++i) CHECK(s[i] < s[256]);
}

TEST_CASE("contamination sets the flagged share") {
  const Matrix x = Blob(100, 12);
  IForestParams p;
  p.n_estimators = 50;
  p.contamination = 0.4;
  const IForest f = FitIForest(x, p, 3);
  const auto c = f.Classify(x);
  const int flagged = std::accumulate(c.begin(), c.end(), 0);
  CHECK(flagged >= 39);
  CHECK(flagged <= 41);

  p.contamination = 1e-9;
  const IForest tight = FitIForest(x, p, 3);
  const auto s = tight.Scores(x);
  const double max = *std::max_element(s.begin(), s.end());
  const auto ct = tight.Classify(x);
  for (size_t i = 0; i < s.size(); ++i) CHECK(ct[i] == (s[i] == max ? 1 : 0));
}

TEST_CASE("quantile") {
  CHECK(Quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(Quantile({1, 2}, 0.25) == 1.25);
  CHECK(Quantile({4}, 0.9) == 4.0);
  CHECK(CodeOf([] { Quantile({}, 0.5); }) == Errc::kInvalidArgument);
}

TEST_CASE("permuting columns with a matching column order keeps the scores") {
  const Matrix x = Blob(120, 4, 5);
  const std::vector<size_t> perm = {3, 0, 4, 1, 2};  // permuted column j holds original perm[j]
  Matrix y(x.rows(), 5);
  for (size_t r = 0; r < x.rows(); ++r)
    for (size_t j = 0; j < 5; ++j) y(r, j) = x(r, perm[j]);
  std::vector<size_t> order(5);
  for (size_t j = 0; j < 5; ++j) order[perm[j]] = j;
  IForestParams p;
  p.n_estimators = 40;
  p.max_samples = 32;
  const auto a = FitIForest(x, p, 9).Scores(x);
  const auto b = FitIForest(y, p, 9, 1, order).Scores(y);
  CHECK(a == b);
  CHECK(CodeOf([&] { FitIForest(y, p, 9, 1, std::vector<size_t>{0, 1}); }) == Errc::kDimension);
}

TEST_CASE("a duplicated row never shortens a path") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = static_cast<size_t>(rng.UniformInt(2, 12));
    Matrix x(n + 1, 2);
    for (size_t r = 0; r < n; ++r)
      for (size_t c = 0; c < 2; ++c) x(r, c) = static_cast<double>(rng.UniformInt(0, 5));
    const size_t dup = static_cast<size_t>(rng.UniformInt(0, static_cast<int64_t>(n) - 1));
    x(n, 0) = x(dup, 0);
    x(n, 1) = x(dup, 1);
    const auto base = Iota(n), more = Iota(n + 1), feats = Iota(2);
    const uint64_t seed = rng.NextU64();
    Rng r1(seed), r2(seed);
    const ITree a = GrowITree(x, base, feats, 64, r1);
    const ITree b = GrowITree(x, more, feats, 64, r2);
    CHECK(a.Height() == b.Height());
    for (size_t r = 0; r < n; ++r) CHECK(b.PathLength(x.row(r)) >= a.PathLength(x.row(r)));
  }
}

TEST_CASE("expected path lengths match the exact recursion") {
  const std::vector<double> v = {0.0, 1.0, 1.0, 3.0, 4.5, 7.0, 7.5, 10.0};
  Matrix x(v.size(), 1);
  for (size_t i = 0; i < v.size(); ++i) x(i, 0) = v[i];
  IForestParams p;
  p.n_estimators = 4000;
  p.max_samples = static_cast<int>(v.size());
  const IForest f = FitIForest(x, p, 31);
  const double c = CFactor(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    const double mean_path = -std::log2(f.Score(x.row(i))) * c;
    const double exact = ExpectedPath(v[i], v, 0, 3);
    CHECK(mean_path == doctest::Approx(exact).epsilon(0.03));
  }
  // Adding a duplicate lengthens the exact expectation as well.
  std::vector<double> w = v;
  w.push_back(4.5);
  for (double q : v) CHECK(ExpectedPath(q, w, 0, 64) >= ExpectedPath(q, v, 0, 64) - 1e-12);
}

TEST_CASE("same seed gives the same forest") {
  const Matrix x = Blob(200, 8, 3);
  IForestParams p;
  p.n_estimators = 25;
  p.max_samples = 48;
  p.max_features = 0.67;
  const std::string a = ToJson(FitIForest(x, p, 4, 1)).dump();
  CHECK(a == ToJson(FitIForest(x, p, 4, 3)).dump());
  CHECK(a != ToJson(FitIForest(x, p, 5, 1)).dump());
}

TEST_CASE("JSON roundtrip is exact") {
  const Matrix x = Blob(90, 10, 3);
  IForestParams p;
  p.n_estimators = 15;
  p.contamination = 0.45;
  const IForest f = FitIForest(x, p, 2);
  const IForest back = IForestFromJson(nlohmann::json::parse(ToJson(f).dump()));
  CHECK(back.threshold == f.threshold);
  CHECK(back.Scores(x) == f.Scores(x));
  CHECK(ToJson(back).dump() == ToJson(f).dump());
  CHECK(ToJson(p)["max_samples"] == "auto");
}

TEST_CASE("parameter and size errors") {
  IForestParams p;
  p.contamination = 0.0;
  CHECK(CodeOf([&] { p.Validate(); }) == Errc::kConfig);
  p = IForestParams{};
  p.n_estimators = 0;
  CHECK(CodeOf([&] { p.Validate(); }) == Errc::kConfig);
  CHECK(CodeOf([] { FitIForest(Matrix(1, 2), IForestParams{}, 1); }) == Errc::kDimension);
  p = IForestParams{};
  p.n_estimators = 2;
  p.max_samples = 500;
  const IForest f = FitIForest(Blob(30, 1), p, 1);
  CHECK(f.psi == 30);
  CHECK(CodeOf([&] { f.Scores(Matrix(2, 3)); }) == Errc::kDimension);
}

}  // namespace vpd
