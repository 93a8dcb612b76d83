// unit/metrics_test.cc

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

#include "base/rng.h"
#include "doctest.h"
#include "eval/metrics.h"
#include "test_util.h"

namespace vpd {
namespace {

using testing::CodeOf;

ConfusionMatrix Cm(long hh, long hp, long ph, long pp) {
  ConfusionMatrix cm;
  cm.counts = {{{hh, hp}, {ph, pp}}};
  return cm;
}

long Milli(double v) { return std::lround(v * 1000.0); }

// Label vectors realizing a confusion matrix.
void Expand(const ConfusionMatrix &cm, std::vector<int> *t, std::vector<int> *p) {
  for (int pred = 0; pred < 2; ++pred)
    for (int truth = 0; truth < 2; ++truth)
      for (long i = 0; i < cm.counts[pred][truth]; ++i) {
        t->push_back(truth);
        p->push_back(pred);
      }
}

}  // namespace

TEST_CASE("gradient boosting fixture") {
  const ConfusionMatrix cm = Cm(82, 26, 38, 94);
  std::vector<int> t, p;
  Expand(cm, &t, &p);
  CHECK(Confusion(t, p).counts == cm.counts);
  const Report r = MakeReport(cm);
  CHECK(Milli(r.classes[0].precision) == 759);
  CHECK(Milli(r.classes[1].precision) == 712);
  CHECK(Milli(r.classes[0].recall) == 683);
  CHECK(Milli(r.classes[1].recall) == 783);
  CHECK(Milli(r.classes[0].f1) == 719);
  CHECK(Milli(r.classes[1].f1) == 746);
  CHECK(Milli(r.average.f1) == 733);
  CHECK(Milli(r.accuracy) == 733);
  CHECK(r.classes[0].support == 120);
  CHECK(r.average.support == 240);
  const std::string text = RenderTables("XGBoost", cm);
  CHECK(text.find("Testing CM for XGBoost") != std::string::npos);
  CHECK(text.find("accuracy: 0.733") != std::string::npos);
  CHECK(text.find("0.759") != std::string::npos);
  CHECK(ConfusionCsv(cm) == ",true_H,true_P\npred_H,82,26\npred_P,38,94\n");
}

TEST_CASE("neural network fixture") {
  const Report r = MakeReport(Cm(73, 44, 47, 76));
  CHECK(Milli(r.average.f1) == 621);
  CHECK(Milli(r.classes[0].f1) == 616);
  CHECK(Milli(r.classes[1].f1) == 626);
}

TEST_CASE("isolation forest fixture") {
  const Report r = MakeReport(Cm(58, 30, 62, 90));
  CHECK(Milli(r.average.f1) == 610);
  CHECK(Milli(r.accuracy) == 617);
}

TEST_CASE("degenerate predictions") {
  const Report perfect = MakeReport(Cm(10, 0, 0, 10));
  for (const auto &c : perfect.classes) {
    CHECK(c.precision == 1.0);
    CHECK(c.recall == 1.0);
    CHECK(c.f1 == 1.0);
    CHECK(!c.zero_division);
  }
  const Report all_p = MakeReport(Cm(0, 0, 50, 50));
  CHECK(all_p.classes[1].precision == 0.5);
  CHECK(all_p.classes[1].recall == 1.0);
  CHECK(all_p.classes[1].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(all_p.classes[0].zero_division);
  CHECK(all_p.classes[0].precision == 0.0);
  CHECK(all_p.classes[0].f1 == 0.0);
  CHECK(!all_p.classes[1].zero_division);
  CHECK(CodeOf([] { MakeReport(ConfusionMatrix{}); }) == Errc::kInvalidArgument);
}

TEST_CASE("confusion errors") {
  const std::vector<int> empty;
  CHECK(CodeOf([&] { Confusion(empty, empty); }) == Errc::kInvalidArgument);
  const std::vector<int> a = {0, 1}, b = {0};
  CHECK(CodeOf([&] { Confusion(a, b); }) == Errc::kInvalidArgument);
  const std::vector<int> bad = {0, 2};
  CHECK(CodeOf([&] { Confusion(a, bad); }) == Errc::kData);
}

TEST_CASE("metrics agree with a counting oracle") {
  Rng rng(77);
  for (int trial = 0; trial < 10000; ++trial) {
    const size_t n = static_cast<size_t>(rng.UniformInt(1, 40));
    std::vector<int> t(n), p(n);
    for (size_t i = 0; i < n; ++i) {
      t[i] = static_cast<int>(rng.UniformInt(0, 1));
      p[i] = static_cast<int>(rng.UniformInt(0, 1));
    }
    const Report r = MakeReport(Confusion(t, p));
    long correct = 0;
    for (size_t i = 0; i < n; ++i) correct += t[i] == p[i];
    REQUIRE(r.accuracy == static_cast<double>(correct) / static_cast<double>(n));
    double weighted = 0.0;
    for (int c = 0; c < 2; ++c) {
      long tp = 0, fp = 0, fn = 0;
      for (size_t i = 0; i < n; ++i) {
        tp += p[i] == c && t[i] == c;
        fp += p[i] == c && t[i] != c;
        fn += p[i] != c && t[i] == c;
      }
      const double prec = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
      const double rec = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
      const double f1 = prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
      const ClassMetrics &m = r.classes[static_cast<size_t>(c)];
      REQUIRE(m.precision == prec);
      REQUIRE(m.recall == rec);
      REQUIRE(m.f1 == f1);
      REQUIRE(m.support == tp + fn);
      REQUIRE(m.zero_division == (tp + fp == 0 || tp + fn == 0 || prec + rec == 0.0));
      weighted += f1 * static_cast<double>(tp + fn);
    }
    REQUIRE(r.average.f1 == doctest::Approx(weighted / static_cast<double>(n)).epsilon(1e-15));
  }
}

TEST_CASE("equal supports average to the plain mean") {
  const Report r = MakeReport(Cm(30, 12, 20, 38));
  CHECK(r.average.f1 == doctest::Approx(0.5 * (r.classes[0].f1 + r.classes[1].f1)));
  CHECK(r.accuracy == doctest::Approx(68.0 / 100.0));
}

TEST_CASE("report JSON") {
  const ConfusionMatrix cm = Cm(82, 26, 38, 94);
  const auto j = ReportToJson("XGBoost", cm);
  CHECK(j["title"] == "XGBoost");
  CHECK(ConfusionFromJson(nlohmann::json::parse(j.dump())).counts == cm.counts);
  auto parse = [](const char *s) { return ConfusionFromJson(nlohmann::json::parse(s)); };
  CHECK(CodeOf([&] { parse(R"({"cm": [[1, 2]]})"); }) == Errc::kData);
  CHECK(CodeOf([&] { parse(R"({"cm": [[1, 2], [3, "x"]]})"); }) == Errc::kData);
  CHECK(CodeOf([&] { parse(R"({"cm": [[1, -2], [3, 4]]})"); }) == Errc::kData);
  CHECK(CodeOf([&] { parse(R"({"cm": [[1, 0], [3, 0]]})"); }) == Errc::kData);
  CHECK(CodeOf([&] { parse(R"({"title": "x"})"); }) == Errc::kData);
}

}  // namespace vpd
