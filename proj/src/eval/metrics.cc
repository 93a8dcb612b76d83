// eval/metrics.cc

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

#include "eval/metrics.h"

#include <cstdio>

#include "base/error.h"

namespace vpd {
namespace {

double Ratio(long num, long den, bool *flag) {
  if (den == 0) {
    *flag = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string Pad(const std::string &s, size_t width, bool left_align = false) {
  if (s.size() >= width) return s;
  return left_align ? s + std::string(width - s.size(), ' ')
                    : std::string(width - s.size(), ' ') + s;
}

}  // namespace

long ConfusionMatrix::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

double ConfusionMatrix::accuracy() const {
  const long n = total();
  return n > 0 ? static_cast<double>(counts[0][0] + counts[1][1]) / static_cast<double>(n) : 0.0;
}

ConfusionMatrix Confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size())
    Fail(Errc::kInvalidArgument, "label vectors differ in length");
  if (y_true.empty()) Fail(Errc::kInvalidArgument, "no labels to compare");
  ConfusionMatrix cm;
  for (size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1))
      Fail(Errc::kData, "label outside {H, P} at position " + std::to_string(i));
    ++cm.counts[static_cast<size_t>(p)][static_cast<size_t>(t)];
  }
  return cm;
}

Report MakeReport(const ConfusionMatrix &cm) {
  const long n = cm.total();
  if (n <= 0) Fail(Errc::kInvalidArgument, "empty confusion matrix");
  Report r;
  for (int c = 0; c < 2; ++c) {
    ClassMetrics &m = r.classes[static_cast<size_t>(c)];
    const long tp = cm.counts[static_cast<size_t>(c)][static_cast<size_t>(c)];
    m.support = cm.true_support(c);
    m.precision = Ratio(tp, cm.predicted_total(c), &m.zero_division);
    m.recall = Ratio(tp, m.support, &m.zero_division);
    const double s = m.precision + m.recall;
    if (s > 0.0) {
      m.f1 = 2.0 * m.precision * m.recall / s;
    } else {
      m.f1 = 0.0;
      m.zero_division = true;
    }
  }
  ClassMetrics &avg = r.average;
  avg.support = n;
  for (const auto &m : r.classes) {
    const double w = static_cast<double>(m.support) / static_cast<double>(n);
    avg.precision += w * m.precision;
    avg.recall += w * m.recall;
    avg.f1 += w * m.f1;
    avg.zero_division = avg.zero_division || m.zero_division;
  }
  r.accuracy = cm.accuracy();
  return r;
}

double F1Micro(std::span<const int> y_true, std::span<const int> y_pred) {
  // Pooled over classes, tp = trace and fp = fn = off-diagonal total.
  const ConfusionMatrix cm = Confusion(y_true, y_pred);
  const double tp = static_cast<double>(cm.counts[0][0] + cm.counts[1][1]);
  const double off = static_cast<double>(cm.counts[0][1] + cm.counts[1][0]);
  return 2.0 * tp / (2.0 * tp + 2.0 * off);
}

nlohmann::ordered_json ReportToJson(const std::string &title, const ConfusionMatrix &cm) {
  const Report r = MakeReport(cm);
  auto metrics = [](const ClassMetrics &m) {
    nlohmann::ordered_json j;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["support"] = m.support;
    j["zero_division"] = m.zero_division;
    return j;
  };
  nlohmann::ordered_json j;
  j["title"] = title;
  j["cm"] = {{cm.counts[0][0], cm.counts[0][1]}, {cm.counts[1][0], cm.counts[1][1]}};
  j["report"]["H"] = metrics(r.classes[0]);
  j["report"]["P"] = metrics(r.classes[1]);
  j["report"]["average"] = metrics(r.average);
  j["report"]["accuracy"] = r.accuracy;
  return j;
}

ConfusionMatrix ConfusionFromJson(const nlohmann::json &j) {
  ConfusionMatrix cm;
  try {
    const auto &m = j.at("cm");
    if (!m.is_array() || m.size() != 2) Fail(Errc::kData, "cm must be a 2x2 array");
    for (size_t p = 0; p < 2; ++p) {
      if (!m[p].is_array() || m[p].size() != 2) Fail(Errc::kData, "cm must be a 2x2 array");
      for (size_t t = 0; t < 2; ++t) {
        const long v = m[p][t].get<long>();
        if (v < 0) Fail(Errc::kData, "negative count in cm");
        cm.counts[p][t] = v;
      }
    }
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kData, std::string("malformed report: ") + e.what());
  }
  for (int c = 0; c < 2; ++c)
    if (cm.true_support(c) == 0)
      Fail(Errc::kData, std::string("report has no true samples of class ") + (c ? "P" : "H"));
  return cm;
}

std::string RenderTables(const std::string &title, const ConfusionMatrix &cm) {
  const Report r = MakeReport(cm);
  auto n = [](long v) { return std::to_string(v); };
  std::string out;
  out += "Testing CM for " + title + "\n";
  out += Pad("", 14, true) + Pad("true H", 8) + Pad("true P", 8) + "  total predicted\n";
  for (int p = 0; p < 2; ++p) {
    out += Pad(p ? "predicted P" : "predicted H", 14, true) +
           Pad(n(cm.counts[static_cast<size_t>(p)][0]), 8) +
           Pad(n(cm.counts[static_cast<size_t>(p)][1]), 8) + "  " + n(cm.predicted_total(p)) +
           "\n";
  }
  out += Pad("total true", 14, true) + Pad(n(cm.true_support(0)), 8) +
         Pad(n(cm.true_support(1)), 8) + "  accuracy: " + Fixed3(r.accuracy) + "\n\n";

  out += "Testing CR for " + title + "\n";
  out += Pad("", 14, true) + Pad("precision", 11) + Pad("recall", 8) + Pad("f1-score", 10) +
         Pad("no. samples", 13) + "\n";
  auto row = [&](const std::string &name, const ClassMetrics &m) {
    out += Pad(name, 14, true) + Pad(Fixed3(m.precision), 11) + Pad(Fixed3(m.recall), 8) +
           Pad(Fixed3(m.f1), 10) + Pad(n(m.support), 13) + "\n";
  };
  row("class H", r.classes[0]);
  row("class P", r.classes[1]);
  row("avg. / total", r.average);
  return out;
}

std::string ConfusionCsv(const ConfusionMatrix &cm) {
  std::string out = ",true_H,true_P\n";
  for (int p = 0; p < 2; ++p) {
    const auto &row = cm.counts[static_cast<size_t>(p)];
    out += std::string(p ? "pred_P," : "pred_H,") + std::to_string(row[0]) + "," +
           std::to_string(row[1]) + "\n";
  }
  return out;
}

}  // namespace vpd
