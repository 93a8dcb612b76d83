// eval/metrics.h

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

#ifndef VPD_EVAL_METRICS_H_
#define VPD_EVAL_METRICS_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace vpd {

// counts[predicted][true], index 0 = H, 1 = P.
struct ConfusionMatrix {
  std::array<std::array<long, 2>, 2> counts{};

  long total() const;
  long true_support(int cls) const { return counts[0][cls] + counts[1][cls]; }
  long predicted_total(int cls) const { return counts[cls][0] + counts[cls][1]; }
  double accuracy() const;
};

// Labels are 0 (H) / 1 (P). Throws kInvalidArgument for empty or mismatched
// inputs and kData for any other label value.
ConfusionMatrix Confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
  bool zero_division = false;  // some ratio had a zero denominator and was set to 0
};

struct Report {
  std::array<ClassMetrics, 2> classes;  // H, P
  ClassMetrics average;                 // support-weighted
  double accuracy = 0.0;
};

// Per-class precision tp/(tp+fp), recall tp/(tp+fn), F1 2PR/(P+R); zero
// denominators give 0 and set the flag. Throws kInvalidArgument on an empty
// matrix.
Report MakeReport(const ConfusionMatrix &cm);

// Pooled F1 over both classes; identical to accuracy for single-label binary
// predictions.
double F1Micro(std::span<const int> y_true, std::span<const int> y_pred);

// {"title", "cm": [[pred H: true H, true P], [pred P: ...]], "report": {...}}
nlohmann::ordered_json ReportToJson(const std::string &title, const ConfusionMatrix &cm);

// Inverse of the "cm" part; throws kData when the matrix is malformed or a
// class has no true samples.
ConfusionMatrix ConfusionFromJson(const nlohmann::json &j);

// "Testing CM for <title>" and "Testing CR for <title>" text tables,
// 3 decimals.
std::string RenderTables(const std::string &title, const ConfusionMatrix &cm);

// 2x2 CSV: header ",true_H,true_P", rows pred_H and pred_P.
std::string ConfusionCsv(const ConfusionMatrix &cm);

}  // namespace vpd

#endif  // VPD_EVAL_METRICS_H_
