// feat/lpc.cc

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

#include "feat/lpc.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "base/error.h"

namespace vpd {

std::vector<double> LpcInverseFilter(std::span<const double> x, int order) {
  const size_t n = x.size();
  if (order < 1 || n <= static_cast<size_t>(order))
    Fail(Errc::kInvalidArgument, "LPC: signal shorter than the model order");
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i)
    w[i] = x[i] * (0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1)));
  std::vector<double> r(order + 1, 0.0);
  for (int k = 0; k <= order; ++k)
    for (size_t i = k; i < n; ++i) r[k] += w[i] * w[i - k];
  std::vector<double> a(order + 1, 0.0);
  a[0] = 1.0;
  if (r[0] <= 0.0) return a;
  r[0] *= 1.0 + 1e-9;  // white-noise correction keeps the recursion stable

  // Levinson-Durbin.
  double err = r[0];
  std::vector<double> prev(order + 1);
  for (int i = 1; i <= order; ++i) {
    double acc = r[i];
    for (int j = 1; j < i; ++j) acc += a[j] * r[i - j];
    const double k = -acc / err;
    prev = a;
    for (int j = 1; j < i; ++j) a[j] = prev[j] + k * prev[i - j];
    a[i] = k;
    err *= 1.0 - k * k;
    if (err <= 0.0) break;
  }
  return a;
}

std::vector<double> FirFilter(std::span<const double> a, std::span<const double> x) {
  std::vector<double> y(x.size(), 0.0);
  for (size_t i = 0; i < x.size(); ++i) {
    double acc = 0.0;
    const size_t kmax = std::min(a.size() - 1, i);
    for (size_t k = 0; k <= kmax; ++k) acc += a[k] * x[i - k];
    y[i] = acc;
  }
  return y;
}

std::vector<double> PreEmphasis(std::span<const double> x, double coeff) {
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] - (i > 0 ? coeff * x[i - 1] : 0.0);
  return y;
}

}  // namespace vpd
