// base/fft.cc

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

#include "base/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace vpd {
namespace {

enum class PlanKind { kR2C, kC2R, kForward, kBackward };

std::mutex &PlanMutex() {
  static std::mutex m;
  return m;
}

// Plans live for the process lifetime.
fftw_plan GetPlan(PlanKind kind, size_t n) {
  static std::map<std::pair<int, size_t>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(PlanMutex());
  auto key = std::make_pair(static_cast<int>(kind), n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const int ni = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = nullptr;
  double *real = fftw_alloc_real(n);
  fftw_complex *cplx = fftw_alloc_complex(n);
  fftw_complex *cplx2 = fftw_alloc_complex(n);
  switch (kind) {
    case PlanKind::kR2C:
      plan = fftw_plan_dft_r2c_1d(ni, real, cplx, flags);
      break;
    case PlanKind::kC2R:
      plan = fftw_plan_dft_c2r_1d(ni, cplx, real, flags);
      break;
    case PlanKind::kForward:
      plan = fftw_plan_dft_1d(ni, cplx, cplx2, FFTW_FORWARD, flags);
      break;
    case PlanKind::kBackward:
      plan = fftw_plan_dft_1d(ni, cplx, cplx2, FFTW_BACKWARD, flags);
      break;
  }
  fftw_free(real);
  fftw_free(cplx);
  fftw_free(cplx2);
  cache.emplace(key, plan);
  return plan;
}

fftw_complex *AsFftw(Complex *p) { return reinterpret_cast<fftw_complex *>(p); }

}  // namespace

size_t NextPow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<Complex> RealFft(std::span<const double> x, size_t n) {
  std::vector<double> in(n, 0.0);
  std::copy_n(x.begin(), std::min(n, x.size()), in.begin());
  std::vector<Complex> out(n / 2 + 1);
  fftw_execute_dft_r2c(GetPlan(PlanKind::kR2C, n), in.data(), AsFftw(out.data()));
  return out;
}

std::vector<double> InverseRealFft(std::span<const Complex> bins, size_t n) {
  // c2r destroys its input.
  std::vector<Complex> in(n / 2 + 1);
  std::copy_n(bins.begin(), std::min(in.size(), bins.size()), in.begin());
  std::vector<double> out(n);
  fftw_execute_dft_c2r(GetPlan(PlanKind::kC2R, n), AsFftw(in.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double &v : out) v *= scale;
  return out;
}

void ComplexFft(std::vector<Complex> &data, bool inverse) {
  const size_t n = data.size();
  std::vector<Complex> out(n);
  fftw_execute_dft(GetPlan(inverse ? PlanKind::kBackward : PlanKind::kForward, n),
                   AsFftw(data.data()), AsFftw(out.data()));
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (Complex &c : out) c *= scale;
  }
  data.swap(out);
}

std::vector<double> PowerSpectrum(std::span<const double> x, size_t n) {
  auto bins = RealFft(x, n);
  std::vector<double> p(bins.size());
  for (size_t k = 0; k < bins.size(); ++k) p[k] = std::norm(bins[k]);
  return p;
}

}  // namespace vpd
