// unit/spectral_test.cc

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

#include "feat/spectral.h"

#include <algorithm>
#include <cmath>

#include "base/fft.h"
#include "base/rng.h"
#include "doctest.h"
#include "test_util.h"

namespace vpd {
namespace {

using testing::CodeOf;
using testing::Sine;

// Slides a window by step until the window start passes the last sample
// that a zero-padded final frame still has to cover.
size_t BruteFrames(size_t n, size_t win, size_t step) {
  size_t frames = 0;
  for (size_t start = 0;; start += step) {
    ++frames;
    if (start + win >= n) break;
  }
  return frames;
}

TEST_CASE("frame count") {
  CHECK(FrameCount(12000, 400, 160) == 74);
  CHECK(FrameCount(400, 400, 160) == 1);
  CHECK(FrameCount(560, 400, 160) == 2);
  CHECK(CodeOf([] { FrameCount(399, 400, 160); }) == Errc::kInvalidArgument);
  for (size_t step : {80u, 160u, 320u})
    for (size_t n = 400; n <= 20000; ++n) REQUIRE(FrameCount(n, 400, step) == BruteFrames(n, 400, step));
}

TEST_CASE("mfcc block shape and stats") {
  Rng rng(1);
  std::vector<double> x(12000);
  for (double &v : x) v = 0.1 * rng.Normal();
  const MfccBlock b = Mfcc(x);
  CHECK(b.raw.rows() == 13);
  CHECK(b.raw.cols() == 74);
  CHECK(b.matrix.rows() == 13);
  CHECK(b.matrix.cols() == 74);
  CHECK(MfccStatNames().size() == 26);
  CHECK(MfccStatNames().front() == "mfcc_mean_00");
  CHECK(MfccStatNames().back() == "mfcc_std_12");
  CHECK(MfccMatrixNames().size() == 962);
  for (double v : b.matrix.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  for (size_t c = 0; c < 13; ++c) {
    double m = 0.0;
    for (size_t t = 0; t < 74; ++t) m += b.raw(c, t);
    m /= 74.0;
    double s = 0.0;
    for (size_t t = 0; t < 74; ++t) s += (b.raw(c, t) - m) * (b.raw(c, t) - m);
    CHECK(b.means[c] == doctest::Approx(m).epsilon(1e-12));
    CHECK(b.stds[c] == doctest::Approx(std::sqrt(s / 74.0)).epsilon(1e-12));
  }
  CHECK(Mfcc(x).matrix == b.matrix);
}

TEST_CASE("mfcc of digital silence") {
  const std::vector<double> silence(12000, 0.0);
  // Every filterbank energy sits on the log floor.
  const Matrix logmel = LogMelEnergies(silence);
  for (double v : logmel.data()) CHECK(v == doctest::Approx(std::log(kLogFloor)));
  // The orthonormal DCT of a constant row puts everything into c0, so the
  // cepstra are not all equal and min-max scaling separates c0 from the rest.
  const MfccBlock b = Mfcc(silence);
  for (size_t t = 0; t < 74; ++t) {
    CHECK(b.matrix(0, t) == 0.0);
    for (size_t c = 1; c < 13; ++c) CHECK(b.matrix(c, t) == doctest::Approx(1.0));
  }
  for (double s : b.stds) CHECK(s == doctest::Approx(0.0));
}

TEST_CASE("440 Hz tone peaks in the nearest mel filter") {
  const auto centers = MelCenterFrequencies(kMelFilters, kMfccFft, 16000, 0.0, 8000.0);
  size_t nearest = 0;
  for (size_t i = 1; i < centers.size(); ++i)
    if (std::abs(centers[i] - 440.0) < std::abs(centers[nearest] - 440.0)) nearest = i;
  const Matrix e = LogMelEnergies(Sine(440.0, 16000, 12000, 0.5));
  for (size_t f = 0; f + 1 < e.rows(); ++f) {
    auto row = e.row(f);
    CHECK(static_cast<size_t>(std::max_element(row.begin(), row.end()) - row.begin()) == nearest);
  }
}

TEST_CASE("mel filterbank is a partition of triangles") {
  const Matrix fb = MelFilterbank(kMelFilters, kMfccFft, 16000, 0.0, 8000.0);
  CHECK(fb.rows() == 26);
  CHECK(fb.cols() == 257);
  for (size_t i = 0; i < fb.rows(); ++i) {
    auto r = fb.row(i);
    CHECK(*std::max_element(r.begin(), r.end()) == doctest::Approx(1.0));
    for (double v : r) CHECK(v >= 0.0);
  }
  CHECK(MelToHz(HzToMel(1234.5)) == doctest::Approx(1234.5));
}

TEST_CASE("spectrogram block") {
  const Matrix s = Spectrogram(Sine(125.0, 16000, 12000, 0.5));
  CHECK(s.rows() == 46);
  CHECK(s.cols() == 25);
  CHECK(SpectrogramNames().size() == 1150);
  // Frames 0..22 are full; bin 4 (125 Hz) is row 3.
  for (size_t t = 0; t < 23; ++t) {
    size_t best = 0;
    for (size_t b = 1; b < 46; ++b)
      if (s(b, t) > s(best, t)) best = b;
    CHECK(best + 1 == 4);
  }
  for (double v : s.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  const Matrix quiet = Spectrogram(std::vector<double>(12000, 0.0));
  for (double v : quiet.data()) CHECK(v == 0.0);
}

TEST_CASE("power spectrum obeys Parseval") {
  Rng rng(9);
  std::vector<double> x(512);
  for (double &v : x) v = rng.Normal();
  const auto p = PowerSpectrum(x, 512);
  double energy = 0.0;
  for (double v : x) energy += v * v;
  double sum = p.front() + p.back();
  for (size_t k = 1; k + 1 < p.size(); ++k) sum += 2.0 * p[k];
  CHECK(sum / 512.0 == doctest::Approx(energy).epsilon(1e-6));
}

TEST_CASE("scaler uses training rows only") {
  Rng rng(4);
  Matrix x(20, 3);
  for (double &v : x.data()) v = rng.Normal(2.0, 3.0);
  for (size_t r = 0; r < 20; ++r) x(r, 2) = 7.0;
  std::vector<size_t> train(15);
  for (size_t i = 0; i < 15; ++i) train[i] = i;
  const std::vector<size_t> cols = {0, 2};
  StandardScaler a;
  a.Fit(x, train, cols);
  Matrix y = x;
  for (size_t r = 15; r < 20; ++r) y(r, 0) = 1e6;  // held-out rows change
  StandardScaler b;
  b.Fit(y, train, cols);
  CHECK(a.means() == b.means());
  CHECK(a.scales() == b.scales());
  CHECK(a.scales()[1] == 1.0);  // constant column keeps unit scale

  Matrix z = x;
  a.Transform(z);
  double m = 0.0;
  for (size_t r : train) m += z(r, 0);
  CHECK(m / 15.0 == doctest::Approx(0.0).scale(1.0));
  CHECK(z(3, 1) == x(3, 1));  // unlisted column untouched

  const StandardScaler c = StandardScaler::FromJson(a.ToJson());
  CHECK(c.means() == a.means());
  CHECK(c.scales() == a.scales());
  CHECK(c.columns() == a.columns());
}

}  // namespace
}  // namespace vpd
