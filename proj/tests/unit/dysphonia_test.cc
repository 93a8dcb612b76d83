// unit/dysphonia_test.cc

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

#include "feat/dysphonia.h"

#include <algorithm>
#include <cmath>

#include "base/fft.h"
#include "base/rng.h"
#include "doctest.h"
#include "synth/synth.h"
#include "test_util.h"

namespace vpd {
namespace {

using testing::CodeOf;

std::vector<double> Vowel(double f0, double jitter, double shimmer, double hnr, uint64_t seed,
                          double oq = 0.6) {
  VoiceSpec v;
  v.f0 = f0;
  v.jitter = jitter;
  v.shimmer = shimmer;
  v.hnr_db = hnr;
  v.open_quotient = oq;
  v.duration_s = 0.75;
  v.seed = seed;
  return SynthVowel(v).samples;
}

std::vector<double> WhiteNoise(size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double &v : x) v = rng.Normal();
  return x;
}

// 1/f power spectrum shaped in the frequency domain.
std::vector<double> PinkNoise(size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> bins(n / 2 + 1);
  for (size_t k = 1; k < bins.size(); ++k) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(k));
    bins[k] = Complex(rng.Normal(), rng.Normal()) * amp;
  }
  return InverseRealFft(bins, n);
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double Mean(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

TEST_CASE("jitter and shimmer formulas") {
  std::vector<double> periods;
  for (int i = 0; i < 40; ++i) periods.push_back(i % 2 ? 0.0102 : 0.0100);
  CHECK(JitterLocal(periods) == doctest::Approx(0.2 / 10.1).epsilon(1e-12));
  CHECK(JitterLocal(std::vector<double>(10, 0.01)) == 0.0);
  CHECK(CodeOf([] { JitterLocal(std::vector<double>{0.01}); }) == Errc::kInsufficientCycles);

  std::vector<double> amps;
  for (int i = 0; i < 40; ++i) amps.push_back(i % 2 ? 0.9 : 1.0);
  CHECK(ShimmerLocal(amps) == doctest::Approx(0.1 / 0.95).epsilon(1e-12));
  CHECK(ShimmerLocal(std::vector<double>(5, 0.3)) == 0.0);
  CHECK(CodeOf([] { ShimmerLocal(std::vector<double>{}); }) == Errc::kInsufficientCycles);

  Rng rng(5);
  std::vector<double> v(31);
  for (double &x : v) x = rng.Uniform(0.5, 1.5);
  CHECK(Mean(PairwisePerturbation(v)) == doctest::Approx(JitterLocal(v)).epsilon(1e-12));
}

TEST_CASE("hnr from correlation") {
  CHECK(HnrFromCorrelation(0.5) == doctest::Approx(0.0));
  CHECK(HnrFromCorrelation(0.99) == doctest::Approx(10.0 * std::log10(99.0)));
  CHECK(std::isfinite(HnrFromCorrelation(1.0)));
  CHECK(std::isfinite(HnrFromCorrelation(0.0)));
}

TEST_CASE("summarize examples") {
  const auto s = Summarize(std::vector<double>{1, 2, 3, 4});
  CHECK(s[0] == doctest::Approx(2.5));
  CHECK(s[1] == doctest::Approx(1.118033988749895));
  CHECK(s[2] == doctest::Approx(0.447213595499958));
  CHECK(s[3] == doctest::Approx(1.75));
  CHECK(s[4] == doctest::Approx(3.25));
  CHECK(s[5] == doctest::Approx(1.5));
  CHECK(s[6] == doctest::Approx(-1.36));
  CHECK(s[7] == doctest::Approx(0.0));

  const auto c = Summarize(std::vector<double>{5, 5, 5});
  CHECK(c[0] == 5.0);
  CHECK(c[1] == 0.0);
  CHECK(c[2] == 0.0);
  CHECK(c[3] == 5.0);
  CHECK(c[4] == 5.0);
  CHECK(c[5] == 0.0);
  CHECK(c[6] == 0.0);
  CHECK(c[7] == 0.0);

  const auto sym = Summarize(std::vector<double>{-3, -1, 0, 1, 3});
  CHECK(std::abs(sym[7]) < 1e-15);
}

TEST_CASE("summarize matches direct moment sums") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = static_cast<size_t>(rng.UniformInt(2, 60));
    std::vector<double> v(n);
    for (double &x : v) x = rng.Normal(3.0, 2.0);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : v) {
      const double d = x - mean;
      m2 += d * d;
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    auto q = [&](double p) {
      const double pos = p * static_cast<double>(n - 1);
      const size_t lo = static_cast<size_t>(std::floor(pos));
      const size_t hi = std::min(lo + 1, n - 1);
      return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    const auto s = Summarize(v);
    const double sd = std::sqrt(m2);
    const double want[kSummaryStats] = {mean,         sd,           sd / mean,
                                        q(0.25),      q(0.75),      q(0.75) - q(0.25),
                                        m4 / (m2 * m2) - 3.0, m3 / (m2 * sd)};
    for (size_t i = 0; i < kSummaryStats; ++i)
      CHECK(std::abs(s[i] - want[i]) <= 1e-12 * std::max(1.0, std::abs(want[i])));
  }
}

TEST_CASE("teager-kaiser operator") {
  std::vector<double> x(1600);
  for (size_t n = 0; n < x.size(); ++n) x[n] = std::cos(std::numbers::pi * static_cast<double>(n) / 2.0);
  for (double v : TkeoProfile(x)) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

  for (double v : TkeoProfile(std::vector<double>(800, 0.7))) CHECK(v == doctest::Approx(0.0));

  const double a = 0.8, w = 0.3;
  for (size_t n = 0; n < x.size(); ++n) x[n] = a * std::cos(w * static_cast<double>(n));
  for (double v : TkeoProfile(x)) CHECK(v == doctest::Approx(a * a * std::sin(w) * std::sin(w)).epsilon(0.01));
}

TEST_CASE("dfa exponents") {
  double white = 0.0, pink = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    white += DfaExponent(WhiteNoise(12000, 100 + s));
    pink += DfaExponent(PinkNoise(12000, 200 + s));
  }
  CHECK(white / seeds == doctest::Approx(0.5).epsilon(0.2));
  CHECK(pink / seeds == doctest::Approx(1.0).epsilon(0.1));

  std::vector<double> ramp(4096);
  for (size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  const double alpha = DfaExponent(ramp);
  CHECK(alpha <= 2.1);
  CHECK(alpha >= 1.8);
  CHECK(CodeOf([] { DfaExponent(std::vector<double>(1000, 1.0)); }) == Errc::kInvalidArgument);
}

TEST_CASE("pitch tracking") {
  const CycleTrack t = F0Cycles(Vowel(150.0, 0.0, 0.0, 60.0, 1));
  const double med = Median(t.f0);
  CHECK(med >= 148.5);
  CHECK(med <= 151.5);

  const CycleTrack sine = F0Cycles(testing::Sine(440.0, 16000, 12000, 0.5));
  CHECK(Median(sine.f0) == doctest::Approx(440.0).epsilon(0.01));

  CHECK(CodeOf([] { F0Cycles(WhiteNoise(12000, 4)); }) == Errc::kUnvoiced);
}

TEST_CASE("near-clean vowel has a low jitter floor") {
  const CycleTrack t = F0Cycles(Vowel(150.0, 0.0, 0.0, 60.0, 2));
  CHECK(JitterLocal(t.periods_s) <= 0.003);
}

TEST_CASE("injected perturbation is recovered") {
  // Fewer seeds than the full oracle run; the tolerance is the same.
  const int seeds = 6;
  for (double jit : {0.01, 0.02}) {
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s)
      sum += JitterLocal(F0Cycles(Vowel(120.0, jit, 0.0, 60.0, 300 + s)).periods_s);
    CHECK(sum / seeds == doctest::Approx(jit).epsilon(0.2));
  }
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s)
    sum += ShimmerLocal(F0Cycles(Vowel(120.0, 0.0, 0.05, 60.0, 400 + s)).amplitudes);
  CHECK(sum / seeds == doctest::Approx(0.05).epsilon(0.2));
}

TEST_CASE("hnr contour") {
  CHECK(Mean(HnrContour(Vowel(140.0, 0.0, 0.0, 80.0, 5))) >= 30.0);
  double sum = 0.0;
  for (int s = 0; s < 4; ++s) sum += Mean(HnrContour(Vowel(140.0, 0.0, 0.0, 20.0, 50 + s)));
  CHECK(std::abs(sum / 4 - 20.0) <= 2.0);
}

TEST_CASE("noise measures") {
  const NoiseMeasures clean = ComputeNoiseMeasures(Vowel(130.0, 0.0, 0.0, 80.0, 8));
  CHECK(clean.gne >= 0.9);
  CHECK(clean.gne <= 1.0);
  CHECK(clean.nne <= 0.0);
  const NoiseMeasures noisy = ComputeNoiseMeasures(Vowel(130.0, 0.0, 0.0, 0.0, 8));
  CHECK(clean.gne - noisy.gne >= 0.2);

  const auto tone = testing::Sine(200.0, 16000, 12000, 0.5);
  CHECK(WindowNoiseMeasures(std::vector<double>(tone.begin(), tone.begin() + kMeasureWindow), 200.0)
            .modenergy <= 0.05);
}

TEST_CASE("glottal quotients") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    const GlottalQuotients q = ComputeGlottalQuotients(Vowel(110.0, 0.005, 0.02, 40.0, seed));
    CHECK(q.oq + q.cq == 1.0);
    CHECK(q.oq >= 0.0);
    CHECK(q.oq <= 1.0);
    for (double v : q.per_cycle_oq) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  // The 10%-of-peak rule sees 0.852 of this pulse's open phase.
  auto mean_oq = [](double open) {
    double sum = 0.0;
    for (int s = 0; s < 4; ++s)
      sum += ComputeGlottalQuotients(Vowel(110.0, 0.0, 0.0, 60.0, 20 + s, open)).oq;
    return sum / 4;
  };
  const double oq4 = mean_oq(0.4), oq6 = mean_oq(0.6), oq8 = mean_oq(0.8);
  CHECK(std::abs(oq6 - 0.852 * 0.6) <= 0.1);
  CHECK(oq4 < oq6);
  CHECK(oq6 < oq8);
  CHECK(CodeOf([] { ComputeGlottalQuotients(WhiteNoise(12000, 9)); }) == Errc::kUnvoiced);
}

TEST_CASE("af vector layout") {
  const auto &names = AfFeatureNames();
  REQUIRE(names.size() == kAfFeatures);
  CHECK(kAfFeatures == 96);
  size_t base = 0;
  for (const auto &n : names) {
    CHECK(n.rfind("af_", 0) == 0);
    base += n.size() > 5 && n.compare(n.size() - 5, 5, "_mean") == 0;
  }
  CHECK(base == 12);
  CHECK(names.size() - base == 84);
  CHECK(names[0] == "af_f0_mean");

  const auto x = Vowel(160.0, 0.01, 0.03, 25.0, 31);
  const auto a = ComputeAfVector(x);
  const auto b = ComputeAfVector(x);
  CHECK(a.size() == 96);
  CHECK(a == b);
  for (double v : a) CHECK(std::isfinite(v));
  CHECK(CodeOf([] { ComputeAfVector(std::vector<double>(12000, 0.0)); }) == Errc::kUnvoiced);
}

}  // namespace
}  // namespace vpd
