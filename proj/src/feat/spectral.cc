// feat/spectral.cc

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
#include <cstdio>
#include <numbers>

#include "base/error.h"
#include "base/fft.h"
#include "feat/lpc.h"

namespace vpd {
namespace {

constexpr double kRate = 16000.0;

std::vector<size_t> MelBins(size_t n_filters, size_t nfft, double rate, double low_hz,
                            double high_hz) {
  const double lo = HzToMel(low_hz), hi = HzToMel(high_hz);
  std::vector<size_t> bins(n_filters + 2);
  for (size_t i = 0; i < bins.size(); ++i) {
    const double mel = lo + (hi - lo) * static_cast<double>(i) / (n_filters + 1);
    bins[i] = static_cast<size_t>(std::floor((nfft + 1) * MelToHz(mel) / rate));
  }
  return bins;
}

const Matrix &DefaultFilterbank() {
  static const Matrix fb = MelFilterbank(kMelFilters, kMfccFft, kRate, 0.0, kRate / 2);
  return fb;
}

void MinMaxInPlace(Matrix &m) {
  auto &d = m.data();
  if (d.empty()) return;
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  const double a = *lo, b = *hi;
  for (double &v : d) v = b > a ? (v - a) / (b - a) : 0.0;
}

std::string Index2(size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02zu", i);
  return buf;
}

}  // namespace

size_t FrameCount(size_t n, size_t win, size_t step) {
  if (win == 0 || step == 0) Fail(Errc::kInvalidArgument, "frame window and step must be > 0");
  if (win > n) Fail(Errc::kInvalidArgument, "frame window longer than the signal");
  return 1 + (n - win + step - 1) / step;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matrix MelFilterbank(size_t n_filters, size_t nfft, double rate, double low_hz, double high_hz) {
  const auto bins = MelBins(n_filters, nfft, rate, low_hz, high_hz);
  Matrix fb(n_filters, nfft / 2 + 1);
  for (size_t j = 0; j < n_filters; ++j) {
    const size_t a = bins[j], b = bins[j + 1], c = bins[j + 2];
    for (size_t i = a; i < b && i < fb.cols(); ++i)
      fb(j, i) = static_cast<double>(i - a) / static_cast<double>(b - a);
    for (size_t i = b; i < c && i < fb.cols(); ++i)
      fb(j, i) = static_cast<double>(c - i) / static_cast<double>(c - b);
  }
  return fb;
}

std::vector<double> MelCenterFrequencies(size_t n_filters, size_t nfft, double rate,
                                         double low_hz, double high_hz) {
  const auto bins = MelBins(n_filters, nfft, rate, low_hz, high_hz);
  std::vector<double> out(n_filters);
  for (size_t j = 0; j < n_filters; ++j)
    out[j] = static_cast<double>(bins[j + 1]) * rate / static_cast<double>(nfft);
  return out;
}

Matrix LogMelEnergies(std::span<const double> chunk) {
  const auto x = PreEmphasis(chunk, kPreEmphasis);
  const size_t frames = FrameCount(x.size(), kMfccWindow, kMfccStep);
  const Matrix &fb = DefaultFilterbank();
  std::vector<double> hamming(kMfccWindow);
  for (size_t i = 0; i < kMfccWindow; ++i)
    hamming[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (kMfccWindow - 1));

  Matrix out(frames, kMelFilters);
  std::vector<double> frame(kMfccWindow);
  for (size_t t = 0; t < frames; ++t) {
    const size_t start = t * kMfccStep;
    for (size_t i = 0; i < kMfccWindow; ++i)
      frame[i] = (start + i < x.size() ? x[start + i] : 0.0) * hamming[i];
    const auto power = PowerSpectrum(frame, kMfccFft);
    for (size_t j = 0; j < kMelFilters; ++j) {
      double e = 0.0;
      for (size_t k = 0; k < power.size(); ++k) e += fb(j, k) * power[k];
      out(t, j) = std::log(std::max(e / kMfccFft, kLogFloor));
    }
  }
  return out;
}

MfccBlock Mfcc(std::span<const double> chunk) {
  const Matrix logmel = LogMelEnergies(chunk);
  const size_t frames = logmel.rows();
  MfccBlock block;
  block.raw = Matrix(kMfccCoeffs, frames);
  const double n = static_cast<double>(kMelFilters);
  for (size_t t = 0; t < frames; ++t) {
    for (size_t k = 0; k < kMfccCoeffs; ++k) {
      double acc = 0.0;
      for (size_t j = 0; j < kMelFilters; ++j)
        acc += logmel(t, j) * std::cos(std::numbers::pi * k * (2.0 * j + 1.0) / (2.0 * n));
      block.raw(k, t) = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    }
  }
  for (size_t k = 0; k < kMfccCoeffs; ++k) {
    const auto row = block.raw.row(k);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(frames);
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    block.means[k] = mean;
    block.stds[k] = std::sqrt(var / static_cast<double>(frames));
  }
  block.matrix = block.raw;
  MinMaxInPlace(block.matrix);
  return block;
}

Matrix Spectrogram(std::span<const double> chunk) {
  Matrix s(kSpecBins, kSpecFrames);
  std::vector<double> frame(kSpecFft);
  for (size_t t = 0; t < kSpecFrames; ++t) {
    const size_t start = t * kSpecFft;
    for (size_t i = 0; i < kSpecFft; ++i)
      frame[i] = start + i < chunk.size() ? chunk[start + i] : 0.0;
    const auto power = PowerSpectrum(frame, kSpecFft);
    for (size_t b = 0; b < kSpecBins; ++b) s(b, t) = power[b + 1];
  }
  MinMaxInPlace(s);
  return s;
}

std::vector<std::string> MfccStatNames() {
  std::vector<std::string> out;
  for (size_t k = 0; k < kMfccCoeffs; ++k) out.push_back("mfcc_mean_" + Index2(k));
  for (size_t k = 0; k < kMfccCoeffs; ++k) out.push_back("mfcc_std_" + Index2(k));
  return out;
}

std::vector<std::string> MfccMatrixNames() {
  std::vector<std::string> out;
  for (size_t k = 0; k < kMfccCoeffs; ++k)
    for (size_t t = 0; t < kMfccFrames; ++t) out.push_back("mfccm_" + Index2(k) + "_" + Index2(t));
  return out;
}

std::vector<std::string> SpectrogramNames() {
  std::vector<std::string> out;
  for (size_t b = 1; b <= kSpecBins; ++b)
    for (size_t t = 0; t < kSpecFrames; ++t) out.push_back("spec_" + Index2(b) + "_" + Index2(t));
  return out;
}

std::vector<std::string> RawNames(size_t n) {
  std::vector<std::string> out;
  char buf[32];
  for (size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "raw_%05zu", i);
    out.push_back(buf);
  }
  return out;
}

void StandardScaler::Fit(const Matrix &x, std::span<const size_t> rows,
                         std::span<const size_t> cols) {
  if (rows.empty()) Fail(Errc::kInvalidArgument, "scaler fitted on zero rows");
  cols_.assign(cols.begin(), cols.end());
  means_.assign(cols.size(), 0.0);
  scales_.assign(cols.size(), 1.0);
  const double n = static_cast<double>(rows.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    double mean = 0.0;
    for (size_t r : rows) mean += x(r, cols[j]);
    mean /= n;
    double var = 0.0;
    for (size_t r : rows) var += (x(r, cols[j]) - mean) * (x(r, cols[j]) - mean);
    const double sd = std::sqrt(var / n);
    means_[j] = mean;
    scales_[j] = sd > 0.0 ? sd : 1.0;
  }
}

void StandardScaler::Transform(Matrix &x) const {
  for (size_t r = 0; r < x.rows(); ++r)
    for (size_t j = 0; j < cols_.size(); ++j)
      x(r, cols_[j]) = (x(r, cols_[j]) - means_[j]) / scales_[j];
}

nlohmann::ordered_json StandardScaler::ToJson() const {
  nlohmann::ordered_json j;
  j["columns"] = cols_;
  j["means"] = means_;
  j["scales"] = scales_;
  return j;
}

StandardScaler StandardScaler::FromJson(const nlohmann::json &j) {
  StandardScaler s;
  try {
    s.cols_ = j.at("columns").get<std::vector<size_t>>();
    s.means_ = j.at("means").get<std::vector<double>>();
    s.scales_ = j.at("scales").get<std::vector<double>>();
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kData, std::string("scaler: ") + e.what());
  }
  if (s.means_.size() != s.cols_.size() || s.scales_.size() != s.cols_.size())
    Fail(Errc::kData, "scaler: column, mean and scale counts differ");
  for (double v : s.scales_)
    if (!(v > 0.0)) Fail(Errc::kData, "scaler: non-positive scale");
  return s;
}

}  // namespace vpd
