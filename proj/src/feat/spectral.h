// feat/spectral.h

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

#ifndef VPD_FEAT_SPECTRAL_H_
#define VPD_FEAT_SPECTRAL_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "base/matrix.h"
#include "json.hpp"

namespace vpd {

inline constexpr size_t kMfccWindow = 400;  // 25 ms
inline constexpr size_t kMfccStep = 160;    // 10 ms
inline constexpr size_t kMfccFft = 512;
inline constexpr size_t kMelFilters = 26;
inline constexpr size_t kMfccCoeffs = 13;
inline constexpr size_t kMfccFrames = 74;
inline constexpr double kPreEmphasis = 0.97;
inline constexpr double kLogFloor = 1e-10;

inline constexpr size_t kSpecFft = 512;
inline constexpr size_t kSpecFrames = 25;
inline constexpr size_t kSpecBins = 46;  // bins 1..46, 31.25 .. 1437.5 Hz

// 1 + ceil((n - win) / step). Throws kInvalidArgument when win > n.
size_t FrameCount(size_t n, size_t win, size_t step);

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular mel filters on FFT bins floor((nfft + 1) * f / rate), equally
// spaced in mel between low_hz and high_hz. Shape n_filters x (nfft / 2 + 1).
Matrix MelFilterbank(size_t n_filters, size_t nfft, double rate, double low_hz, double high_hz);

// Center frequency (Hz) of each mel filter, from the same bin grid.
std::vector<double> MelCenterFrequencies(size_t n_filters, size_t nfft, double rate,
                                         double low_hz, double high_hz);

// Log mel energies per frame (frames x filters), before the DCT.
Matrix LogMelEnergies(std::span<const double> chunk);

struct MfccBlock {
  Matrix raw;     // kMfccCoeffs x frames, unscaled cepstra
  Matrix matrix;  // raw min-max scaled as a whole
  std::array<double, kMfccCoeffs> means{};
  std::array<double, kMfccCoeffs> stds{};  // population
};

// Pre-emphasis, 25/10 ms Hamming frames (ceil framing, zero padded),
// 512-point power spectrum / 512, 26 mel filters over 0-8000 Hz, log with a
// 1e-10 floor, orthonormal DCT-II keeping c0..c12. Stats come from the raw
// cepstra.
MfccBlock Mfcc(std::span<const double> chunk);

// Power spectrum of 25 rectangular, non-overlapping 512-sample frames (chunk
// zero-padded to 12800), bins 1..46, min-max scaled as a whole. Shape
// kSpecBins x kSpecFrames.
Matrix Spectrogram(std::span<const double> chunk);

// Column names: mfcc_mean_00..12, mfcc_std_00..12.
std::vector<std::string> MfccStatNames();
// mfccm_{c}_{t}, coefficient-major.
std::vector<std::string> MfccMatrixNames();
// spec_{bin}_{t}, bin-major, bins numbered 01..46.
std::vector<std::string> SpectrogramNames();
// raw_00000..11999.
std::vector<std::string> RawNames(size_t n);

// Per-column z-scoring with statistics from training rows only.
class StandardScaler {
 public:
  // Population statistics over the given rows; zero-variance columns keep
  // unit scale.
  void Fit(const Matrix &x, std::span<const size_t> rows, std::span<const size_t> cols);
  void Transform(Matrix &x) const;

  nlohmann::ordered_json ToJson() const;
  static StandardScaler FromJson(const nlohmann::json &j);

  const std::vector<size_t> &columns() const { return cols_; }
  const std::vector<double> &means() const { return means_; }
  const std::vector<double> &scales() const { return scales_; }

 private:
  std::vector<size_t> cols_;
  std::vector<double> means_;
  std::vector<double> scales_;
};

}  // namespace vpd

#endif  // VPD_FEAT_SPECTRAL_H_
