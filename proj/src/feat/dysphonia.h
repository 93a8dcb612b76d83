// feat/dysphonia.h

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

#ifndef VPD_FEAT_DYSPHONIA_H_
#define VPD_FEAT_DYSPHONIA_H_

#include <array>
#include <span>
#include <string>
#include <vector>

namespace vpd {

// Conventional (dysphonic) acoustic features of one 16 kHz chunk. Each
// measure follows a standard textbook definition; the constants below are
// part of this implementation's contract.

inline constexpr int kAfRate = 16000;
inline constexpr size_t kPitchFrame = 640;   // 40 ms
inline constexpr size_t kPitchStep = 160;    // 10 ms
inline constexpr double kPitchMinHz = 60.0;
inline constexpr double kPitchMaxHz = 500.0;
inline constexpr double kVoicingThreshold = 0.3;
inline constexpr size_t kTkeoFrame = 160;    // 10 ms
inline constexpr size_t kMeasureWindow = 4000;  // 250 ms
inline constexpr size_t kMeasureStep = 2000;    // 125 ms
inline constexpr int kGlottalLpcOrder = 24;
inline constexpr double kOpenThreshold = 0.1;

struct PitchFrame {
  double time_s = 0.0;  // frame center
  double lag = 0.0;     // fractional lag in samples, 0 when unvoiced
  double f0 = 0.0;      // Hz, 0 when unvoiced
  double r = 0.0;       // normalized autocorrelation at the chosen lag
  bool voiced = false;
};

// Frame-wise normalized-autocorrelation pitch tracker (40 ms frames, 10 ms
// step, 60..500 Hz, voicing threshold 0.3). Never throws for lack of voicing.
std::vector<PitchFrame> TrackPitch(std::span<const double> x);

struct CycleTrack {
  std::vector<PitchFrame> frames;
  std::vector<double> f0;          // Hz, voiced frames only
  std::vector<double> marks;       // cycle marks, fractional sample index
  std::vector<double> periods_s;   // consecutive mark distances
  std::vector<double> amplitudes;  // per-cycle peak |x|
};

// Pitch contour plus cycle marks found by peak picking inside each detected
// period. Throws kUnvoiced when no frame passes the voicing threshold.
CycleTrack F0Cycles(std::span<const double> chunk);

// Mean absolute consecutive difference over the mean. Throws
// kInsufficientCycles for fewer than two values.
double JitterLocal(std::span<const double> periods);
double ShimmerLocal(std::span<const double> amplitudes);

// |v[i] - v[i+1]| / mean(v) for every consecutive pair; the mean of this
// contour equals JitterLocal / ShimmerLocal.
std::vector<double> PairwisePerturbation(std::span<const double> v);

// 10 log10(r / (1 - r)), r clamped to [1e-6, 1 - 1e-6].
double HnrFromCorrelation(double r);

// Per-voiced-frame HNR in dB. Throws kUnvoiced.
std::vector<double> HnrContour(std::span<const double> chunk);

// DFA-1 exponent: slope of log F(n) vs log n over 12 log-spaced box sizes
// from 16 to N/4. Requires at least 1024 samples.
double DfaExponent(std::span<const double> x);

// Teager-Kaiser energy x[n]^2 - x[n+1] x[n-1], averaged over 10 ms frames.
std::vector<double> TkeoProfile(std::span<const double> x);

struct NoiseMeasures {
  double gne = 0.0;        // [0, 1]
  double nne = 0.0;        // dB, <= 0
  double modenergy = 0.0;  // [0, 1]
};

// GNE, NNE and modulation energy for a single analysis window. f0_hz is used
// by NNE to locate the harmonics.
NoiseMeasures WindowNoiseMeasures(std::span<const double> window, double f0_hz);

// Means of the windowed measures over the chunk (250 ms windows, 125 ms
// step). Throws kUnvoiced.
NoiseMeasures ComputeNoiseMeasures(std::span<const double> chunk);

struct GlottalQuotients {
  double oq = 0.0;
  double cq = 0.0;
  std::vector<double> per_cycle_oq;
};

// Open quotient from an LPC (order 24) inverse-filtered flow estimate: per
// cycle, the fraction of samples whose baseline-corrected flow exceeds 10% of
// the cycle peak. cq = 1 - oq. Throws kUnvoiced.
GlottalQuotients ComputeGlottalQuotients(std::span<const double> chunk);

// Marks-driven variant used when the cycle track is already known.
GlottalQuotients GlottalQuotientsFromMarks(std::span<const double> chunk,
                                           std::span<const double> marks);

// {mean, std, cv, q1, q3, iqr, kurt, skew} with population moments, excess
// kurtosis, and linearly interpolated quartiles at (n - 1) q. cv, kurt and
// skew are 0 when undefined.
inline constexpr size_t kSummaryStats = 8;
std::array<double, kSummaryStats> Summarize(std::span<const double> v);

inline constexpr size_t kAfContours = 12;
inline constexpr size_t kAfFeatures = kAfContours * kSummaryStats;  // 96

// Contour names in feature order.
const std::array<std::string, kAfContours> &AfContourNames();
const std::array<std::string, kSummaryStats> &SummaryStatNames();

// af_{contour}_{stat}; the 12 "_mean" columns are the base set, the other 84
// the statistics set.
const std::vector<std::string> &AfFeatureNames();

struct AfContours {
  std::array<std::vector<double>, kAfContours> values;
};

AfContours ComputeAfContours(std::span<const double> chunk);

// 96 features, ordered contour-major as in AfFeatureNames(). Throws kUnvoiced.
std::vector<double> ComputeAfVector(std::span<const double> chunk);

}  // namespace vpd

#endif  // VPD_FEAT_DYSPHONIA_H_
