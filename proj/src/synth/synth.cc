// synth/synth.cc

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

#include "synth/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "base/error.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "corpus/manifest.h"
#include "preprocess/preprocess.h"

namespace vpd {
namespace {

constexpr int kOversample = 8;
constexpr double kWarmupS = 0.05;
constexpr double kPeakLevel = 0.9;
// Flow peak as a fraction of the open phase.
constexpr double kFlowPeakFraction = 0.6;

// Rosenberg flow derivative at time u into a cycle of length period, scaled
// so the closure discontinuity has unit strength. The closed phase comes first
// and the glottis closes exactly at the end of the cycle, so closure-to-closure
// intervals equal the drawn periods. The open phase spans oq * t0 whatever the
// cycle length, so jitter only moves the closed phase and leaves the pulse
// spectrum alone.
double FlowDerivative(double u, double period, double t0, double oq) {
  const double te = std::min(oq * t0, 0.95 * period);
  const double tp = kFlowPeakFraction * te;
  u -= period - te;
  if (u < 0.0 || u >= te) return 0.0;
  if (u < tp) return (te - tp) / tp * std::sin(std::numbers::pi * u / tp);
  return -std::sin(0.5 * std::numbers::pi * (u - tp) / (te - tp));
}

void Resonate(std::vector<double> &x, double freq, double bw, double rate) {
  const double r = std::exp(-std::numbers::pi * bw / rate);
  const double c = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / rate);
  const double r2 = r * r;
  const double gain = 1.0 - c + r2;
  double y1 = 0.0, y2 = 0.0;
  for (double &v : x) {
    const double y = gain * v + c * y1 - r2 * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

}  // namespace

void VoiceSpec::Validate() const {
  Require(f0 >= 60.0 && f0 <= 400.0, Errc::kInvalidArgument, "VoiceSpec: f0 outside [60, 400]");
  Require(jitter >= 0.0 && jitter <= 0.2, Errc::kInvalidArgument,
          "VoiceSpec: jitter outside [0, 0.2]");
  Require(shimmer >= 0.0 && shimmer <= 0.2, Errc::kInvalidArgument,
          "VoiceSpec: shimmer outside [0, 0.2]");
  Require(open_quotient > 0.0 && open_quotient < 1.0, Errc::kInvalidArgument,
          "VoiceSpec: open quotient outside (0, 1)");
  Require(duration_s >= 0.3, Errc::kInvalidArgument, "VoiceSpec: duration below 0.3 s");
  Require(std::isfinite(hnr_db), Errc::kInvalidArgument, "VoiceSpec: HNR must be finite");
  for (const auto &f : formants)
    Require(f.freq_hz > 0.0 && f.freq_hz < kWorkingRate / 2.0 && f.bandwidth_hz > 0.0,
            Errc::kInvalidArgument, "VoiceSpec: invalid formant");
}

GlottalTrain DrawGlottalTrain(const VoiceSpec &spec, double total_s) {
  Rng rng(DeriveSeed(spec.seed, 0x676C6F74));
  const double t0 = 1.0 / spec.f0;
  GlottalTrain train;
  double t = -rng.Uniform() * t0;
  while (t < total_s) {
    const double period = std::max(0.5 * t0, t0 * (1.0 + spec.jitter * rng.Normal()));
    const double gain = std::max(0.0, 1.0 + spec.shimmer * rng.Normal());
    train.onsets_s.push_back(t);
    train.periods_s.push_back(period);
    train.gains.push_back(gain);
    t += period;
  }
  return train;
}

Signal SynthVowel(const VoiceSpec &spec) {
  spec.Validate();
  const double total_s = spec.duration_s + kWarmupS;
  const GlottalTrain train = DrawGlottalTrain(spec, total_s);

  // Glottal source at the oversampled rate.
  const int hi_rate = kWorkingRate * kOversample;
  Signal source;
  source.rate = hi_rate;
  source.samples.assign(static_cast<size_t>(std::ceil(total_s * hi_rate)), 0.0);
  size_t cycle = 0;
  for (size_t n = 0; n < source.samples.size(); ++n) {
    const double t = static_cast<double>(n) / hi_rate;
    while (cycle + 1 < train.onsets_s.size() && t >= train.onsets_s[cycle + 1]) ++cycle;
    const double u = t - train.onsets_s[cycle];
    source.samples[n] = train.gains[cycle] *
                        FlowDerivative(u, train.periods_s[cycle], 1.0 / spec.f0,
                                                       spec.open_quotient);
  }
  Signal voiced = Resample(source, kWorkingRate);
  for (const auto &f : spec.formants)
    Resonate(voiced.samples, f.freq_hz, f.bandwidth_hz, kWorkingRate);

  const size_t skip = static_cast<size_t>(std::llround(kWarmupS * kWorkingRate));
  const size_t n_out = static_cast<size_t>(std::llround(spec.duration_s * kWorkingRate));
  Signal out;
  out.rate = kWorkingRate;
  out.samples.assign(voiced.samples.begin() + static_cast<std::ptrdiff_t>(skip),
                     voiced.samples.begin() + static_cast<std::ptrdiff_t>(
                                                  std::min(voiced.samples.size(), skip + n_out)));
  out.samples.resize(n_out, 0.0);

  double power = 0.0;
  for (double v : out.samples) power += v * v;
  power /= static_cast<double>(out.samples.size());
  const double noise_std = std::sqrt(power / std::pow(10.0, spec.hnr_db / 10.0));
  Rng noise_rng(DeriveSeed(spec.seed, 0x6E6F6973));
  for (double &v : out.samples) v += noise_std * noise_rng.Normal();

  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double &v : out.samples) v *= kPeakLevel / peak;
  return out;
}

VoiceSpec CorpusVoice(Label label, int index_in_class, uint64_t seed) {
  Rng rng(DeriveSeed(seed, static_cast<uint64_t>(LabelValue(label)) << 32 |
                               static_cast<uint64_t>(index_in_class)));
  VoiceSpec v;
  v.label = label;
  v.gender = index_in_class % 2 == 0 ? Gender::kMale : Gender::kFemale;
  v.f0 = v.gender == Gender::kMale ? rng.Uniform(95.0, 145.0) : rng.Uniform(170.0, 250.0);
  if (label == Label::kHealthy) {
    v.jitter = rng.Uniform(0.002, 0.007);
    v.shimmer = rng.Uniform(0.01, 0.04);
    v.hnr_db = rng.Uniform(22.0, 34.0);
    v.open_quotient = rng.Uniform(0.5, 0.7);
  } else {
    // One primary abnormality; the other two sit in a mildly degraded band.
    const int primary = static_cast<int>(rng.UniformInt(0, 2));
    v.jitter = primary == 0 ? rng.Uniform(0.015, 0.05) : rng.Uniform(0.004, 0.015);
    v.shimmer = primary == 1 ? rng.Uniform(0.08, 0.16) : rng.Uniform(0.03, 0.08);
    v.hnr_db = primary == 2 ? rng.Uniform(6.0, 14.0) : rng.Uniform(12.0, 24.0);
    v.open_quotient = rng.Uniform(0.4, 0.8);
  }
  const double scale = v.gender == Gender::kFemale ? 1.15 : 1.0;
  v.formants = kVowelA;
  for (auto &f : v.formants) f.freq_hz *= scale * rng.Uniform(0.95, 1.05);
  v.age = static_cast<double>(rng.UniformInt(19, 60));
  const size_t n = DurationToSamples(rng.Uniform(1.0, 3.0));
  v.duration_s = static_cast<double>(n) / kWorkingRate;
  v.seed = rng.NextU64();
  return v;
}

std::vector<RecordingMeta> SynthCorpus(int n_healthy, int n_pathological, uint64_t seed,
                                       const std::filesystem::path &out, int jobs) {
  Require(n_healthy >= 1 && n_pathological >= 1, Errc::kInvalidArgument,
          "synth corpus needs at least one recording per class");
  std::error_code ec;
  std::filesystem::create_directories(out / "wav", ec);
  if (ec) Fail(Errc::kIo, "cannot create " + (out / "wav").string() + ": " + ec.message());

  const size_t total = static_cast<size_t>(n_healthy) + static_cast<size_t>(n_pathological);
  std::vector<RecordingMeta> records(total);
  ParallelFor(total, jobs, [&](size_t i) {
    const bool healthy = i < static_cast<size_t>(n_healthy);
    const int index = static_cast<int>(healthy ? i : i - static_cast<size_t>(n_healthy));
    const VoiceSpec v =
        CorpusVoice(healthy ? Label::kHealthy : Label::kPathological, index, seed);
    char id[32], spk[32];
    std::snprintf(id, sizeof(id), "syn%04zu", i + 1);
    std::snprintf(spk, sizeof(spk), "spk%04zu", i + 1);
    RecordingMeta &m = records[i];
    m.id = id;
    m.database = "SYNTH";
    m.speaker_id = spk;
    m.gender = v.gender;
    m.age = v.age;
    m.label = v.label;
    if (!healthy) {
      const double j = v.jitter, s = v.shimmer;
      if (j >= 0.015) m.pathologies.push_back("synthetic-jitter");
      if (s >= 0.08) m.pathologies.push_back("synthetic-shimmer");
      if (v.hnr_db <= 14.0) m.pathologies.push_back("synthetic-breathiness");
    }
    m.duration_s = v.duration_s;
    m.path = "wav/" + m.id + ".wav";
    WriteWav(out / m.path, SynthVowel(v));
  });
  WriteManifest(out / "manifest.jsonl", records);
  return records;
}

}  // namespace vpd
