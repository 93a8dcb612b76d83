// synth/synth.h

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

#ifndef VPD_SYNTH_SYNTH_H_
#define VPD_SYNTH_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "audio/audio_io.h"
#include "base/types.h"

namespace vpd {

struct RecordingMeta;  // corpus/manifest.h

struct Formant {
  double freq_hz;
  double bandwidth_hz;
};

// Default /a/ vocal tract.
inline const std::vector<Formant> kVowelA = {{700.0, 130.0}, {1220.0, 70.0}, {2600.0, 160.0}};

struct VoiceSpec {
  double f0 = 150.0;           // Hz, [60, 400]
  double jitter = 0.0;         // period std / T0, [0, 0.2]
  double shimmer = 0.0;        // per-cycle gain std, [0, 0.2]
  double hnr_db = 60.0;        // broadband harmonic-to-noise ratio
  double open_quotient = 0.6;  // (0, 1)
  std::vector<Formant> formants = kVowelA;
  double duration_s = 1.0;  // >= 0.3
  Gender gender = Gender::kMale;
  double age = 30.0;
  Label label = Label::kHealthy;
  uint64_t seed = 1;

  void Validate() const;
};

// Source-filter sustained vowel at 16 kHz. The glottal flow is a Rosenberg
// pulse (raised-cosine opening, quarter-cosine closing, flow peak at 60% of
// the open phase), whose derivative is rendered at 8x oversampling and
// decimated so that jittered cycle boundaries keep sub-sample timing. The
// open phase lasts oq * T0 in every cycle. Each cycle's period is drawn from
// N(T0, (jitter*T0)^2) and its gain from N(1, shimmer^2). The result goes
// through cascaded two-pole formant resonators, white noise is added at the
// requested broadband HNR, and the whole is peak-normalized to 0.9.
Signal SynthVowel(const VoiceSpec &spec);

// The underlying per-cycle draws, exposed for oracle tests.
struct GlottalTrain {
  std::vector<double> onsets_s;  // cycle start times
  std::vector<double> periods_s;
  std::vector<double> gains;
};
GlottalTrain DrawGlottalTrain(const VoiceSpec &spec, double total_s);

// Desk-scale corpus: n_healthy + n_pathological speakers with one recording
// each, written as out/wav/<id>.wav plus out/manifest.jsonl.
std::vector<RecordingMeta> SynthCorpus(int n_healthy, int n_pathological, uint64_t seed,
                                       const std::filesystem::path &out, int jobs = 1);

// The parameter draw used by SynthCorpus for recording `index`.
VoiceSpec CorpusVoice(Label label, int index_in_class, uint64_t seed);

}  // namespace vpd

#endif  // VPD_SYNTH_SYNTH_H_
