// preprocess/preprocess.h

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

#ifndef VPD_PREPROCESS_PREPROCESS_H_
#define VPD_PREPROCESS_PREPROCESS_H_

#include <string>
#include <string_view>
#include <vector>

#include "audio/audio_io.h"

namespace vpd {

inline constexpr int kWorkingRate = 16000;
inline constexpr size_t kChunkSamples = 12000;        // 0.750 s
inline constexpr size_t kTrimSamples = 1600;          // 0.100 s at each end
inline constexpr size_t kStrideSamples = 6000;        // 0.375 s
inline constexpr size_t kLongRecordingSamples = 15200;  // 0.950 s
inline constexpr double kMinDurationS = 0.750;
inline constexpr double kMinAge = 19.0;
inline constexpr double kMaxAge = 60.0;

struct Chunk {
  std::string recording_id;
  double offset_s = 0.0;
  std::vector<double> samples;  // kChunkSamples at kWorkingRate
};

// Exclusion rules: long enough and aged 19..60 inclusive.
bool Admit(double duration_s, double age);

// Start sample of every chunk for a recording of n samples at 16 kHz.
// Recordings shorter than 0.950 s give one centered chunk; longer ones are
// trimmed by 0.100 s per end and cut at a 0.375 s stride.
std::vector<size_t> ChunkStarts(size_t n_samples);

// Cuts a 16 kHz signal into chunks. Throws kTooShort under 0.750 s and
// kInvalidArgument when the signal is not at the working rate.
std::vector<Chunk> MakeChunks(const Signal &signal, std::string_view recording_id);

// Closed-form number of chunks for a duration in seconds.
int ChunkCount(double duration_s);

// Durations are handled on the 16 kHz sample grid.
size_t DurationToSamples(double duration_s);

std::string ChunkId(std::string_view recording_id, size_t index);

}  // namespace vpd

#endif  // VPD_PREPROCESS_PREPROCESS_H_
