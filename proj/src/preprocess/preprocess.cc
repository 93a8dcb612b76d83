// preprocess/preprocess.cc

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

#include "preprocess/preprocess.h"

#include <cmath>

#include "base/error.h"

namespace vpd {

bool Admit(double duration_s, double age) {
  return DurationToSamples(duration_s) >= kChunkSamples && age >= kMinAge && age <= kMaxAge;
}

size_t DurationToSamples(double duration_s) {
  if (!(duration_s > 0.0)) return 0;
  return static_cast<size_t>(std::llround(duration_s * kWorkingRate));
}

std::vector<size_t> ChunkStarts(size_t n) {
  std::vector<size_t> starts;
  if (n < kChunkSamples) return starts;
  if (n < kLongRecordingSamples) {
    starts.push_back((n - kChunkSamples) / 2);
    return starts;
  }
  for (size_t s = kTrimSamples; s + kChunkSamples + kTrimSamples <= n; s += kStrideSamples)
    starts.push_back(s);
  return starts;
}

std::vector<Chunk> MakeChunks(const Signal &signal, std::string_view recording_id) {
  if (signal.rate != kWorkingRate)
    Fail(Errc::kInvalidArgument, "MakeChunks: expected a 16000 Hz signal, got " +
                                     std::to_string(signal.rate));
  const size_t n = signal.samples.size();
  if (n < kChunkSamples)
    Fail(Errc::kTooShort, std::string(recording_id) + ": recording shorter than 0.750 s");
  std::vector<Chunk> chunks;
  for (size_t start : ChunkStarts(n)) {
    Chunk c;
    c.recording_id = std::string(recording_id);
    c.offset_s = static_cast<double>(start) / kWorkingRate;
    c.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(start),
                     signal.samples.begin() + static_cast<std::ptrdiff_t>(start + kChunkSamples));
    chunks.push_back(std::move(c));
  }
  return chunks;
}

int ChunkCount(double duration_s) {
  const size_t n = DurationToSamples(duration_s);
  if (n < kChunkSamples) return 0;
  if (n < kLongRecordingSamples) return 1;
  return static_cast<int>((n - kLongRecordingSamples) / kStrideSamples) + 1;
}

std::string ChunkId(std::string_view recording_id, size_t index) {
  return std::string(recording_id) + "#" + std::to_string(index);
}

}  // namespace vpd
