// audio/audio_io.h

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

#ifndef VPD_AUDIO_AUDIO_IO_H_
#define VPD_AUDIO_AUDIO_IO_H_

#include <filesystem>
#include <span>
#include <vector>

namespace vpd {

// Mono PCM samples, nominally in [-1, 1].
struct Signal {
  std::vector<double> samples;
  int rate = 0;  // Hz

  double duration() const {
    return rate > 0 ? static_cast<double>(samples.size()) / rate : 0.0;
  }
};

// Reads a RIFF/WAVE file holding 16-bit little-endian mono PCM. Samples are
// scaled by 1/32768. Throws kFormat on a malformed header or other encodings,
// kUnsupportedChannels on multichannel data.
Signal ReadWav(const std::filesystem::path &path);

// Writes 16-bit PCM, rounding x * 32768 and clamping to the int16 range, so
// ReadWav(WriteWav(s)) == s whenever s came from 16-bit PCM.
void WriteWav(const std::filesystem::path &path, const Signal &signal);

// Band-limited rational resampling with a polyphase Kaiser-windowed sinc
// (64 taps per phase, cutoff 0.45 * min(rate_in, rate_out)). Output length is
// round(n * target_rate / rate).
Signal Resample(const Signal &signal, int target_rate);

// (v - min) / (max - min); all zeros when v is constant.
std::vector<double> MinMaxNormalize(std::span<const double> v);

}  // namespace vpd

#endif  // VPD_AUDIO_AUDIO_IO_H_
