// unit/audio_io_test.cc

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

#include "audio/audio_io.h"

#include <algorithm>

#include "base/rng.h"
#include "doctest.h"
#include "test_util.h"

namespace vpd {
namespace {

using testing::CodeOf;
using testing::TempDir;
using testing::WriteRawWav;

TEST_CASE("read_wav scales 16-bit PCM by 1/32768") {
  TempDir dir("wav_scale");
  WriteRawWav(dir / "half.wav", 48000, 1, {16384});
  const Signal s = ReadWav(dir / "half.wav");
  CHECK(s.rate == 48000);
  REQUIRE(s.samples.size() == 1);
  CHECK(s.samples[0] == 0.5);

  WriteRawWav(dir / "min.wav", 16000, 1, {-32768});
  CHECK(ReadWav(dir / "min.wav").samples[0] == -1.0);
}

TEST_CASE("read_wav rejects stereo and other encodings") {
  TempDir dir("wav_reject");
  WriteRawWav(dir / "stereo.wav", 16000, 2, {1, 2, 3, 4});
  CHECK(CodeOf([&] { ReadWav(dir / "stereo.wav"); }) == Errc::kUnsupportedChannels);

  WriteRawWav(dir / "float.wav", 16000, 1, {1, 2}, 16, 3);
  CHECK(CodeOf([&] { ReadWav(dir / "float.wav"); }) == Errc::kFormat);

  std::ofstream(dir / "junk.wav") << "not a wave file at all";
  CHECK(CodeOf([&] { ReadWav(dir / "junk.wav"); }) == Errc::kFormat);
}

TEST_CASE("write then read is bit exact for 16-bit content") {
  TempDir dir("wav_roundtrip");
  Rng rng(7);
  Signal s;
  s.rate = 22050;
  for (int i = 0; i < 5000; ++i)
    s.samples.push_back(static_cast<double>(rng.UniformInt(-32768, 32767)) / 32768.0);
  WriteWav(dir / "r.wav", s);
  const Signal back = ReadWav(dir / "r.wav");
  CHECK(back.rate == s.rate);
  CHECK(back.samples == s.samples);
}

TEST_CASE("resample length arithmetic and identity") {
  Signal s{std::vector<double>(48000, 0.25), 48000};
  const Signal r = Resample(s, 16000);
  CHECK(r.rate == 16000);
  CHECK(r.samples.size() == 16000);

  Signal t{testing::Sine(100.0, 16000, 999), 16000};
  CHECK(Resample(t, 16000).samples == t.samples);
  CHECK(CodeOf([&] { Resample(t, 0); }) == Errc::kInvalidArgument);
}

TEST_CASE("resampled tone keeps its frequency bin") {
  // 440 Hz at 48 kHz; a 1600-sample window at 16 kHz has 10 Hz bins.
  Signal s{testing::Sine(440.0, 48000, 48000), 48000};
  const Signal r = Resample(s, 16000);
  const size_t bin = testing::DftPeakBin(std::vector<double>(r.samples.begin() + 4000,
                                                             r.samples.begin() + 5600),
                                         1600);
  CHECK(std::abs(static_cast<double>(bin) * 10.0 - 440.0) <= 10.0);

  // And back up again.
  const Signal up = Resample(r, 48000);
  const size_t bin_up = testing::DftPeakBin(
      std::vector<double>(up.samples.begin() + 12000, up.samples.begin() + 16800), 4800);
  CHECK(std::abs(static_cast<double>(bin_up) * 10.0 - 440.0) <= 10.0);
}

TEST_CASE("minmax normalize") {
  CHECK(MinMaxNormalize(std::vector<double>{-1, 0, 1}) == std::vector<double>{0, 0.5, 1});
  CHECK(MinMaxNormalize(std::vector<double>{3, 3, 3}) == std::vector<double>{0, 0, 0});
  CHECK(MinMaxNormalize(std::vector<double>{2, 4}) == std::vector<double>{0, 1});

  Rng rng(3);
  std::vector<double> v(257);
  for (double &x : v) x = rng.Normal(0.0, 5.0);
  const auto out = MinMaxNormalize(v);
  CHECK(*std::min_element(out.begin(), out.end()) == 0.0);
  CHECK(*std::max_element(out.begin(), out.end()) == 1.0);
  const size_t imax = static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  CHECK(out[imax] == 1.0);
}

}  // namespace
}  // namespace vpd
