// unit/preprocess_test.cc

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

#include "doctest.h"
#include "test_util.h"

namespace vpd {
namespace {

// Enumerates chunk starts straight from the rules, in samples.
std::vector<size_t> BruteForceStarts(size_t n) {
  if (n < kChunkSamples) return {};
  if (n < kLongRecordingSamples) return {(n - kChunkSamples) / 2};
  std::vector<size_t> out;
  for (size_t s = kTrimSamples; s + kChunkSamples + kTrimSamples <= n; s += kStrideSamples)
    out.push_back(s);
  return out;
}

TEST_CASE("admission rule") {
  CHECK_FALSE(Admit(0.749, 30));
  CHECK(Admit(2.0, 19));
  CHECK(Admit(2.0, 60));
  CHECK_FALSE(Admit(2.0, 61));
  CHECK_FALSE(Admit(2.0, 18));
  CHECK(Admit(0.75, 40));
}

TEST_CASE("chunk offsets") {
  auto offsets = [](double dur) {
    Signal s{std::vector<double>(DurationToSamples(dur), 0.1), kWorkingRate};
    std::vector<double> out;
    for (const auto &c : MakeChunks(s, "r")) {
      CHECK(c.samples.size() == kChunkSamples);
      out.push_back(c.offset_s);
    }
    return out;
  };
  auto near = [](const std::vector<double> &got, const std::vector<double> &want) {
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
  };
  near(offsets(0.80), {0.025});
  near(offsets(2.00), {0.100, 0.475, 0.850});
  near(offsets(0.95), {0.100});
}

TEST_CASE("chunk errors") {
  Signal short_sig{std::vector<double>(11999, 0.0), kWorkingRate};
  CHECK(testing::CodeOf([&] { MakeChunks(short_sig, "r"); }) == Errc::kTooShort);
  Signal wrong_rate{std::vector<double>(48000, 0.0), 48000};
  CHECK(testing::CodeOf([&] { MakeChunks(wrong_rate, "r"); }) == Errc::kInvalidArgument);
}

TEST_CASE("chunk samples are the signal at the stated offset") {
  Signal s{std::vector<double>(32000), kWorkingRate};
  for (size_t i = 0; i < s.samples.size(); ++i) s.samples[i] = static_cast<double>(i);
  const auto chunks = MakeChunks(s, "rec");
  REQUIRE(chunks.size() == 3);
  CHECK(chunks[1].recording_id == "rec");
  CHECK(chunks[1].samples.front() == 7600.0);
  CHECK(chunks[1].samples.back() == 7600.0 + 11999.0);
}

TEST_CASE("closed-form count equals enumeration on a 1 ms grid") {
  for (int ms = 0; ms <= 10000; ++ms) {
    const double dur = ms / 1000.0;
    const size_t n = DurationToSamples(dur);
    const auto brute = BruteForceStarts(n);
    CHECK_MESSAGE(ChunkCount(dur) == static_cast<int>(brute.size()), "duration ", dur);
    CHECK(ChunkStarts(n) == brute);
  }
  CHECK(ChunkCount(0.80) == 1);
  CHECK(ChunkCount(0.95) == 1);
  CHECK(ChunkCount(2.00) == 3);
}

TEST_CASE("chunk ids") {
  CHECK(ChunkId("abc", 0) == "abc#0");
  CHECK(ChunkId("abc", 12) == "abc#12");
}

}  // namespace
}  // namespace vpd
