// audio/audio_io.cc

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
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <numbers>
#include <string>

#include "base/error.h"
#include "base/text.h"

namespace vpd {
namespace {

constexpr int kTapsPerPhase = 64;
constexpr double kCutoffFraction = 0.45;
constexpr double kKaiserBeta = 8.0;

uint32_t ReadU32(const unsigned char *p) {
  return uint32_t(p[0]) | (uint32_t(p[1]) << 8) | (uint32_t(p[2]) << 16) |
         (uint32_t(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char *p) { return uint16_t(p[0] | (p[1] << 8)); }

void PutU32(std::string &out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutU16(std::string &out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

Signal ReadWav(const std::filesystem::path &path) {
  const std::string bytes = ReadFile(path);
  const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
  const size_t n = bytes.size();
  const std::string where = path.string();
  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    Fail(Errc::kFormat, where + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  int channels = 0, rate = 0, bits = 0, format = 0;
  const unsigned char *data = nullptr;
  size_t data_len = 0;
  size_t pos = 12;
  while (pos + 8 <= n) {
    const size_t len = ReadU32(p + pos + 4);
    const unsigned char *body = p + pos + 8;
    if (pos + 8 + len > n) {
      // Tolerate a data chunk whose declared size overruns the file.
      if (std::memcmp(p + pos, "data", 4) == 0) {
        data = body;
        data_len = n - pos - 8;
        break;
      }
      Fail(Errc::kFormat, where + ": truncated chunk");
    }
    if (std::memcmp(p + pos, "fmt ", 4) == 0) {
      if (len < 16) Fail(Errc::kFormat, where + ": short fmt chunk");
      format = ReadU16(body);
      channels = ReadU16(body + 2);
      rate = static_cast<int>(ReadU32(body + 4));
      bits = ReadU16(body + 14);
      have_fmt = true;
    } else if (std::memcmp(p + pos, "data", 4) == 0) {
      data = body;
      data_len = len;
    }
    pos += 8 + len + (len & 1);
  }
  if (!have_fmt) Fail(Errc::kFormat, where + ": missing fmt chunk");
  if (!data) Fail(Errc::kFormat, where + ": missing data chunk");
  if (channels != 1)
    Fail(Errc::kUnsupportedChannels,
         where + ": " + std::to_string(channels) + " channels, only mono is supported");
  // 0xFFFE (extensible) is accepted when it still describes 16-bit PCM.
  if ((format != 1 && format != 0xFFFE) || bits != 16)
    Fail(Errc::kFormat, where + ": only 16-bit PCM is supported");
  if (rate <= 0) Fail(Errc::kFormat, where + ": invalid sample rate");

  Signal s;
  s.rate = rate;
  const size_t count = data_len / 2;
  s.samples.resize(count);
  for (size_t i = 0; i < count; ++i) {
    const auto v = static_cast<int16_t>(ReadU16(data + 2 * i));
    s.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return s;
}

void WriteWav(const std::filesystem::path &path, const Signal &signal) {
  if (signal.rate <= 0) Fail(Errc::kInvalidArgument, "WriteWav: rate must be positive");
  const uint32_t data_len = static_cast<uint32_t>(signal.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_len);
  out.append("RIFF");
  PutU32(out, 36 + data_len);
  out.append("WAVE");
  out.append("fmt ");
  PutU32(out, 16);
  PutU16(out, 1);  // PCM
  PutU16(out, 1);  // mono
  PutU32(out, static_cast<uint32_t>(signal.rate));
  PutU32(out, static_cast<uint32_t>(signal.rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out.append("data");
  PutU32(out, data_len);
  for (double x : signal.samples) {
    if (!std::isfinite(x)) Fail(Errc::kInvalidArgument, "WriteWav: non-finite sample");
    const double q = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
    PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  WriteFile(path, out);
}

Signal Resample(const Signal &signal, int target_rate) {
  if (target_rate <= 0) Fail(Errc::kInvalidArgument, "Resample: target rate must be positive");
  if (signal.rate <= 0) Fail(Errc::kInvalidArgument, "Resample: input rate must be positive");
  if (target_rate == signal.rate) return signal;

  const int64_t g = std::gcd(static_cast<int64_t>(signal.rate), static_cast<int64_t>(target_rate));
  const int64_t up = target_rate / g;
  const int64_t down = signal.rate / g;
  constexpr int64_t half = kTapsPerPhase / 2;

  // Prototype filter at rate up * rate_in, evaluated per phase. Cutoff in
  // cycles per upsampled sample.
  const double fc = kCutoffFraction * std::min(signal.rate, target_rate) /
                    (static_cast<double>(up) * signal.rate);
  const double window_half = static_cast<double>(half * up);
  const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);
  std::vector<double> taps(static_cast<size_t>(up * kTapsPerPhase));
  for (int64_t phase = 0; phase < up; ++phase) {
    double sum = 0.0;
    for (int64_t j = -half; j < half; ++j) {
      const double m = static_cast<double>(phase + j * up);
      const double r = m / window_half;
      double w = 0.0;
      if (std::abs(r) < 1.0)
        w = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) / i0_beta;
      const double h = 2.0 * fc * Sinc(2.0 * fc * m) * w;
      taps[static_cast<size_t>(phase * kTapsPerPhase + (j + half))] = h;
      sum += h;
    }
    // Unity DC gain per phase.
    if (sum != 0.0)
      for (int64_t j = 0; j < kTapsPerPhase; ++j)
        taps[static_cast<size_t>(phase * kTapsPerPhase + j)] /= sum;
  }

  const int64_t n_in = static_cast<int64_t>(signal.samples.size());
  const int64_t n_out = (n_in * up + down / 2) / down;
  Signal out;
  out.rate = target_rate;
  out.samples.resize(static_cast<size_t>(n_out));
  for (int64_t n = 0; n < n_out; ++n) {
    const int64_t t = n * down;  // position on the upsampled grid
    const int64_t k0 = t / up;
    const int64_t phase = t - k0 * up;
    const double *h = &taps[static_cast<size_t>(phase * kTapsPerPhase)];
    double acc = 0.0;
    // Tap j pairs with input sample k0 - j.
    for (int64_t j = -half; j < half; ++j) {
      const int64_t k = k0 - j;
      if (k < 0 || k >= n_in) continue;
      acc += h[j + half] * signal.samples[static_cast<size_t>(k)];
    }
    out.samples[static_cast<size_t>(n)] = acc;
  }
  return out;
}

std::vector<double> MinMaxNormalize(std::span<const double> v) {
  if (v.empty()) Fail(Errc::kInvalidArgument, "MinMaxNormalize: empty input");
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out(v.size(), 0.0);
  if (hi > lo) {
    const double span = hi - lo;
    for (size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - lo) / span;
  }
  return out;
}

}  // namespace vpd
