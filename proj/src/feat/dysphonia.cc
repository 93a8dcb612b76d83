// feat/dysphonia.cc

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

#include "feat/dysphonia.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "base/error.h"
#include "base/fft.h"
#include "feat/lpc.h"

namespace vpd {
namespace {

constexpr double kOctavePreference = 0.7;
constexpr size_t kLagMedian = 5;
constexpr double kMarkSearchLo = 0.75;
constexpr double kMarkSearchHi = 1.25;
constexpr int kGneLpcOrder = 16;
constexpr double kGneBandHalfWidth = 500.0;
constexpr std::array<double, 3> kGneCenters = {500.0, 1500.0, 2500.0};
constexpr int kGneMaxLag = 16;  // 1 ms
constexpr size_t kGneEdge = 200;
constexpr double kNneLoHz = 60.0;
constexpr double kNneHiHz = 4000.0;
constexpr double kModLoHz = 2.0;
constexpr double kModHiHz = 20.0;
constexpr size_t kDfaBoxes = 12;
constexpr size_t kDfaMinBox = 16;

double Mean(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Vertex of the parabola through (-1, a), (0, b), (1, c).
void ParabolicPeak(double a, double b, double c, double *offset, double *value) {
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0) {
    *offset = 0.0;
    *value = b;
    return;
  }
  double d = 0.5 * (a - c) / denom;
  d = std::clamp(d, -0.5, 0.5);
  *offset = d;
  *value = b - 0.25 * (a - c) * d;
}

// Analytic-signal magnitude of x, optionally restricted to a raised-cosine
// band around center_hz. n_fft >= x.size().
std::vector<double> Envelope(std::span<const double> x, size_t n_fft, double center_hz,
                             double half_width_hz) {
  auto bins = RealFft(x, n_fft);
  std::vector<Complex> full(n_fft, Complex(0.0, 0.0));
  const double df = static_cast<double>(kAfRate) / n_fft;
  for (size_t k = 0; k < bins.size(); ++k) {
    double w;
    if (half_width_hz > 0.0) {
      const double dist = std::abs(k * df - center_hz);
      w = dist < half_width_hz ? 0.5 * (1.0 + std::cos(std::numbers::pi * dist / half_width_hz))
                               : 0.0;
    } else {
      w = 1.0;
    }
    if (k == 0 || 2 * k == n_fft)
      full[k] = bins[k] * w;
    else
      full[k] = 2.0 * bins[k] * w;
  }
  ComplexFft(full, /*inverse=*/true);
  std::vector<double> env(x.size());
  for (size_t i = 0; i < x.size(); ++i) env[i] = std::abs(full[i]);
  return env;
}

double PearsonAtLag(std::span<const double> a, std::span<const double> b, int lag) {
  // Correlates a[i] with b[i + lag] over the overlap.
  const size_t n = a.size();
  const size_t start = lag < 0 ? static_cast<size_t>(-lag) : 0;
  const size_t end = lag > 0 ? n - static_cast<size_t>(lag) : n;
  if (end <= start + 2) return 0.0;
  double ma = 0.0, mb = 0.0;
  for (size_t i = start; i < end; ++i) {
    ma += a[i];
    mb += b[i + lag];
  }
  const double cnt = static_cast<double>(end - start);
  ma /= cnt;
  mb /= cnt;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = start; i < end; ++i) {
    const double da = a[i] - ma, db = b[i + lag] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double Gne(std::span<const double> window) {
  const auto a = LpcInverseFilter(window, kGneLpcOrder);
  const auto residual = FirFilter(a, window);
  const size_t n_fft = NextPow2(2 * window.size());
  std::array<std::vector<double>, kGneCenters.size()> env;
  for (size_t b = 0; b < kGneCenters.size(); ++b) {
    auto e = Envelope(residual, n_fft, kGneCenters[b], kGneBandHalfWidth);
    if (e.size() > 2 * kGneEdge)
      env[b].assign(e.begin() + kGneEdge, e.end() - kGneEdge);
    else
      env[b] = std::move(e);
  }
  double best = 0.0;
  for (size_t i = 0; i < env.size(); ++i)
    for (size_t j = i + 1; j < env.size(); ++j)
      for (int lag = -kGneMaxLag; lag <= kGneMaxLag; ++lag)
        best = std::max(best, PearsonAtLag(env[i], env[j], lag));
  return std::clamp(best, 0.0, 1.0);
}

double Nne(std::span<const double> window, double f0_hz) {
  const size_t n = window.size();
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i)
    w[i] = window[i] * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
  const size_t n_fft = NextPow2(n);
  const auto power = PowerSpectrum(w, n_fft);
  const double df = static_cast<double>(kAfRate) / n_fft;
  double total = 0.0, noise = 0.0;
  size_t band_bins = 0, noise_bins = 0;
  for (size_t k = 0; k < power.size(); ++k) {
    const double f = k * df;
    if (f < kNneLoHz || f > kNneHiHz) continue;
    total += power[k];
    ++band_bins;
    if (f0_hz > 0.0) {
      const double h = f / f0_hz;
      const double dist = std::abs(h - std::round(h)) * f0_hz;
      if (dist >= 0.25 * f0_hz) {
        noise += power[k];
        ++noise_bins;
      }
    }
  }
  if (total <= 0.0 || noise_bins == 0) return -100.0;
  const double noise_total = noise / noise_bins * band_bins;
  return 10.0 * std::log10(std::clamp(noise_total / total, 1e-10, 1.0));
}

double ModulationEnergy(std::span<const double> window) {
  const size_t n = window.size();
  const auto env = Envelope(window, NextPow2(2 * n), 0.0, 0.0);
  const double mean = Mean(env);
  double total = 0.0, ac = 0.0;
  std::vector<double> d(n);
  for (size_t i = 0; i < n; ++i) {
    total += env[i] * env[i];
    d[i] = (env[i] - mean) * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
    ac += (env[i] - mean) * (env[i] - mean);
  }
  if (total <= 0.0 || ac <= 0.0) return 0.0;
  const size_t n_fft = NextPow2(4 * n);
  const auto p = PowerSpectrum(d, n_fft);
  const double df = static_cast<double>(kAfRate) / n_fft;
  double band = 0.0, all = 0.0;
  for (size_t k = 1; k < p.size(); ++k) {
    all += p[k];
    const double f = k * df;
    if (f >= kModLoHz && f <= kModHiHz) band += p[k];
  }
  if (all <= 0.0) return 0.0;
  return std::clamp(band / all * ac / total, 0.0, 1.0);
}

std::vector<size_t> WindowStarts(size_t n) {
  std::vector<size_t> starts;
  if (n <= kMeasureWindow) {
    starts.push_back(0);
    return starts;
  }
  for (size_t s = 0; s + kMeasureWindow <= n; s += kMeasureStep) starts.push_back(s);
  return starts;
}

double WindowF0(const std::vector<PitchFrame> &frames, size_t start, size_t len) {
  std::vector<double> f;
  const double t0 = static_cast<double>(start) / kAfRate;
  const double t1 = static_cast<double>(start + len) / kAfRate;
  for (const auto &fr : frames)
    if (fr.voiced && fr.time_s >= t0 && fr.time_s <= t1) f.push_back(fr.f0);
  if (f.empty())
    for (const auto &fr : frames)
      if (fr.voiced) f.push_back(fr.f0);
  return Median(f);
}

void RequireVoiced(const std::vector<PitchFrame> &frames) {
  for (const auto &f : frames)
    if (f.voiced) return;
  Fail(Errc::kUnvoiced, "no voiced frame (normalized autocorrelation below 0.3 everywhere)");
}

}  // namespace

std::vector<PitchFrame> TrackPitch(std::span<const double> x) {
  std::vector<PitchFrame> frames;
  if (x.size() < kPitchFrame) return frames;
  const size_t lag_min = static_cast<size_t>(std::floor(kAfRate / kPitchMaxHz));
  const size_t lag_max = static_cast<size_t>(std::ceil(kAfRate / kPitchMinHz));
  const size_t n_fft = NextPow2(2 * kPitchFrame);
  std::vector<double> frame(kPitchFrame), prefix(kPitchFrame + 1);
  std::vector<double> r(lag_max + 2, 0.0);
  for (size_t start = 0; start + kPitchFrame <= x.size(); start += kPitchStep) {
    PitchFrame pf;
    pf.time_s = (start + 0.5 * kPitchFrame) / kAfRate;
    const double mean = Mean(x.subspan(start, kPitchFrame));
    prefix[0] = 0.0;
    for (size_t i = 0; i < kPitchFrame; ++i) {
      frame[i] = x[start + i] - mean;
      prefix[i + 1] = prefix[i] + frame[i] * frame[i];
    }
    if (prefix[kPitchFrame] <= 0.0) {
      frames.push_back(pf);
      continue;
    }
    auto spec = RealFft(frame, n_fft);
    for (auto &c : spec) c = Complex(std::norm(c), 0.0);
    const auto ac = InverseRealFft(spec, n_fft);
    for (size_t lag = lag_min - 1; lag <= lag_max + 1 && lag < kPitchFrame; ++lag) {
      const double e1 = prefix[kPitchFrame - lag];
      const double e2 = prefix[kPitchFrame] - prefix[lag];
      r[lag] = (e1 > 0.0 && e2 > 0.0) ? ac[lag] / std::sqrt(e1 * e2) : 0.0;
    }
    // Local maxima, then the shortest lag close to the best one.
    struct Cand {
      double lag, value;
    };
    std::vector<Cand> cands;
    double best = -1.0;
    for (size_t lag = lag_min; lag <= lag_max; ++lag) {
      if (r[lag] > r[lag - 1] && r[lag] >= r[lag + 1]) {
        double off, val;
        ParabolicPeak(r[lag - 1], r[lag], r[lag + 1], &off, &val);
        cands.push_back({lag + off, val});
        best = std::max(best, val);
      }
    }
    for (const auto &c : cands) {
      if (c.value >= kOctavePreference * best) {
        pf.lag = c.lag;
        pf.r = std::min(c.value, 1.0);
        break;
      }
    }
    if (pf.lag > 0.0 && pf.r >= kVoicingThreshold) {
      pf.voiced = true;
      pf.f0 = kAfRate / pf.lag;
    }
    frames.push_back(pf);
  }
  return frames;
}

CycleTrack F0Cycles(std::span<const double> x) {
  CycleTrack track;
  track.frames = TrackPitch(x);
  RequireVoiced(track.frames);
  for (const auto &f : track.frames)
    if (f.voiced) track.f0.push_back(f.f0);

  // Local period from the nearest voiced frame.
  std::vector<double> voiced_t, voiced_lag;
  for (const auto &f : track.frames)
    if (f.voiced) {
      voiced_t.push_back(f.time_s * kAfRate);
      voiced_lag.push_back(f.lag);
    }
  // Running median over voiced frames absorbs isolated octave errors.
  {
    std::vector<double> smoothed(voiced_lag.size());
    for (size_t i = 0; i < voiced_lag.size(); ++i) {
      const size_t lo = i >= kLagMedian / 2 ? i - kLagMedian / 2 : 0;
      const size_t hi = std::min(voiced_lag.size(), i + kLagMedian / 2 + 1);
      smoothed[i] = Median({voiced_lag.begin() + lo, voiced_lag.begin() + hi});
    }
    voiced_lag = std::move(smoothed);
  }
  auto local_period = [&](double pos) {
    auto it = std::lower_bound(voiced_t.begin(), voiced_t.end(), pos);
    size_t i = static_cast<size_t>(it - voiced_t.begin());
    if (i == voiced_t.size()) return voiced_lag.back();
    if (i > 0 && pos - voiced_t[i - 1] < voiced_t[i] - pos) --i;
    return voiced_lag[i];
  };

  // Peak picking on the polarity with the larger excursion; the amplitude of a
  // cycle is the refined peak value at its mark.
  double pos_max = 0.0, neg_max = 0.0;
  for (double v : x) {
    pos_max = std::max(pos_max, v);
    neg_max = std::max(neg_max, -v);
  }
  const double sign = pos_max >= neg_max ? 1.0 : -1.0;
  const long n = static_cast<long>(x.size());
  auto at = [&](long i) { return sign * x[static_cast<size_t>(i)]; };

  auto argmax = [&](long lo, long hi) {
    long best = lo;
    for (long i = lo + 1; i <= hi; ++i)
      if (at(i) > at(best)) best = i;
    return best;
  };

  // Anchor on the largest peak, then walk one period at a time both ways.
  const long anchor = argmax(0, n - 1);
  std::vector<long> marks_int = {anchor};
  for (long m = anchor;;) {
    const double period = local_period(static_cast<double>(m));
    const long lo = m - static_cast<long>(std::floor(kMarkSearchHi * period));
    const long hi = m - static_cast<long>(std::ceil(kMarkSearchLo * period));
    if (lo < 0) break;
    m = argmax(lo, hi);
    marks_int.push_back(m);
  }
  std::reverse(marks_int.begin(), marks_int.end());
  for (long m = anchor;;) {
    const double period = local_period(static_cast<double>(m));
    const long lo = m + static_cast<long>(std::ceil(kMarkSearchLo * period));
    const long hi = m + static_cast<long>(std::floor(kMarkSearchHi * period));
    if (hi >= n) break;
    m = argmax(lo, hi);
    marks_int.push_back(m);
  }
  for (long i : marks_int) {
    double off = 0.0, val = at(i);
    if (i > 0 && i + 1 < n) ParabolicPeak(at(i - 1), at(i), at(i + 1), &off, &val);
    track.marks.push_back(static_cast<double>(i) + off);
    track.amplitudes.push_back(std::max(val, 0.0));
  }
  for (size_t i = 0; i + 1 < track.marks.size(); ++i)
    track.periods_s.push_back((track.marks[i + 1] - track.marks[i]) / kAfRate);
  return track;
}

std::vector<double> PairwisePerturbation(std::span<const double> v) {
  if (v.size() < 2) Fail(Errc::kInsufficientCycles, "need at least two cycles");
  const double mean = Mean(v);
  std::vector<double> out(v.size() - 1, 0.0);
  if (mean <= 0.0) return out;
  for (size_t i = 0; i + 1 < v.size(); ++i) out[i] = std::abs(v[i] - v[i + 1]) / mean;
  return out;
}

double JitterLocal(std::span<const double> periods) {
  return Mean(PairwisePerturbation(periods));
}

double ShimmerLocal(std::span<const double> amplitudes) {
  return Mean(PairwisePerturbation(amplitudes));
}

double HnrFromCorrelation(double r) {
  r = std::clamp(r, 1e-6, 1.0 - 1e-6);
  return 10.0 * std::log10(r / (1.0 - r));
}

std::vector<double> HnrContour(std::span<const double> chunk) {
  const auto frames = TrackPitch(chunk);
  RequireVoiced(frames);
  std::vector<double> out;
  for (const auto &f : frames)
    if (f.voiced) out.push_back(HnrFromCorrelation(f.r));
  return out;
}

double DfaExponent(std::span<const double> x) {
  const size_t n = x.size();
  if (n < 1024) Fail(Errc::kInvalidArgument, "DFA needs at least 1024 samples");
  const double mean = Mean(x);
  std::vector<double> profile(n);
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    acc += x[i] - mean;
    profile[i] = acc;
  }
  const double max_box = static_cast<double>(n / 4);
  std::vector<size_t> sizes;
  for (size_t k = 0; k < kDfaBoxes; ++k) {
    const double s = kDfaMinBox * std::pow(max_box / kDfaMinBox, k / double(kDfaBoxes - 1));
    const size_t b = static_cast<size_t>(std::llround(s));
    if (sizes.empty() || b != sizes.back()) sizes.push_back(b);
  }
  std::vector<double> lx, ly;
  for (size_t box : sizes) {
    const size_t count = n / box;
    // Sums over t = 0..box-1 are shared by all boxes.
    const double tm = 0.5 * (box - 1);
    double stt = 0.0;
    for (size_t t = 0; t < box; ++t) stt += (t - tm) * (t - tm);
    double ss = 0.0;
    for (size_t b = 0; b < count; ++b) {
      const double *y = &profile[b * box];
      double ym = 0.0;
      for (size_t t = 0; t < box; ++t) ym += y[t];
      ym /= box;
      double sty = 0.0, syy = 0.0;
      for (size_t t = 0; t < box; ++t) {
        const double dy = y[t] - ym;
        sty += (t - tm) * dy;
        syy += dy * dy;
      }
      ss += std::max(0.0, syy - sty * sty / stt);
    }
    const double f = std::sqrt(ss / (count * box));
    if (f > 0.0) {
      lx.push_back(std::log(static_cast<double>(box)));
      ly.push_back(std::log(f));
    }
  }
  if (lx.size() < 2) return 0.0;
  const double mx = Mean(lx), my = Mean(ly);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

std::vector<double> TkeoProfile(std::span<const double> x) {
  if (x.size() < 3) Fail(Errc::kInvalidArgument, "TKEO needs at least 3 samples");
  std::vector<double> out;
  const size_t n = x.size();
  for (size_t start = 0; start < n; start += kTkeoFrame) {
    const size_t end = std::min(n, start + kTkeoFrame);
    double sum = 0.0;
    size_t cnt = 0;
    for (size_t i = std::max<size_t>(start, 1); i < end && i + 1 < n; ++i) {
      sum += x[i] * x[i] - x[i + 1] * x[i - 1];
      ++cnt;
    }
    if (cnt > 0) out.push_back(sum / cnt);
  }
  return out;
}

NoiseMeasures WindowNoiseMeasures(std::span<const double> window, double f0_hz) {
  NoiseMeasures m;
  m.gne = Gne(window);
  m.nne = Nne(window, f0_hz);
  m.modenergy = ModulationEnergy(window);
  return m;
}

NoiseMeasures ComputeNoiseMeasures(std::span<const double> chunk) {
  const auto frames = TrackPitch(chunk);
  RequireVoiced(frames);
  NoiseMeasures avg;
  const auto starts = WindowStarts(chunk.size());
  for (size_t s : starts) {
    const size_t len = std::min(kMeasureWindow, chunk.size() - s);
    const auto m = WindowNoiseMeasures(chunk.subspan(s, len), WindowF0(frames, s, len));
    avg.gne += m.gne;
    avg.nne += m.nne;
    avg.modenergy += m.modenergy;
  }
  const double k = static_cast<double>(starts.size());
  avg.gne /= k;
  avg.nne /= k;
  avg.modenergy /= k;
  return avg;
}

GlottalQuotients GlottalQuotientsFromMarks(std::span<const double> chunk,
                                           std::span<const double> marks) {
  const auto emphasized = PreEmphasis(chunk, 0.97);
  const auto a = LpcInverseFilter(emphasized, kGlottalLpcOrder);
  auto flow = FirFilter(a, chunk);
  const double mean = Mean(flow);
  double acc = 0.0;
  for (double &v : flow) {
    acc += v - mean;
    v = acc;
  }
  GlottalQuotients q;
  for (size_t i = 0; i + 1 < marks.size(); ++i) {
    const long b = std::lround(marks[i]);
    const long e = std::lround(marks[i + 1]);
    if (b < 0 || e <= b + 2 || e >= static_cast<long>(flow.size())) continue;
    const double ub = flow[static_cast<size_t>(b)], ue = flow[static_cast<size_t>(e)];
    const long len = e - b;
    std::vector<double> v(static_cast<size_t>(len));
    double peak = 0.0;
    for (long t = 0; t < len; ++t) {
      const double base = ub + (ue - ub) * static_cast<double>(t) / len;
      v[static_cast<size_t>(t)] = flow[static_cast<size_t>(b + t)] - base;
      peak = std::max(peak, v[static_cast<size_t>(t)]);
    }
    if (peak <= 0.0) continue;
    long open = 0;
    for (double u : v)
      if (u > kOpenThreshold * peak) ++open;
    q.per_cycle_oq.push_back(static_cast<double>(open) / len);
  }
  if (q.per_cycle_oq.empty()) Fail(Errc::kInsufficientCycles, "no complete glottal cycle");
  q.oq = Mean(q.per_cycle_oq);
  q.cq = 1.0 - q.oq;
  return q;
}

GlottalQuotients ComputeGlottalQuotients(std::span<const double> chunk) {
  const auto track = F0Cycles(chunk);
  return GlottalQuotientsFromMarks(chunk, track.marks);
}

std::array<double, kSummaryStats> Summarize(std::span<const double> v) {
  if (v.empty()) Fail(Errc::kInvalidArgument, "Summarize: empty contour");
  const double n = static_cast<double>(v.size());
  const double mean = Mean(v);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double sd = std::sqrt(m2);
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  auto quantile = [&](double q) {
    const double pos = (s.size() - 1) * q;
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - lo) * (s[hi] - s[lo]);
  };
  const double q1 = quantile(0.25), q3 = quantile(0.75);
  std::array<double, kSummaryStats> out{};
  out[0] = mean;
  out[1] = sd;
  out[2] = mean != 0.0 ? sd / mean : 0.0;
  out[3] = q1;
  out[4] = q3;
  out[5] = q3 - q1;
  out[6] = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
  out[7] = m2 > 0.0 ? m3 / (m2 * sd) : 0.0;
  return out;
}

const std::array<std::string, kAfContours> &AfContourNames() {
  static const std::array<std::string, kAfContours> names = {
      "f0", "period", "jitter", "shimmer", "hnr", "dfa",
      "oq", "cq", "gne", "tkeo", "modenergy", "nne"};
  return names;
}

const std::array<std::string, kSummaryStats> &SummaryStatNames() {
  static const std::array<std::string, kSummaryStats> names = {
      "mean", "std", "cv", "q1", "q3", "iqr", "kurt", "skew"};
  return names;
}

const std::vector<std::string> &AfFeatureNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto &c : AfContourNames())
      for (const auto &s : SummaryStatNames()) out.push_back("af_" + c + "_" + s);
    return out;
  }();
  return names;
}

AfContours ComputeAfContours(std::span<const double> chunk) {
  const CycleTrack track = F0Cycles(chunk);
  if (track.periods_s.size() < 2)
    Fail(Errc::kInsufficientCycles, "fewer than two pitch periods in chunk");
  AfContours c;
  auto &v = c.values;
  v[0] = track.f0;
  for (double p : track.periods_s) v[1].push_back(1000.0 * p);
  v[2] = PairwisePerturbation(track.periods_s);
  v[3] = PairwisePerturbation(track.amplitudes);
  for (const auto &f : track.frames)
    if (f.voiced) v[4].push_back(HnrFromCorrelation(f.r));
  const auto gq = GlottalQuotientsFromMarks(chunk, track.marks);
  v[6] = gq.per_cycle_oq;
  for (double oq : gq.per_cycle_oq) v[7].push_back(1.0 - oq);
  v[9] = TkeoProfile(chunk);
  for (size_t s : WindowStarts(chunk.size())) {
    const size_t len = std::min(kMeasureWindow, chunk.size() - s);
    const auto window = chunk.subspan(s, len);
    v[5].push_back(DfaExponent(window));
    const auto m = WindowNoiseMeasures(window, WindowF0(track.frames, s, len));
    v[8].push_back(m.gne);
    v[10].push_back(m.modenergy);
    v[11].push_back(m.nne);
  }
  return c;
}

std::vector<double> ComputeAfVector(std::span<const double> chunk) {
  const AfContours c = ComputeAfContours(chunk);
  std::vector<double> out;
  out.reserve(kAfFeatures);
  for (const auto &contour : c.values) {
    const auto s = Summarize(contour);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

}  // namespace vpd
