// base/fft.h

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

#ifndef VPD_BASE_FFT_H_
#define VPD_BASE_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace vpd {

using Complex = std::complex<double>;

// Thin FFTW wrappers. Plans are created once per size under a lock and then
// executed with the new-array interface, so calls are safe from any thread.

// Real-to-complex transform of x zero-padded (or truncated) to n points.
// Returns n/2 + 1 bins, unnormalized.
std::vector<Complex> RealFft(std::span<const double> x, size_t n);

// Inverse of RealFft for an n-point signal, including the 1/n factor.
std::vector<double> InverseRealFft(std::span<const Complex> bins, size_t n);

// In-place complex transform. The inverse includes the 1/n factor.
void ComplexFft(std::vector<Complex> &data, bool inverse);

// |X[k]|^2 for k = 0..n/2 of x zero-padded to n points.
std::vector<double> PowerSpectrum(std::span<const double> x, size_t n);

size_t NextPow2(size_t n);

}  // namespace vpd

#endif  // VPD_BASE_FFT_H_
