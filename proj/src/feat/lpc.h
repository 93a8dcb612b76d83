// feat/lpc.h

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

#ifndef VPD_FEAT_LPC_H_
#define VPD_FEAT_LPC_H_

#include <span>
#include <vector>

namespace vpd {

// Autocorrelation-method LPC on a Hamming-windowed copy of x. Returns the
// inverse filter A(z) = 1 + a1 z^-1 + ... + ap z^-p as {1, a1, ..., ap}.
std::vector<double> LpcInverseFilter(std::span<const double> x, int order);

// y[n] = sum_k a[k] x[n-k], with x taken as zero before the start.
std::vector<double> FirFilter(std::span<const double> a, std::span<const double> x);

// y[n] = x[n] - coeff * x[n-1].
std::vector<double> PreEmphasis(std::span<const double> x, double coeff);

}  // namespace vpd

#endif  // VPD_FEAT_LPC_H_
