// base/types.h

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

#ifndef VPD_BASE_TYPES_H_
#define VPD_BASE_TYPES_H_

#include <string>
#include <string_view>

#include "base/error.h"

namespace vpd {

enum class Gender { kMale, kFemale };
enum class Label { kHealthy, kPathological };

inline const char *GenderCode(Gender g) { return g == Gender::kMale ? "M" : "F"; }
inline const char *LabelCode(Label l) { return l == Label::kHealthy ? "H" : "P"; }

inline Gender ParseGender(std::string_view s) {
  if (s == "M") return Gender::kMale;
  if (s == "F") return Gender::kFemale;
  Fail(Errc::kFormat, "gender must be M or F, got '" + std::string(s) + "'");
}

inline Label ParseLabel(std::string_view s) {
  if (s == "H") return Label::kHealthy;
  if (s == "P") return Label::kPathological;
  Fail(Errc::kFormat, "label must be H or P, got '" + std::string(s) + "'");
}

// 1 for pathological, the positive class everywhere in the toolkit.
inline int LabelValue(Label l) { return l == Label::kPathological ? 1 : 0; }

}  // namespace vpd

#endif  // VPD_BASE_TYPES_H_
