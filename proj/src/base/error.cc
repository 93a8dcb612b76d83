// base/error.cc

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

#include "base/error.h"

namespace vpd {

const char *ErrcName(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid-argument";
    case Errc::kFormat: return "format";
    case Errc::kUnsupportedChannels: return "unsupported-channels";
    case Errc::kIo: return "io";
    case Errc::kTooShort: return "too-short";
    case Errc::kUnvoiced: return "unvoiced";
    case Errc::kInsufficientCycles: return "insufficient-cycles";
    case Errc::kManifest: return "manifest";
    case Errc::kSplit: return "split";
    case Errc::kWeight: return "weight";
    case Errc::kDimension: return "dimension";
    case Errc::kConfig: return "config";
    case Errc::kSearch: return "search";
    case Errc::kData: return "data";
  }
  return "unknown";
}

}  // namespace vpd
