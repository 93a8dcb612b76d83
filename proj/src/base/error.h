// base/error.h

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

#ifndef VPD_BASE_ERROR_H_
#define VPD_BASE_ERROR_H_

#include <stdexcept>
#include <string>

namespace vpd {

// Numeric values are mirrored by vpd_status in include/vpd/vpd.h.
enum class Errc {
  kInvalidArgument = 1,
  kFormat = 2,
  kUnsupportedChannels = 3,
  kIo = 4,
  kTooShort = 5,
  kUnvoiced = 6,
  kInsufficientCycles = 7,
  kManifest = 8,
  kSplit = 9,
  kWeight = 10,
  kDimension = 11,
  kConfig = 12,
  kSearch = 13,
  kData = 14,
};

const char *ErrcName(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void Fail(Errc code, const std::string &what) {
  throw Error(code, what);
}

inline void Require(bool cond, Errc code, const std::string &what) {
  if (!cond) throw Error(code, what);
}

}  // namespace vpd

#endif  // VPD_BASE_ERROR_H_
