// base/text.h

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

#ifndef VPD_BASE_TEXT_H_
#define VPD_BASE_TEXT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vpd {

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v);

double ParseDouble(std::string_view s);

// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Quotes a CSV field if it contains a comma, quote or newline.
std::string CsvField(std::string_view s);

std::string ReadFile(const std::filesystem::path &path);

// Writes through a temporary file and renames, so readers never observe a
// half-written artifact.
void WriteFile(const std::filesystem::path &path, std::string_view content);

}  // namespace vpd

#endif  // VPD_BASE_TEXT_H_
