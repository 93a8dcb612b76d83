// corpus/manifest.h

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

#ifndef VPD_CORPUS_MANIFEST_H_
#define VPD_CORPUS_MANIFEST_H_

#include <filesystem>
#include <string>
#include <vector>

#include "base/types.h"
#include "json.hpp"

namespace vpd {

struct RecordingMeta {
  std::string id;
  std::string database;
  std::string speaker_id;
  Gender gender = Gender::kMale;
  double age = 0.0;
  Label label = Label::kHealthy;
  std::vector<std::string> pathologies;
  double duration_s = 0.0;
  std::string path;  // WAV path relative to the manifest directory

  void Validate() const;
};

nlohmann::ordered_json ToJson(const RecordingMeta &m);
RecordingMeta RecordingFromJson(const nlohmann::json &j);

// One JSON object per line. Throws kManifest on a malformed line, naming it.
std::vector<RecordingMeta> ReadManifest(const std::filesystem::path &path);
void WriteManifest(const std::filesystem::path &path, const std::vector<RecordingMeta> &records);

// Scans root for *.wav files (recursively) and pairs them with the records
// of root/manifest.jsonl. Durations are taken from the WAV headers, the
// admission rule is applied and every rejection is logged. Throws kManifest
// for WAVs without metadata, metadata without a WAV, and duplicate ids.
// Returned records are sorted by id; paths stay relative to root.
std::vector<RecordingMeta> BuildManifest(const std::filesystem::path &root, int jobs = 1);

// Number of admitted-recording chunks and their ids, in chunk order.
std::vector<std::string> RecordingChunkIds(const RecordingMeta &m);

// Decade bins 19-29, 30-39, 40-49, 50-60 (younger ages fall in the first,
// older in the last).
int AgeGroup(double age);
inline constexpr int kAgeGroups = 4;

// gender * kAgeGroups + AgeGroup(age), in [0, 8).
int GenderAgeGroup(Gender gender, double age);
inline constexpr int kGenderAgeGroups = 2 * kAgeGroups;

}  // namespace vpd

#endif  // VPD_CORPUS_MANIFEST_H_
