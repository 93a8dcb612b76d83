// corpus/split.h

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

#ifndef VPD_CORPUS_SPLIT_H_
#define VPD_CORPUS_SPLIT_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "corpus/manifest.h"

namespace vpd {

struct SplitOptions {
  int test_per_class = 120;  // chunks of each class in the test set
  int folds = 10;
  int min_speakers_per_class = 20;
};

// Chunk-id partition. All chunks of a speaker travel together.
struct Split {
  std::vector<std::string> test;                // sorted
  std::vector<std::vector<std::string>> folds;  // each sorted

  std::vector<std::string> Development() const;  // union of folds, sorted
  friend bool operator==(const Split &, const Split &) = default;
};

// Test set: per class, speakers are drawn from shuffled class x gender x
// decade strata (largest proportional deficit first) until exactly
// test_per_class chunks are taken; a speaker that would overshoot is skipped.
// If that stalls short of the target, test speakers are swapped for larger
// unused ones until the count fits.
// The remaining speakers go, stratum by stratum, to the fold holding the
// fewest chunks of that stratum. Throws kSplit when a class has too few
// speakers or the exact test size cannot be met.
Split StratifiedSplit(const std::vector<RecordingMeta> &manifest, uint64_t seed,
                      const SplitOptions &options = {});

std::string SplitToJson(const Split &split);
Split SplitFromJson(const std::string &text);
void WriteSplit(const std::filesystem::path &path, const Split &split);
Split ReadSplit(const std::filesystem::path &path);

// chunk id -> speaker id for every chunk of the manifest.
std::map<std::string, std::string> ChunkSpeakers(const std::vector<RecordingMeta> &manifest);

struct FoldIds {
  std::vector<std::string> train;
  std::vector<std::string> valid;
};

// valid = fold k; train = development chunks of speakers absent from fold k.
FoldIds CvAssign(const Split &split, int k, const std::map<std::string, std::string> &speakers);

// Subgroup counts over a training universe.
struct GroupCounts {
  std::array<double, 2> label{};  // H, P
  std::array<double, 2> gender{};  // M, F
  std::array<double, kGenderAgeGroups> gender_age{};
};

struct WeightKey {
  Label label;
  Gender gender;
  double age;
};

GroupCounts CountGroups(const std::vector<WeightKey> &rows);

// omega = (n_label / max) (n_gender / max) (n_gender_age / max). With inverse
// set, every factor becomes max / n. Throws kWeight when the row's own
// subgroup is empty.
double SampleWeight(const WeightKey &row, const GroupCounts &counts, bool inverse = false);

}  // namespace vpd

#endif  // VPD_CORPUS_SPLIT_H_
