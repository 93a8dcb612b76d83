// corpus/feature_table.h

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

#ifndef VPD_CORPUS_FEATURE_TABLE_H_
#define VPD_CORPUS_FEATURE_TABLE_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "base/matrix.h"
#include "base/types.h"

namespace vpd {

struct RowKey {
  std::string chunk_id;
  std::string recording_id;
  std::string speaker_id;
  std::string set = "-";  // "test", "fold0".."fold9" or "-" before splitting
  double weight = 1.0;
  Label label = Label::kHealthy;

  friend bool operator==(const RowKey &, const RowKey &) = default;
};

// One row per chunk: key columns chunk_id, recording_id, speaker_id, set,
// weight, label, followed by named feature columns.
struct FeatureTable {
  std::vector<std::string> columns;
  std::vector<RowKey> keys;
  Matrix values;  // keys.size() x columns.size()

  size_t rows() const { return keys.size(); }

  // Throws kData for an unknown name.
  size_t ColumnIndex(const std::string &name) const;
  FeatureTable SelectColumns(const std::vector<std::string> &names) const;
  // Rows in the order of ids; throws kData when an id is missing.
  FeatureTable SelectRows(const std::vector<std::string> &chunk_ids) const;
  std::vector<int> Labels() const;
  std::vector<double> Weights() const;

  friend bool operator==(const FeatureTable &, const FeatureTable &) = default;
};

inline const std::vector<std::string> kKeyColumns = {"chunk_id", "recording_id", "speaker_id",
                                                      "set",      "weight",       "label"};

std::string FeatureTableToCsv(const FeatureTable &table);
FeatureTable FeatureTableFromCsv(const std::string &text);
void WriteFeatureTable(const std::filesystem::path &path, const FeatureTable &table);
FeatureTable ReadFeatureTable(const std::filesystem::path &path);

// Column-wise concatenation of tables holding the same chunks in the same
// order. Throws kData otherwise.
FeatureTable JoinColumns(const FeatureTable &a, const FeatureTable &b);

}  // namespace vpd

#endif  // VPD_CORPUS_FEATURE_TABLE_H_
