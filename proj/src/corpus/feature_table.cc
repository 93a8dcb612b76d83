// corpus/feature_table.cc

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

#include "corpus/feature_table.h"

#include <sstream>

#include "base/error.h"
#include "base/text.h"

namespace vpd {

size_t FeatureTable::ColumnIndex(const std::string &name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  Fail(Errc::kData, "feature column '" + name + "' not found");
}

FeatureTable FeatureTable::SelectColumns(const std::vector<std::string> &names) const {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < columns.size(); ++i) index.emplace(columns[i], i);
  std::vector<size_t> cols;
  for (const auto &n : names) {
    auto it = index.find(n);
    if (it == index.end()) Fail(Errc::kData, "feature column '" + n + "' not found");
    cols.push_back(it->second);
  }
  FeatureTable out;
  out.columns = names;
  out.keys = keys;
  out.values = values.SelectColumns(cols);
  return out;
}

FeatureTable FeatureTable::SelectRows(const std::vector<std::string> &chunk_ids) const {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < keys.size(); ++i) index.emplace(keys[i].chunk_id, i);
  std::vector<size_t> rows;
  rows.reserve(chunk_ids.size());
  for (const auto &id : chunk_ids) {
    auto it = index.find(id);
    if (it == index.end()) Fail(Errc::kData, "chunk '" + id + "' not in the feature table");
    rows.push_back(it->second);
  }
  FeatureTable out;
  out.columns = columns;
  for (size_t r : rows) out.keys.push_back(keys[r]);
  out.values = values.SelectRows(rows);
  return out;
}

std::vector<int> FeatureTable::Labels() const {
  std::vector<int> y;
  y.reserve(keys.size());
  for (const auto &k : keys) y.push_back(LabelValue(k.label));
  return y;
}

std::vector<double> FeatureTable::Weights() const {
  std::vector<double> w;
  w.reserve(keys.size());
  for (const auto &k : keys) w.push_back(k.weight);
  return w;
}

std::string FeatureTableToCsv(const FeatureTable &table) {
  std::string out;
  for (size_t i = 0; i < kKeyColumns.size(); ++i) out += (i ? "," : "") + kKeyColumns[i];
  for (const auto &c : table.columns) out += "," + CsvField(c);
  out += "\n";
  for (size_t r = 0; r < table.rows(); ++r) {
    const RowKey &k = table.keys[r];
    out += CsvField(k.chunk_id) + "," + CsvField(k.recording_id) + "," + CsvField(k.speaker_id) +
           "," + CsvField(k.set) + "," + FormatDouble(k.weight) + "," + LabelCode(k.label);
    for (double v : table.values.row(r)) {
      out += ",";
      out += FormatDouble(v);
    }
    out += "\n";
  }
  return out;
}

FeatureTable FeatureTableFromCsv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) Fail(Errc::kFormat, "empty feature table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitCsvLine(line);
  if (header.size() < kKeyColumns.size() ||
      !std::equal(kKeyColumns.begin(), kKeyColumns.end(), header.begin()))
    Fail(Errc::kFormat, "feature table header must start with the key columns");
  FeatureTable t;
  t.columns.assign(header.begin() + static_cast<std::ptrdiff_t>(kKeyColumns.size()),
                   header.end());
  std::vector<double> data;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != header.size())
      Fail(Errc::kFormat, "feature table line " + std::to_string(lineno) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(f.size()));
    RowKey k;
    k.chunk_id = f[0];
    k.recording_id = f[1];
    k.speaker_id = f[2];
    k.set = f[3];
    k.weight = ParseDouble(f[4]);
    k.label = ParseLabel(f[5]);
    t.keys.push_back(std::move(k));
    for (size_t i = kKeyColumns.size(); i < f.size(); ++i) data.push_back(ParseDouble(f[i]));
  }
  t.values = Matrix(t.keys.size(), t.columns.size());
  t.values.data() = std::move(data);
  return t;
}

void WriteFeatureTable(const std::filesystem::path &path, const FeatureTable &table) {
  WriteFile(path, FeatureTableToCsv(table));
}

FeatureTable ReadFeatureTable(const std::filesystem::path &path) {
  try {
    return FeatureTableFromCsv(ReadFile(path));
  } catch (const Error &e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

FeatureTable JoinColumns(const FeatureTable &a, const FeatureTable &b) {
  if (a.rows() != b.rows()) Fail(Errc::kData, "joined tables differ in row count");
  for (size_t r = 0; r < a.rows(); ++r)
    if (a.keys[r].chunk_id != b.keys[r].chunk_id)
      Fail(Errc::kData, "joined tables differ at row " + std::to_string(r));
  FeatureTable out;
  out.columns = a.columns;
  out.columns.insert(out.columns.end(), b.columns.begin(), b.columns.end());
  out.keys = a.keys;
  out.values = Matrix(a.rows(), out.columns.size());
  for (size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.values.row(r);
    auto ra = a.values.row(r), rb = b.values.row(r);
    std::copy(ra.begin(), ra.end(), dst.begin());
    std::copy(rb.begin(), rb.end(), dst.begin() + static_cast<std::ptrdiff_t>(ra.size()));
  }
  return out;
}

}  // namespace vpd
