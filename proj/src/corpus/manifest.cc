// corpus/manifest.cc

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

#include "corpus/manifest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "audio/audio_io.h"
#include "base/error.h"
#include "base/parallel.h"
#include "base/text.h"
#include "preprocess/preprocess.h"

namespace vpd {

namespace fs = std::filesystem;

void RecordingMeta::Validate() const {
  Require(!id.empty(), Errc::kManifest, "recording without id");
  Require(!speaker_id.empty(), Errc::kManifest, id + ": empty speaker_id");
  Require(std::isfinite(age) && age >= 0.0, Errc::kManifest, id + ": invalid age");
  Require(std::isfinite(duration_s) && duration_s >= 0.0, Errc::kManifest,
          id + ": invalid duration");
  Require(label == Label::kPathological || pathologies.empty(), Errc::kManifest,
          id + ": healthy recording lists pathologies");
}

nlohmann::ordered_json ToJson(const RecordingMeta &m) {
  nlohmann::ordered_json j;
  j["id"] = m.id;
  j["database"] = m.database;
  j["speaker_id"] = m.speaker_id;
  j["gender"] = GenderCode(m.gender);
  j["age"] = m.age;
  j["label"] = LabelCode(m.label);
  j["pathologies"] = m.pathologies;
  j["duration_s"] = m.duration_s;
  j["path"] = m.path;
  return j;
}

RecordingMeta RecordingFromJson(const nlohmann::json &j) {
  RecordingMeta m;
  try {
    m.id = j.at("id").get<std::string>();
    m.database = j.value("database", "");
    m.speaker_id = j.value("speaker_id", m.id);
    m.gender = ParseGender(j.at("gender").get<std::string>());
    m.age = j.at("age").get<double>();
    m.label = ParseLabel(j.at("label").get<std::string>());
    m.pathologies = j.value("pathologies", std::vector<std::string>{});
    m.duration_s = j.value("duration_s", 0.0);
    m.path = j.value("path", m.id + ".wav");
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kManifest, std::string("bad manifest record: ") + e.what());
  } catch (const Error &e) {
    Fail(Errc::kManifest, std::string("bad manifest record: ") + e.what());
  }
  m.Validate();
  return m;
}

std::vector<RecordingMeta> ReadManifest(const fs::path &path) {
  std::istringstream in(ReadFile(path));
  std::vector<RecordingMeta> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(RecordingFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception &e) {
      Fail(Errc::kManifest, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error &e) {
      Fail(Errc::kManifest, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void WriteManifest(const fs::path &path, const std::vector<RecordingMeta> &records) {
  std::string text;
  for (const auto &r : records) text += ToJson(r).dump() + "\n";
  WriteFile(path, text);
}

std::vector<RecordingMeta> BuildManifest(const fs::path &root, int jobs) {
  if (!fs::is_directory(root)) Fail(Errc::kIo, root.string() + ": not a directory");
  std::vector<std::string> wavs;
  for (const auto &entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".wav") wavs.push_back(fs::relative(entry.path(), root).generic_string());
  }
  std::sort(wavs.begin(), wavs.end());

  std::vector<RecordingMeta> meta;
  const fs::path manifest = root / "manifest.jsonl";
  if (fs::exists(manifest)) meta = ReadManifest(manifest);
  else if (!wavs.empty()) Fail(Errc::kManifest, manifest.string() + " not found");

  std::map<std::string, size_t> by_path;
  std::set<std::string> ids;
  for (size_t i = 0; i < meta.size(); ++i) {
    if (!ids.insert(meta[i].id).second)
      Fail(Errc::kManifest, "duplicate recording id '" + meta[i].id + "'");
    by_path[fs::path(meta[i].path).lexically_normal().generic_string()] = i;
  }
  std::vector<std::string> orphans;
  for (const auto &w : wavs)
    if (!by_path.count(w)) orphans.push_back(w);
  if (!orphans.empty()) {
    std::string msg = "WAV files without metadata:";
    for (const auto &o : orphans) msg += " " + o;
    Fail(Errc::kManifest, msg);
  }
  const std::set<std::string> present(wavs.begin(), wavs.end());
  for (const auto &[p, i] : by_path)
    if (!present.count(p)) Fail(Errc::kManifest, meta[i].id + ": missing WAV " + p);

  ParallelFor(meta.size(), jobs, [&](size_t i) {
    const Signal s = ReadWav(root / meta[i].path);
    meta[i].duration_s = s.duration();
  });

  std::vector<RecordingMeta> admitted;
  for (auto &m : meta) {
    if (Admit(m.duration_s, m.age)) {
      admitted.push_back(std::move(m));
    } else {
      spdlog::warn("rejected {}: duration {:.3f} s, age {}", m.id, m.duration_s, m.age);
    }
  }
  std::sort(admitted.begin(), admitted.end(),
            [](const RecordingMeta &a, const RecordingMeta &b) { return a.id < b.id; });
  return admitted;
}

std::vector<std::string> RecordingChunkIds(const RecordingMeta &m) {
  std::vector<std::string> ids;
  const int n = ChunkCount(m.duration_s);
  for (int k = 0; k < n; ++k) ids.push_back(ChunkId(m.id, static_cast<size_t>(k)));
  return ids;
}

int AgeGroup(double age) {
  if (age < 30.0) return 0;
  if (age < 40.0) return 1;
  if (age < 50.0) return 2;
  return 3;
}

int GenderAgeGroup(Gender gender, double age) {
  return (gender == Gender::kMale ? 0 : kAgeGroups) + AgeGroup(age);
}

}  // namespace vpd
