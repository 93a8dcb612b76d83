// corpus/split.cc

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

#include "corpus/split.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "base/error.h"
#include "base/rng.h"
#include "base/text.h"
#include "json.hpp"

namespace vpd {
namespace {

struct Speaker {
  std::string id;
  int stratum = 0;  // GenderAgeGroup of the first recording
  int label = 0;
  std::vector<std::string> chunks;
};

std::vector<Speaker> GroupSpeakers(const std::vector<RecordingMeta> &manifest) {
  std::map<std::string, Speaker> by_id;
  std::vector<RecordingMeta> sorted = manifest;
  std::sort(sorted.begin(), sorted.end(),
            [](const RecordingMeta &a, const RecordingMeta &b) { return a.id < b.id; });
  for (const auto &m : sorted) {
    auto [it, fresh] = by_id.try_emplace(m.speaker_id);
    Speaker &s = it->second;
    if (fresh) {
      s.id = m.speaker_id;
      s.stratum = GenderAgeGroup(m.gender, m.age);
      s.label = LabelValue(m.label);
    } else if (s.label != LabelValue(m.label)) {
      Fail(Errc::kSplit, "speaker " + m.speaker_id + " has recordings of both classes");
    }
    for (auto &c : RecordingChunkIds(m)) s.chunks.push_back(std::move(c));
  }
  std::vector<Speaker> out;
  for (auto &[id, s] : by_id)
    if (!s.chunks.empty()) out.push_back(std::move(s));
  return out;
}

}  // namespace

std::vector<std::string> Split::Development() const {
  std::vector<std::string> out;
  for (const auto &f : folds) out.insert(out.end(), f.begin(), f.end());
  std::sort(out.begin(), out.end());
  return out;
}

Split StratifiedSplit(const std::vector<RecordingMeta> &manifest, uint64_t seed,
                      const SplitOptions &options) {
  Require(options.folds >= 2, Errc::kSplit, "need at least two folds");
  Require(options.test_per_class >= 0, Errc::kSplit, "negative test size");
  const std::vector<Speaker> speakers = GroupSpeakers(manifest);
  Rng rng(seed);

  // strata[label][gender-age] -> speaker indices, shuffled.
  std::array<std::array<std::vector<size_t>, kGenderAgeGroups>, 2> strata;
  for (size_t i = 0; i < speakers.size(); ++i)
    strata[speakers[i].label][speakers[i].stratum].push_back(i);
  for (auto &per_label : strata)
    for (auto &s : per_label) rng.Shuffle(s);

  Split split;
  std::vector<bool> in_test(speakers.size(), false);
  for (int label = 0; label < 2; ++label) {
    size_t n_speakers = 0, n_chunks = 0;
    std::array<size_t, kGenderAgeGroups> stratum_chunks{};
    for (int g = 0; g < kGenderAgeGroups; ++g) {
      n_speakers += strata[label][g].size();
      for (size_t i : strata[label][g]) stratum_chunks[g] += speakers[i].chunks.size();
      n_chunks += stratum_chunks[g];
    }
    const char *name = label ? "pathological" : "healthy";
    if (n_speakers < static_cast<size_t>(options.min_speakers_per_class))
      Fail(Errc::kSplit, std::string("too few ") + name + " speakers: " +
                             std::to_string(n_speakers));
    const size_t target = static_cast<size_t>(options.test_per_class);
    if (n_chunks < target)
      Fail(Errc::kSplit, std::string("only ") + std::to_string(n_chunks) + " " + name +
                             " chunks for a test set of " + std::to_string(target));

    std::array<size_t, kGenderAgeGroups> taken{}, cursor{};
    std::array<bool, kGenderAgeGroups> exhausted{};
    size_t total = 0;
    while (total < target) {
      // Stratum furthest below its proportional quota.
      int best = -1;
      double best_deficit = 0.0;
      for (int g = 0; g < kGenderAgeGroups; ++g) {
        if (exhausted[g]) continue;
        const double quota = static_cast<double>(target) * stratum_chunks[g] / n_chunks;
        const double deficit = quota - static_cast<double>(taken[g]);
        if (best < 0 || deficit > best_deficit) {
          best = g;
          best_deficit = deficit;
        }
      }
      if (best < 0) break;
      auto &order = strata[label][best];
      bool picked = false;
      for (size_t &c = cursor[best]; c < order.size(); ++c) {
        const size_t i = order[c];
        if (in_test[i] || total + speakers[i].chunks.size() > target) continue;
        in_test[i] = true;
        taken[best] += speakers[i].chunks.size();
        total += speakers[i].chunks.size();
        ++c;
        picked = true;
        break;
      }
      if (!picked) exhausted[best] = true;
    }
    // Greedy stalled: swap a test speaker for an unused one of the same class
    // whose extra chunks fit the gap, largest fitting difference first.
    while (total < target) {
      size_t gap = target - total, best_diff = 0, out_i = 0, in_i = 0;
      for (int g = 0; g < kGenderAgeGroups; ++g)
        for (size_t a : strata[label][g]) {
          if (!in_test[a]) continue;
          for (int h = 0; h < kGenderAgeGroups; ++h)
            for (size_t b : strata[label][h]) {
              if (in_test[b] || speakers[b].chunks.size() <= speakers[a].chunks.size()) continue;
              const size_t diff = speakers[b].chunks.size() - speakers[a].chunks.size();
              if (diff <= gap && diff > best_diff) {
                best_diff = diff;
                out_i = a;
                in_i = b;
              }
            }
        }
      if (best_diff == 0) break;
      in_test[out_i] = false;
      in_test[in_i] = true;
      total += best_diff;
    }
    if (total != target)
      Fail(Errc::kSplit, std::string("cannot assemble exactly ") + std::to_string(target) +
                             " " + name + " test chunks from whole speakers");
  }

  split.folds.assign(static_cast<size_t>(options.folds), {});
  std::vector<size_t> fold_chunks(split.folds.size(), 0);
  for (int label = 0; label < 2; ++label) {
    for (int g = 0; g < kGenderAgeGroups; ++g) {
      std::vector<size_t> stratum_load(split.folds.size(), 0);
      for (size_t i : strata[label][g]) {
        if (in_test[i]) {
          for (const auto &c : speakers[i].chunks) split.test.push_back(c);
          continue;
        }
        size_t f = 0;
        for (size_t k = 1; k < split.folds.size(); ++k) {
          if (stratum_load[k] < stratum_load[f] ||
              (stratum_load[k] == stratum_load[f] && fold_chunks[k] < fold_chunks[f]))
            f = k;
        }
        stratum_load[f] += speakers[i].chunks.size();
        fold_chunks[f] += speakers[i].chunks.size();
        for (const auto &c : speakers[i].chunks) split.folds[f].push_back(c);
      }
    }
  }
  std::sort(split.test.begin(), split.test.end());
  for (auto &f : split.folds) std::sort(f.begin(), f.end());
  return split;
}

std::string SplitToJson(const Split &split) {
  nlohmann::ordered_json j;
  j["test"] = split.test;
  j["folds"] = split.folds;
  return j.dump(1) + "\n";
}

Split SplitFromJson(const std::string &text) {
  Split s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.test = j.at("test").get<std::vector<std::string>>();
    s.folds = j.at("folds").get<std::vector<std::vector<std::string>>>();
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kFormat, std::string("bad split file: ") + e.what());
  }
  std::set<std::string> seen;
  auto claim = [&](const std::string &id) {
    if (!seen.insert(id).second) Fail(Errc::kSplit, "chunk " + id + " assigned twice");
  };
  for (const auto &id : s.test) claim(id);
  for (const auto &f : s.folds)
    for (const auto &id : f) claim(id);
  return s;
}

void WriteSplit(const std::filesystem::path &path, const Split &split) {
  WriteFile(path, SplitToJson(split));
}

Split ReadSplit(const std::filesystem::path &path) { return SplitFromJson(ReadFile(path)); }

std::map<std::string, std::string> ChunkSpeakers(const std::vector<RecordingMeta> &manifest) {
  std::map<std::string, std::string> out;
  for (const auto &m : manifest)
    for (auto &c : RecordingChunkIds(m)) out.emplace(std::move(c), m.speaker_id);
  return out;
}

FoldIds CvAssign(const Split &split, int k, const std::map<std::string, std::string> &speakers) {
  Require(k >= 0 && static_cast<size_t>(k) < split.folds.size(), Errc::kInvalidArgument,
          "fold index out of range");
  auto speaker_of = [&](const std::string &id) -> const std::string & {
    auto it = speakers.find(id);
    if (it == speakers.end()) Fail(Errc::kSplit, "chunk " + id + " not in the manifest");
    return it->second;
  };
  FoldIds out;
  out.valid = split.folds[static_cast<size_t>(k)];
  std::set<std::string> held_out;
  for (const auto &id : out.valid) held_out.insert(speaker_of(id));
  for (const auto &id : split.Development())
    if (!held_out.count(speaker_of(id))) out.train.push_back(id);
  return out;
}

GroupCounts CountGroups(const std::vector<WeightKey> &rows) {
  GroupCounts c;
  for (const auto &r : rows) {
    c.label[static_cast<size_t>(LabelValue(r.label))] += 1.0;
    c.gender[r.gender == Gender::kMale ? 0 : 1] += 1.0;
    c.gender_age[static_cast<size_t>(GenderAgeGroup(r.gender, r.age))] += 1.0;
  }
  return c;
}

double SampleWeight(const WeightKey &row, const GroupCounts &counts, bool inverse) {
  auto factor = [&](auto const &group, size_t index, const char *what) {
    const double max = *std::max_element(group.begin(), group.end());
    const double n = group[index];
    if (n <= 0.0) Fail(Errc::kWeight, std::string("empty ") + what + " subgroup");
    return inverse ? max / n : n / max;
  };
  return factor(counts.label, static_cast<size_t>(LabelValue(row.label)), "class") *
         factor(counts.gender, row.gender == Gender::kMale ? 0 : 1, "gender") *
         factor(counts.gender_age, static_cast<size_t>(GenderAgeGroup(row.gender, row.age)),
                "gender-age");
}

}  // namespace vpd
