// unit/corpus_test.cc

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

#include <spdlog/sinks/ringbuffer_sink.h>
#include <spdlog/spdlog.h>

#include <set>

#include "audio/audio_io.h"
#include "base/rng.h"
#include "corpus/manifest.h"
#include "corpus/split.h"
#include "doctest.h"
#include "preprocess/preprocess.h"
#include "test_util.h"

namespace vpd {
namespace {

using testing::CodeOf;
using testing::TempDir;

RecordingMeta Rec(const std::string &id, const std::string &spk, Label label, Gender g, double age,
                  double duration) {
  RecordingMeta m;
  m.id = id;
  m.database = "T";
  m.speaker_id = spk;
  m.label = label;
  m.gender = g;
  m.age = age;
  m.duration_s = duration;
  m.path = "wav/" + id + ".wav";
  return m;
}

void WriteCorpus(const std::filesystem::path &root, const std::vector<RecordingMeta> &records) {
  std::filesystem::create_directories(root / "wav");
  for (const auto &m : records) {
    Signal s;
    s.rate = kWorkingRate;
    s.samples.assign(DurationToSamples(m.duration_s), 0.0);
    for (size_t i = 0; i < s.samples.size(); ++i) s.samples[i] = 0.1 * std::sin(0.05 * i);
    WriteWav(root / m.path, s);
  }
  WriteManifest(root / "manifest.jsonl", records);
}

// Random manifest of speakers with one to three admitted recordings each.
std::vector<RecordingMeta> RandomManifest(uint64_t seed) {
  Rng rng(seed);
  std::vector<RecordingMeta> out;
  int rec = 0;
  for (int label = 0; label < 2; ++label) {
    const int speakers = static_cast<int>(rng.UniformInt(22, 45));
    for (int s = 0; s < speakers; ++s) {
      const std::string spk = "s" + std::to_string(label) + "_" + std::to_string(s);
      const Gender g = rng.Uniform() < 0.5 ? Gender::kMale : Gender::kFemale;
      const double age = static_cast<double>(rng.UniformInt(19, 60));
      const int n = static_cast<int>(rng.UniformInt(1, 3));
      for (int r = 0; r < n; ++r) {
        char id[16];
        std::snprintf(id, sizeof(id), "r%05d", rec++);
        out.push_back(Rec(id, spk, label ? Label::kPathological : Label::kHealthy, g, age,
                          rng.Uniform(0.8, 3.0)));
      }
    }
  }
  return out;
}

std::set<std::string> SpeakersOf(const std::vector<std::string> &ids,
                                 const std::map<std::string, std::string> &speakers) {
  std::set<std::string> out;
  for (const auto &id : ids) out.insert(speakers.at(id));
  return out;
}

bool Disjoint(const std::set<std::string> &a, const std::set<std::string> &b) {
  for (const auto &x : a)
    if (b.count(x)) return false;
  return true;
}

}  // namespace

TEST_CASE("empty directory gives an empty manifest") {
  TempDir dir("corpus_empty");
  CHECK(BuildManifest(dir.path()).empty());
}

TEST_CASE("under-age recordings are rejected and logged") {
  TempDir dir("corpus_age");
  WriteCorpus(dir.path(), {Rec("a", "sa", Label::kHealthy, Gender::kMale, 30, 1.0),
                           Rec("b", "sb", Label::kHealthy, Gender::kFemale, 41, 1.2),
                           Rec("c", "sc", Label::kPathological, Gender::kMale, 55, 2.0),
                           Rec("d", "sd", Label::kHealthy, Gender::kFemale, 12, 1.5)});
  auto sink = std::make_shared<spdlog::sinks::ringbuffer_sink_mt>(16);
  auto logger = std::make_shared<spdlog::logger>("capture", sink);
  auto previous = spdlog::default_logger();
  spdlog::set_default_logger(logger);
  const auto records = BuildManifest(dir.path());
  spdlog::set_default_logger(previous);

  REQUIRE(records.size() == 3);
  CHECK(records[0].id == "a");
  CHECK(records[2].id == "c");
  CHECK(records[1].duration_s == doctest::Approx(1.2));
  const auto lines = sink->last_formatted();
  int rejected = 0;
  for (const auto &l : lines)
    if (l.find("rejected d") != std::string::npos) ++rejected;
  CHECK(rejected == 1);
}

TEST_CASE("manifest errors") {
  TempDir dir("corpus_dup");
  WriteCorpus(dir.path(), {Rec("a", "sa", Label::kHealthy, Gender::kMale, 30, 1.0),
                           Rec("a", "sb", Label::kHealthy, Gender::kFemale, 41, 1.2)});
  CHECK(CodeOf([&] { BuildManifest(dir.path()); }) == Errc::kManifest);

  TempDir orphan("corpus_orphan");
  WriteCorpus(orphan.path(), {Rec("a", "sa", Label::kHealthy, Gender::kMale, 30, 1.0)});
  Signal s{std::vector<double>(16000, 0.0), kWorkingRate};
  WriteWav(orphan / "wav/extra.wav", s);
  CHECK(CodeOf([&] { BuildManifest(orphan.path()); }) == Errc::kManifest);

  auto bad = Rec("a", "sa", Label::kHealthy, Gender::kMale, 30, 1.0);
  bad.pathologies = {"x"};
  CHECK(CodeOf([&] { bad.Validate(); }) == Errc::kManifest);
}

TEST_CASE("manifest JSON roundtrip") {
  TempDir dir("corpus_json");
  auto m = Rec("x1", "s1", Label::kPathological, Gender::kFemale, 44, 2.5);
  m.pathologies = {"nodules", "polyp"};
  WriteManifest(dir / "m.jsonl", {m, Rec("x2", "s2", Label::kHealthy, Gender::kMale, 20, 1.0)});
  const auto back = ReadManifest(dir / "m.jsonl");
  REQUIRE(back.size() == 2);
  CHECK(back[0].pathologies == m.pathologies);
  CHECK(back[0].gender == Gender::kFemale);
  CHECK(back[1].label == Label::kHealthy);
}

TEST_CASE("age groups") {
  CHECK(AgeGroup(19) == 0);
  CHECK(AgeGroup(29) == 0);
  CHECK(AgeGroup(30) == 1);
  CHECK(AgeGroup(49) == 2);
  CHECK(AgeGroup(60) == 3);
  CHECK(GenderAgeGroup(Gender::kFemale, 35) == kAgeGroups + 1);
}

TEST_CASE("test set holds exactly 120 chunks per class") {
  // 400 speakers, each with one recording of 1 to 3 s.
  Rng rng(3);
  std::vector<RecordingMeta> manifest;
  for (int i = 0; i < 400; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "r%04d", i);
    manifest.push_back(Rec(id, std::string("s") + id, i < 200 ? Label::kHealthy : Label::kPathological,
                           i % 2 ? Gender::kFemale : Gender::kMale,
                           static_cast<double>(rng.UniformInt(19, 60)), rng.Uniform(1.0, 3.0)));
  }
  const Split split = StratifiedSplit(manifest, 17);
  std::map<std::string, Label> label_of;
  for (const auto &m : manifest)
    for (const auto &c : RecordingChunkIds(m)) label_of[c] = m.label;
  int h = 0, p = 0;
  for (const auto &id : split.test) (label_of.at(id) == Label::kHealthy ? h : p)++;
  CHECK(h == 120);
  CHECK(p == 120);
  CHECK(split.folds.size() == 10);

  SUBCASE("every chunk is placed once") {
    std::set<std::string> all(split.test.begin(), split.test.end());
    size_t n = split.test.size();
    for (const auto &f : split.folds) {
      n += f.size();
      all.insert(f.begin(), f.end());
    }
    CHECK(n == all.size());
    CHECK(all.size() == label_of.size());
  }
  SUBCASE("same seed, same split") {
    CHECK(SplitToJson(StratifiedSplit(manifest, 17)) == SplitToJson(split));
    CHECK(SplitFromJson(SplitToJson(split)) == split);
    CHECK(SplitToJson(StratifiedSplit(manifest, 18)) != SplitToJson(split));
  }
  SUBCASE("cv folds partition the development set") {
    const auto speakers = ChunkSpeakers(manifest);
    std::vector<std::string> valid_union;
    for (int k = 0; k < 10; ++k) {
      const FoldIds f = CvAssign(split, k, speakers);
      valid_union.insert(valid_union.end(), f.valid.begin(), f.valid.end());
      CHECK(Disjoint(SpeakersOf(f.train, speakers), SpeakersOf(f.valid, speakers)));
    }
    std::sort(valid_union.begin(), valid_union.end());
    CHECK(valid_union == split.Development());
    CHECK(CodeOf([&] { CvAssign(split, 10, speakers); }) == Errc::kInvalidArgument);
  }
}

TEST_CASE("split errors") {
  std::vector<RecordingMeta> few;
  for (int i = 0; i < 30; ++i)
    few.push_back(Rec("r" + std::to_string(i), "s" + std::to_string(i),
                      i < 10 ? Label::kHealthy : Label::kPathological, Gender::kMale, 30, 2.0));
  CHECK(CodeOf([&] { StratifiedSplit(few, 1); }) == Errc::kSplit);

  std::vector<RecordingMeta> short_on_chunks;
  for (int i = 0; i < 60; ++i)
    short_on_chunks.push_back(Rec("r" + std::to_string(i), "s" + std::to_string(i),
                                  i < 30 ? Label::kHealthy : Label::kPathological, Gender::kMale,
                                  30, 1.0));
  CHECK(CodeOf([&] { StratifiedSplit(short_on_chunks, 1); }) == Errc::kSplit);
}

TEST_CASE("no speaker leaks across roles in random manifests") {
  SplitOptions options;
  options.test_per_class = 20;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const auto manifest = RandomManifest(seed);
    const Split split = StratifiedSplit(manifest, seed, options);
    const auto speakers = ChunkSpeakers(manifest);
    const auto test = SpeakersOf(split.test, speakers);
    const auto dev = SpeakersOf(split.Development(), speakers);
    CHECK(Disjoint(test, dev));
    for (int k = 0; k < 10; ++k) {
      const FoldIds f = CvAssign(split, k, speakers);
      CHECK(Disjoint(SpeakersOf(f.train, speakers), SpeakersOf(f.valid, speakers)));
      CHECK(Disjoint(SpeakersOf(f.train, speakers), test));
    }
  }
}

TEST_CASE("sample weights from subgroup totals") {
  GroupCounts c;
  c.label = {3995, 4047};
  c.gender = {3908, 4134};
  c.gender_age = {900, 1000, 1000, 1008, 1034, 1034, 1034, 1032};
  const double h = SampleWeight({Label::kHealthy, Gender::kFemale, 35}, c);
  CHECK(h == doctest::Approx(3995.0 / 4047.0).epsilon(1e-12));
  CHECK(std::abs(h - 0.98715) < 1e-5);
  CHECK(SampleWeight({Label::kPathological, Gender::kFemale, 35}, c) == 1.0);
  CHECK(SampleWeight({Label::kPathological, Gender::kMale, 22}, c) ==
        doctest::Approx(3908.0 / 4134.0 * 900.0 / 1034.0));
  CHECK(SampleWeight({Label::kHealthy, Gender::kFemale, 35}, c, true) ==
        doctest::Approx(4047.0 / 3995.0));

  GroupCounts balanced;
  balanced.label = {5, 5};
  balanced.gender = {5, 5};
  balanced.gender_age.fill(5);
  CHECK(SampleWeight({Label::kHealthy, Gender::kMale, 50}, balanced) == 1.0);

  c.gender_age[0] = 0;
  CHECK(CodeOf([&] { SampleWeight({Label::kHealthy, Gender::kMale, 20}, c); }) == Errc::kWeight);
}

TEST_CASE("weights lie in (0, 1] and grow with the subgroup count") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    GroupCounts c;
    for (auto &v : c.label) v = static_cast<double>(rng.UniformInt(1, 100));
    for (auto &v : c.gender) v = static_cast<double>(rng.UniformInt(1, 100));
    for (auto &v : c.gender_age) v = static_cast<double>(rng.UniformInt(1, 100));
    const WeightKey row{rng.Uniform() < 0.5 ? Label::kHealthy : Label::kPathological,
                        rng.Uniform() < 0.5 ? Gender::kMale : Gender::kFemale,
                        static_cast<double>(rng.UniformInt(19, 60))};
    const double w = SampleWeight(row, c);
    CHECK(w > 0.0);
    CHECK(w <= 1.0);
    GroupCounts more = c;
    more.label[static_cast<size_t>(LabelValue(row.label))] += 1.0;
    CHECK(SampleWeight(row, more) >= w);
    more = c;
    more.gender_age[static_cast<size_t>(GenderAgeGroup(row.gender, row.age))] += 1.0;
    CHECK(SampleWeight(row, more) >= w);
  }
}

TEST_CASE("count groups") {
  const std::vector<WeightKey> rows = {{Label::kHealthy, Gender::kMale, 20},
                                       {Label::kHealthy, Gender::kFemale, 45},
                                       {Label::kPathological, Gender::kFemale, 45}};
  const GroupCounts c = CountGroups(rows);
  CHECK(c.label[0] == 2);
  CHECK(c.label[1] == 1);
  CHECK(c.gender[1] == 2);
  CHECK(c.gender_age[static_cast<size_t>(GenderAgeGroup(Gender::kFemale, 45))] == 2);
  // The largest subgroup in every dimension gets weight 1.
  CHECK(SampleWeight(rows[1], c) == 1.0);
}

}  // namespace vpd
