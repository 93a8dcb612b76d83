// pipeline/pipeline.cc

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

#include "pipeline/pipeline.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "audio/audio_io.h"
#include "base/error.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "base/text.h"
#include "feat/dysphonia.h"
#include "feat/spectral.h"
#include "models/densenet.h"
#include "preprocess/preprocess.h"

namespace vpd {
namespace fs = std::filesystem;

namespace {

constexpr const char *kTableFiles[] = {kFeaturesFile, kMfccMatrixFile, kSpectrogramFile, kRawFile};

bool StartsWith(const std::string &s, std::string_view prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

bool EndsWith(const std::string &s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> AfSubset(std::string_view which) {
  std::vector<std::string> out;
  for (const auto &name : AfFeatureNames()) {
    const bool base = EndsWith(name, "_mean");
    if (which == "af" || (which == "af-base" && base) || (which == "af-stats" && !base))
      out.push_back(name);
  }
  return out;
}

std::vector<std::string> FeatureColumns(FeatureSet set) {
  std::vector<std::string> cols;
  const std::vector<std::string> mfcc = MfccStatNames();
  switch (set) {
    case FeatureSet::kAll:
      cols = AfSubset("af");
      cols.insert(cols.end(), mfcc.begin(), mfcc.end());
      break;
    case FeatureSet::kAf:
      cols = AfSubset("af");
      break;
    case FeatureSet::kAfBase:
      cols = AfSubset("af-base");
      break;
    case FeatureSet::kAfStats:
      cols = AfSubset("af-stats");
      break;
    case FeatureSet::kMfcc:
      cols = mfcc;
      break;
    default:
      break;
  }
  return cols;
}

std::map<std::string, RecordingMeta> ByRecording(const std::vector<RecordingMeta> &manifest) {
  std::map<std::string, RecordingMeta> out;
  for (const auto &m : manifest) out.emplace(m.id, m);
  return out;
}

WeightKey KeyOf(const RecordingMeta &m) { return {m.label, m.gender, m.age}; }

struct ChunkRow {
  RowKey key;
  bool dropped = false;
  std::vector<double> features, mfcc_matrix, spec, raw;
};

FeatureTable MakeTable(const std::vector<const ChunkRow *> &rows, std::vector<std::string> columns,
                       std::vector<double> ChunkRow::*field, size_t offset = 0) {
  FeatureTable t;
  t.columns = std::move(columns);
  t.values = Matrix(rows.size(), t.columns.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    t.keys.push_back(rows[i]->key);
    const std::vector<double> &v = rows[i]->*field;
    std::copy(v.begin() + static_cast<std::ptrdiff_t>(offset),
              v.begin() + static_cast<std::ptrdiff_t>(offset + t.columns.size()),
              t.values.row(i).begin());
  }
  return t;
}

// Any table of the work directory as a cross-validation problem.
CvProblem LoadProblem(const fs::path &work, const std::string &file,
                      const std::vector<std::string> *columns, bool inverse_weights) {
  const std::vector<RecordingMeta> manifest = ReadManifest(work / kManifestFile);
  const auto meta = ByRecording(manifest);
  FeatureTable table = ReadFeatureTable(work / file);
  if (columns) table = table.SelectColumns(*columns);
  CvProblem p;
  p.x = std::move(table.values);
  p.y = table.Labels();
  for (const auto &k : table.keys) {
    auto it = meta.find(k.recording_id);
    if (it == meta.end())
      Fail(Errc::kData, file + ": chunk " + k.chunk_id + " has no manifest record");
    p.chunk_ids.push_back(k.chunk_id);
    p.weight_keys.push_back(KeyOf(it->second));
  }
  p.split = ReadSplit(work / kSplitFile);
  p.speakers = ChunkSpeakers(manifest);
  p.inverse_weights = inverse_weights;
  for (size_t j = 0; j < table.columns.size(); ++j)
    if (StartsWith(table.columns[j], "mfcc_")) p.scaled_columns.push_back(j);
  return p;
}

std::vector<int> Gather(const std::vector<int> &v, std::span<const size_t> rows) {
  std::vector<int> out(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) out[i] = v[rows[i]];
  return out;
}

std::vector<size_t> AllRows(size_t n) {
  std::vector<size_t> rows(n);
  std::iota(rows.begin(), rows.end(), size_t{0});
  return rows;
}

struct NetInput {
  const char *file;
  int channels;
  int time;
};

NetInput NetInputFor(std::string_view subset) {
  if (subset == "mfcc")
    return {kMfccMatrixFile, static_cast<int>(kMfccCoeffs), static_cast<int>(kMfccFrames)};
  if (subset == "spec")
    return {kSpectrogramFile, static_cast<int>(kSpecBins), static_cast<int>(kSpecFrames)};
  if (subset == "raw") return {kRawFile, 1, static_cast<int>(kChunkSamples)};
  Fail(Errc::kConfig, "densenet input must be mfcc, spec or raw, got '" + std::string(subset) + "'");
}

Tensor3<float> ToTensor(const Matrix &x, std::span<const size_t> rows, int channels, int time) {
  const size_t width = static_cast<size_t>(channels) * static_cast<size_t>(time);
  Require(x.cols() == width, Errc::kDimension,
          "input table has " + std::to_string(x.cols()) + " columns, expected " +
              std::to_string(width));
  Tensor3<float> t(rows.size(), static_cast<size_t>(channels), static_cast<size_t>(time));
  for (size_t i = 0; i < rows.size(); ++i) {
    auto src = x.row(rows[i]);
    std::transform(src.begin(), src.end(), t.ptr(i, 0),
                   [](double v) { return static_cast<float>(v); });
  }
  return t;
}

ModelBundle TrainDenseNet(const fs::path &work, std::string_view subset,
                          const nlohmann::json &params, const StageOptions &options) {
  const NetInput in = NetInputFor(subset);
  const CvProblem p = LoadProblem(work, in.file, nullptr, options.inverse_weights);
  const FoldIds ids = CvAssign(p.split, 0, p.speakers);
  const std::vector<size_t> train = p.Rows(ids.train), valid = p.Rows(ids.valid);
  Require(!train.empty() && !valid.empty(), Errc::kData, "densenet: empty train or valid rows");

  nlohmann::json cfg_json = params;
  cfg_json["channels"] = in.channels;
  cfg_json["time"] = in.time;
  NetTrainOptions topts;
  try {
    topts.epochs = params.value("epochs", topts.epochs);
    topts.batch_size = params.value("batch_size", topts.batch_size);
    topts.patience = params.value("patience", topts.patience);
    topts.adam.lr0 = params.value("lr0", topts.adam.lr0);
    topts.adam.decay = params.value("decay", topts.adam.decay);
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kConfig, std::string("densenet params: ") + e.what());
  }
  const NetConfig config = NetConfigFromJson(cfg_json);
  DenseNet1D<float> net(config, DeriveSeed(options.seed, 1));
  const NetHistory hist =
      TrainNet(net, ToTensor(p.x, train, in.channels, in.time), Gather(p.y, train),
               UniverseWeights(p, train), ToTensor(p.x, valid, in.channels, in.time),
               Gather(p.y, valid), topts, DeriveSeed(options.seed, 2));
  spdlog::info("densenet: {} epochs, best validation accuracy {:.3f} at epoch {}",
               hist.epochs.size(), hist.best_valid_accuracy, hist.best_epoch);

  ModelBundle b;
  b.kind = ModelKind::kDenseNet;
  b.input = in.file;
  b.subset = std::string(subset);
  b.params = ToJson(config);
  b.params["epochs"] = topts.epochs;
  b.params["batch_size"] = topts.batch_size;
  b.params["patience"] = topts.patience;
  b.params["lr0"] = topts.adam.lr0;
  b.params["decay"] = topts.adam.decay;
  b.model = net.ToJson();
  return b;
}

}  // namespace

PreprocessSummary RunPreprocess(const fs::path &corpus, const fs::path &work, int jobs) {
  std::vector<RecordingMeta> records = BuildManifest(corpus, jobs);
  std::error_code ec;
  fs::create_directories(work, ec);
  if (ec) Fail(Errc::kIo, "cannot create " + work.string() + ": " + ec.message());
  const fs::path work_abs = fs::absolute(work).lexically_normal();
  const fs::path corpus_abs = fs::absolute(corpus).lexically_normal();

  PreprocessSummary summary;
  std::string csv = "chunk_id,recording_id,speaker_id,database,gender,age,label,offset_s\n";
  for (auto &m : records) {
    m.path = (corpus_abs / m.path).lexically_normal().lexically_relative(work_abs).generic_string();
    const std::vector<size_t> starts = ChunkStarts(DurationToSamples(m.duration_s));
    for (size_t k = 0; k < starts.size(); ++k) {
      csv += CsvField(ChunkId(m.id, k)) + "," + CsvField(m.id) + "," + CsvField(m.speaker_id) +
             "," + CsvField(m.database) + "," + GenderCode(m.gender) + "," + FormatDouble(m.age) +
             "," + LabelCode(m.label) + "," +
             FormatDouble(static_cast<double>(starts[k]) / kWorkingRate) + "\n";
    }
    summary.chunks += starts.size();
  }
  summary.recordings = records.size();
  WriteManifest(work / kManifestFile, records);
  WriteFile(work / kChunksFile, csv);
  return summary;
}

FeatureSet ParseFeatureSet(std::string_view name) {
  if (name == "all") return FeatureSet::kAll;
  if (name == "af") return FeatureSet::kAf;
  if (name == "af-base") return FeatureSet::kAfBase;
  if (name == "af-stats") return FeatureSet::kAfStats;
  if (name == "mfcc") return FeatureSet::kMfcc;
  if (name == "spec") return FeatureSet::kSpec;
  if (name == "raw") return FeatureSet::kRaw;
  Fail(Errc::kConfig, "unknown feature set '" + std::string(name) + "'");
}

FeatureSummary RunFeatures(const fs::path &work, FeatureSet set, int jobs) {
  const std::vector<RecordingMeta> records = ReadManifest(work / kManifestFile);
  const bool want_table = set != FeatureSet::kSpec && set != FeatureSet::kRaw;
  const bool want_matrix = set == FeatureSet::kAll || set == FeatureSet::kMfcc;
  const bool want_spec = set == FeatureSet::kAll || set == FeatureSet::kSpec;
  const bool want_raw = set == FeatureSet::kRaw;

  std::vector<std::vector<ChunkRow>> per_recording(records.size());
  ParallelFor(records.size(), jobs, [&](size_t i) {
    const RecordingMeta &m = records[i];
    Signal s = ReadWav(work / m.path);
    if (s.rate != kWorkingRate) s = Resample(s, kWorkingRate);
    const std::vector<Chunk> chunks = MakeChunks(s, m.id);
    auto &out = per_recording[i];
    out.resize(chunks.size());
    for (size_t k = 0; k < chunks.size(); ++k) {
      ChunkRow &row = out[k];
      row.key.chunk_id = ChunkId(m.id, k);
      row.key.recording_id = m.id;
      row.key.speaker_id = m.speaker_id;
      row.key.label = m.label;
      const std::vector<double> &x = chunks[k].samples;
      // The acoustic features decide whether a chunk is usable, whatever
      // the requested set.
      std::vector<double> af;
      try {
        af = ComputeAfVector(x);
      } catch (const Error &e) {
        if (e.code() != Errc::kUnvoiced && e.code() != Errc::kInsufficientCycles) throw;
        row.dropped = true;
        continue;
      }
      if (want_table || want_matrix) {
        const MfccBlock mfcc = Mfcc(x);
        row.features = std::move(af);
        row.features.insert(row.features.end(), mfcc.means.begin(), mfcc.means.end());
        row.features.insert(row.features.end(), mfcc.stds.begin(), mfcc.stds.end());
        if (want_matrix) row.mfcc_matrix = mfcc.matrix.data();
      }
      if (want_spec) row.spec = Spectrogram(x).data();
      if (want_raw) row.raw = MinMaxNormalize(x);
    }
  });

  FeatureSummary summary;
  std::vector<const ChunkRow *> rows;
  for (const auto &rec : per_recording)
    for (const auto &row : rec) {
      if (row.dropped) {
        spdlog::warn("dropping chunk {}: no measurable voicing", row.key.chunk_id);
        summary.dropped.push_back(row.key.chunk_id);
      } else {
        rows.push_back(&row);
      }
    }
  summary.chunks = rows.size();
  if (fs::exists(work / kSplitFile))
    spdlog::warn("{} exists; rerun split to annotate the new tables", kSplitFile);

  if (want_table) {
    // Stored full (AF then MFCC stats), then narrowed to the set.
    std::vector<std::string> all = FeatureColumns(FeatureSet::kAll);
    FeatureTable t = MakeTable(rows, all, &ChunkRow::features);
    if (set != FeatureSet::kAll) t = t.SelectColumns(FeatureColumns(set));
    WriteFeatureTable(work / kFeaturesFile, t);
    summary.files.push_back(kFeaturesFile);
  }
  if (want_matrix) {
    WriteFeatureTable(work / kMfccMatrixFile, MakeTable(rows, MfccMatrixNames(), &ChunkRow::mfcc_matrix));
    summary.files.push_back(kMfccMatrixFile);
  }
  if (want_spec) {
    WriteFeatureTable(work / kSpectrogramFile, MakeTable(rows, SpectrogramNames(), &ChunkRow::spec));
    summary.files.push_back(kSpectrogramFile);
  }
  if (want_raw) {
    WriteFeatureTable(work / kRawFile, MakeTable(rows, RawNames(kChunkSamples), &ChunkRow::raw));
    summary.files.push_back(kRawFile);
  }
  return summary;
}

const std::vector<std::string> &SubsetNames() {
  static const std::vector<std::string> names = {"all", "af-stats", "af", "af-base", "mfcc"};
  return names;
}

std::vector<std::string> SubsetColumns(const FeatureTable &table, std::string_view subset) {
  std::vector<std::string> cols;
  if (subset == "all")
    cols = FeatureColumns(FeatureSet::kAll);
  else if (subset == "af" || subset == "af-base" || subset == "af-stats")
    cols = AfSubset(subset);
  else if (subset == "mfcc")
    cols = MfccStatNames();
  else
    Fail(Errc::kConfig, "unknown feature subset '" + std::string(subset) + "'");
  const std::set<std::string> have(table.columns.begin(), table.columns.end());
  for (const auto &c : cols)
    if (!have.count(c))
      Fail(Errc::kData, "subset " + std::string(subset) + " needs column " + c +
                            ", which the feature table lacks");
  return cols;
}

Split RunSplit(const fs::path &work, uint64_t seed, const SplitOptions &options,
               bool inverse_weights) {
  const std::vector<RecordingMeta> manifest = ReadManifest(work / kManifestFile);
  const Split split = StratifiedSplit(manifest, seed, options);
  WriteSplit(work / kSplitFile, split);

  std::map<std::string, std::string> set_of;
  for (const auto &id : split.test) set_of[id] = "test";
  for (size_t k = 0; k < split.folds.size(); ++k)
    for (const auto &id : split.folds[k]) set_of[id] = "fold" + std::to_string(k);
  const auto meta = ByRecording(manifest);

  for (const char *file : kTableFiles) {
    const fs::path path = work / file;
    if (!fs::exists(path)) continue;
    FeatureTable t = ReadFeatureTable(path);
    std::vector<WeightKey> dev_keys;
    for (auto &k : t.keys) {
      auto it = set_of.find(k.chunk_id);
      k.set = it == set_of.end() ? "-" : it->second;
      if (k.set != "test" && k.set != "-") dev_keys.push_back(KeyOf(meta.at(k.recording_id)));
    }
    const GroupCounts counts = CountGroups(dev_keys);
    for (auto &k : t.keys)
      k.weight = k.set == "test" || k.set == "-"
                     ? 1.0
                     : SampleWeight(KeyOf(meta.at(k.recording_id)), counts, inverse_weights);
    WriteFeatureTable(path, t);
  }
  return split;
}

CvProblem LoadCvProblem(const fs::path &work, std::string_view subset, bool inverse_weights) {
  const FeatureTable header = ReadFeatureTable(work / kFeaturesFile);
  const std::vector<std::string> cols = SubsetColumns(header, subset);
  return LoadProblem(work, kFeaturesFile, &cols, inverse_weights);
}

nlohmann::ordered_json ToJson(const ModelBundle &b) {
  nlohmann::ordered_json j;
  j["kind"] = ModelKindName(b.kind);
  j["input"] = b.input;
  j["subset"] = b.subset;
  j["columns"] = b.columns;
  j["scaler"] = b.scaler;
  j["params"] = b.params;
  j["model"] = b.model;
  return j;
}

ModelBundle BundleFromJson(const nlohmann::json &j) {
  ModelBundle b;
  try {
    b.kind = ParseModelKind(j.at("kind").get<std::string>());
    b.input = j.at("input").get<std::string>();
    b.subset = j.at("subset").get<std::string>();
    b.columns = j.at("columns").get<std::vector<std::string>>();
    b.scaler = j.at("scaler");
    b.params = j.at("params");
    b.model = j.at("model");
  } catch (const nlohmann::json::exception &e) {
    Fail(Errc::kData, std::string("model bundle: ") + e.what());
  } catch (const Error &e) {
    Fail(Errc::kData, std::string("model bundle: ") + e.what());
  }
  if (b.input.find('/') != std::string::npos || b.input.find('\\') != std::string::npos)
    Fail(Errc::kData, "model bundle: input must name a table of the work directory");
  return b;
}

ModelBundle RunTrain(const fs::path &work, ModelKind kind, std::string_view subset,
                     const nlohmann::json &params_in, const StageOptions &options) {
  Require(params_in.is_null() || params_in.is_object(), Errc::kConfig,
          "model parameters must be a JSON object");
  const nlohmann::json params = params_in.is_null() ? nlohmann::json::object() : params_in;
  if (kind == ModelKind::kDenseNet) return TrainDenseNet(work, subset, params, options);
  const CvProblem p = LoadCvProblem(work, subset, options.inverse_weights);
  const std::vector<size_t> dev = p.Rows(p.split.Development());
  Require(!dev.empty(), Errc::kData, "development set has no feature rows");
  Matrix x = p.x.SelectRows(dev);
  StandardScaler scaler;
  scaler.Fit(x, AllRows(x.rows()), p.scaled_columns);
  scaler.Transform(x);
  const TabularModel model = TabularModel::Fit(kind, params, x, Gather(p.y, dev),
                                               UniverseWeights(p, dev), options.seed, options.jobs);
  ModelBundle b;
  b.kind = kind;
  b.input = kFeaturesFile;
  b.subset = std::string(subset);
  b.columns = SubsetColumns(ReadFeatureTable(work / kFeaturesFile), subset);
  b.scaler = scaler.ToJson();
  b.params = model.ToJson()["params"];
  b.model = model.ToJson();
  return b;
}

TuneOutcome RunTune(const fs::path &work, ModelKind kind, std::string_view subset,
                    const SearchSpace &space, const SearchOptions &search,
                    const StageOptions &options) {
  Require(kind != ModelKind::kDenseNet, Errc::kConfig,
          "tuning covers gbt and iforest; train densenet directly");
  const CvProblem p = LoadCvProblem(work, subset, options.inverse_weights);
  TuneOutcome out;
  out.search = SearchAndRefit(kind, space.empty() ? DefaultSpace(kind) : space, p, search,
                              options.seed, options.jobs);
  ModelBundle &b = out.bundle;
  b.kind = kind;
  b.input = kFeaturesFile;
  b.subset = std::string(subset);
  b.columns = SubsetColumns(ReadFeatureTable(work / kFeaturesFile), subset);
  b.scaler = out.search.scaler.ToJson();
  b.params = out.search.best_params;
  b.model = out.search.model.ToJson();
  return out;
}

ConfusionMatrix EvaluateBundle(const fs::path &work, const ModelBundle &bundle) {
  const Split split = ReadSplit(work / kSplitFile);
  FeatureTable t = ReadFeatureTable(work / bundle.input);
  if (bundle.kind != ModelKind::kDenseNet) t = t.SelectColumns(bundle.columns);
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < t.keys.size(); ++i) index.emplace(t.keys[i].chunk_id, i);
  std::vector<size_t> rows;
  for (const auto &id : split.test) {
    auto it = index.find(id);
    if (it != index.end()) rows.push_back(it->second);
  }
  Require(!rows.empty(), Errc::kData, "no test chunks in " + bundle.input);
  const std::vector<int> y = Gather(t.Labels(), rows);

  std::vector<int> pred;
  if (bundle.kind == ModelKind::kDenseNet) {
    DenseNet1D<float> net = DenseNet1D<float>::FromJson(bundle.model);
    const NetConfig &c = net.config();
    const std::vector<float> p = net.Predict(ToTensor(t.values, rows, c.channels, c.time));
    for (float v : p) pred.push_back(v >= 0.5f ? 1 : 0);
  } else {
    Matrix x = t.values.SelectRows(rows);
    if (!bundle.scaler.is_null()) StandardScaler::FromJson(bundle.scaler).Transform(x);
    pred = TabularModel::FromJson(bundle.model).Predict(x);
  }
  return Confusion(y, pred);
}

std::string RunAblation(const fs::path &work, ModelKind kind,
                        const std::vector<std::string> &subsets, int n_iter,
                        const StageOptions &options) {
  std::vector<std::string> distinct;
  for (const auto &s : subsets) {
    if (std::find(distinct.begin(), distinct.end(), s) != distinct.end()) {
      spdlog::warn("ablation: subset {} requested twice, running it once", s);
      continue;
    }
    distinct.push_back(s);
  }
  // Validate every name before spending time on any search.
  const FeatureTable header = ReadFeatureTable(work / kFeaturesFile);
  for (const auto &s : distinct) SubsetColumns(header, s);

  std::string csv = "subset,f1_cv_train,f1_cv_valid,f1_test\n";
  SearchOptions search;
  search.n_iter = n_iter;
  for (const auto &s : distinct) {
    const TuneOutcome out = RunTune(work, kind, s, {}, search, options);
    const TrialRecord &best = out.search.trials[out.search.ranking.front()];
    const Report r = MakeReport(EvaluateBundle(work, out.bundle));
    csv += s + "," + FormatDouble(best.train_mean) + "," + FormatDouble(best.valid_mean) + "," +
           FormatDouble(r.average.f1) + "\n";
    spdlog::info("ablation {}: cv valid {:.3f}, test {:.3f}", s, best.valid_mean, r.average.f1);
  }
  return csv;
}

std::string PathologyStats(const std::vector<RecordingMeta> &manifest) {
  struct Tally {
    size_t recordings = 0, male = 0, female = 0;
    std::set<std::string> speakers;
  };
  std::map<std::pair<std::string, std::string>, Tally> tally;
  for (const auto &m : manifest) {
    std::vector<std::string> names = m.pathologies;
    if (m.label == Label::kHealthy)
      names = {"healthy"};
    else if (names.empty())
      names = {"unspecified"};
    for (const auto &n : names) {
      Tally &t = tally[{m.database, n}];
      ++t.recordings;
      (m.gender == Gender::kMale ? t.male : t.female) += 1;
      t.speakers.insert(m.speaker_id);
    }
  }
  std::string csv = "database,pathology,recordings,speakers,male,female\n";
  for (const auto &[key, t] : tally)
    csv += CsvField(key.first) + "," + CsvField(key.second) + "," + std::to_string(t.recordings) +
           "," + std::to_string(t.speakers.size()) + "," + std::to_string(t.male) + "," +
           std::to_string(t.female) + "\n";
  return csv;
}

}  // namespace vpd
