// tools/vpd.cc

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

// Command-line front end. Talks to the toolkit through the C interface only.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vpd/vpd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct Failure {
  int exit_code;
  std::string message;
};

[[noreturn]] void UsageError(const std::string &msg) { throw Failure{kExitUsage, msg}; }

void Check(vpd_status s) {
  if (s == VPD_OK) return;
  const int code = s == VPD_E_CONFIG || s == VPD_E_INVALID_ARGUMENT ? kExitUsage : kExitData;
  throw Failure{code, std::string(vpd_status_name(s)) + ": " + vpd_last_error()};
}

using OwnedString = std::unique_ptr<char, decltype(&vpd_string_free)>;
OwnedString Own(char *s) { return OwnedString(s, &vpd_string_free); }

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitData, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{kExitData, "cannot write " + path};
}

// Inline JSON when it looks like an object, otherwise a file name.
std::string JsonArg(const std::string &value) {
  const auto first = value.find_first_not_of(" \t\n");
  return first != std::string::npos && value[first] == '{' ? value : Slurp(value);
}

struct Common {
  uint64_t seed = 1;
  int jobs = 1;
  std::string config;
  std::string out;
  int verbosity = 0;
};

struct Args {
  Common common;
  int healthy = 200, pathological = 200;
  std::string corpus, set = "all";
  int test_per_class = 120, folds = 10;
  bool inverse_weights = false;
  std::string model, features, params, model_file, space, title, subsets, manifest, report;
  std::string format = "text";
  int n_iter = 50;
};

void AddCommon(CLI::App *sub, Common &c, bool needs_seed) {
  if (needs_seed) sub->add_option("--seed", c.seed, "Random seed (default 1)");
  sub->add_option("--jobs,-j", c.jobs, "Worker threads (falls back to VPD_JOBS, then 1)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--config", c.config, "JSON file of option defaults, keyed by long flag name");
  sub->add_flag("--verbose,-v", "More log output; repeat for debug");
}

// Fills options the command line left unset from the JSON config file.
void ApplyConfig(CLI::App *sub, const std::string &path) {
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(Slurp(path));
  } catch (const nlohmann::json::exception &e) {
    UsageError("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) UsageError("config " + path + ": expected a JSON object");
  std::map<std::string, CLI::Option *> by_key;
  for (CLI::Option *opt : sub->get_options()) {
    std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    by_key[name] = opt;
    std::replace(name.begin(), name.end(), '-', '_');
    by_key[name] = opt;
  }
  for (const auto &[key, value] : cfg.items()) {
    auto it = by_key.find(key);
    if (it == by_key.end()) UsageError("config " + path + ": unknown option '" + key + "'");
    CLI::Option *opt = it->second;
    if (opt->count() > 0) continue;
    std::string text;
    if (value.is_string())
      text = value.get<std::string>();
    else if (value.is_boolean())
      text = value.get<bool>() ? "true" : "false";
    else if (value.is_number() || value.is_object())
      text = value.dump();
    else
      UsageError("config " + path + ": unsupported value for '" + key + "'");
    try {
      opt->add_result(text);
      opt->run_callback();
    } catch (const CLI::Error &e) {
      UsageError("config " + path + ": " + key + ": " + e.what());
    }
  }
}

class Options {
 public:
  explicit Options(const Common &c) {
    Check(vpd_options_new(&raw_));
    Check(vpd_options_set_seed(raw_, c.seed));
    Check(vpd_options_set_jobs(raw_, c.jobs));
  }
  ~Options() { vpd_options_free(raw_); }
  Options(const Options &) = delete;
  Options &operator=(const Options &) = delete;
  vpd_options *get() { return raw_; }

 private:
  vpd_options *raw_ = nullptr;
};

void Require(const std::string &value, const char *flag) {
  if (value.empty()) UsageError(std::string(flag) + " is required");
}

std::string Join(const std::string &dir, const std::string &file) {
  if (dir.empty()) return file;
  return dir.back() == '/' ? dir + file : dir + "/" + file;
}

int RunSynth(const Args &a) {
  Require(a.common.out, "--out");
  Options o(a.common);
  Check(vpd_synth(a.common.out.c_str(), a.healthy, a.pathological, o.get()));
  std::printf("synth: %d healthy + %d pathological recordings in %s\n", a.healthy, a.pathological,
              a.common.out.c_str());
  return kExitOk;
}

int RunPreprocess(const Args &a) {
  Require(a.corpus, "--corpus");
  Require(a.common.out, "--out");
  Options o(a.common);
  size_t recordings = 0, chunks = 0;
  Check(vpd_preprocess(a.corpus.c_str(), a.common.out.c_str(), o.get(), &recordings, &chunks));
  std::printf("preprocess: %zu recordings admitted, %zu chunks\n", recordings, chunks);
  return kExitOk;
}

int RunFeatures(const Args &a) {
  Require(a.common.out, "--out");
  Options o(a.common);
  size_t chunks = 0, dropped = 0;
  Check(vpd_features(a.common.out.c_str(), a.set.c_str(), o.get(), &chunks, &dropped));
  std::printf("features (%s): %zu chunks, %zu dropped\n", a.set.c_str(), chunks, dropped);
  return kExitOk;
}

int RunSplit(const Args &a) {
  Require(a.common.out, "--out");
  Options o(a.common);
  Check(vpd_options_set_split(o.get(), a.test_per_class, a.folds));
  Check(vpd_options_set_inverse_weights(o.get(), a.inverse_weights ? 1 : 0));
  size_t test = 0, dev = 0;
  Check(vpd_split(a.common.out.c_str(), o.get(), &test, &dev));
  std::printf("split: %zu test chunks, %zu development chunks in %d folds\n", test, dev, a.folds);
  return kExitOk;
}

std::string DefaultModelFile(const Args &a) {
  return Join(a.common.out, "model_" + a.model + "_" + a.features + ".json");
}

int RunTrain(const Args &a) {
  Require(a.common.out, "--out");
  Require(a.model, "--model");
  Require(a.features, "--features");
  Options o(a.common);
  Check(vpd_options_set_inverse_weights(o.get(), a.inverse_weights ? 1 : 0));
  const std::string params = a.params.empty() ? std::string() : JsonArg(a.params);
  vpd_model *model = nullptr;
  Check(vpd_train(a.common.out.c_str(), a.model.c_str(), a.features.c_str(),
                  params.empty() ? nullptr : params.c_str(), o.get(), &model));
  std::unique_ptr<vpd_model, decltype(&vpd_model_free)> guard(model, &vpd_model_free);
  const std::string path = a.model_file.empty() ? DefaultModelFile(a) : a.model_file;
  Check(vpd_model_save(model, path.c_str()));
  std::printf("train: %s on %s -> %s\n", a.model.c_str(), a.features.c_str(), path.c_str());
  return kExitOk;
}

int RunTune(const Args &a) {
  Require(a.common.out, "--out");
  Require(a.model, "--model");
  Require(a.features, "--features");
  Options o(a.common);
  Check(vpd_options_set_n_iter(o.get(), a.n_iter));
  Check(vpd_options_set_inverse_weights(o.get(), a.inverse_weights ? 1 : 0));
  const std::string space = a.space.empty() ? std::string() : JsonArg(a.space);
  vpd_model *model = nullptr;
  char *board = nullptr;
  Check(vpd_tune(a.common.out.c_str(), a.model.c_str(), a.features.c_str(),
                 space.empty() ? nullptr : space.c_str(), o.get(), &model, &board));
  std::unique_ptr<vpd_model, decltype(&vpd_model_free)> guard(model, &vpd_model_free);
  OwnedString board_text = Own(board);
  const std::string path = a.model_file.empty() ? DefaultModelFile(a) : a.model_file;
  Check(vpd_model_save(model, path.c_str()));
  const std::string board_path =
      Join(a.common.out, "leaderboard_" + a.model + "_" + a.features + ".csv");
  Spit(board_path, board_text.get());
  char *params = nullptr;
  Check(vpd_model_params(model, &params));
  std::printf("tune: best params %s\n", Own(params).get());
  std::printf("tune: model -> %s, leaderboard -> %s\n", path.c_str(), board_path.c_str());
  return kExitOk;
}

std::string Stem(const std::string &path) {
  std::string name = path.substr(path.find_last_of('/') + 1);
  const auto dot = name.rfind('.');
  if (dot != std::string::npos) name.resize(dot);
  if (name.rfind("model_", 0) == 0) name = name.substr(6);
  return name;
}

int RunEvaluate(const Args &a) {
  Require(a.common.out, "--out");
  Require(a.model_file, "--model-file");
  vpd_model *model = nullptr;
  Check(vpd_model_load(a.model_file.c_str(), &model));
  std::unique_ptr<vpd_model, decltype(&vpd_model_free)> guard(model, &vpd_model_free);
  const std::string name = Stem(a.model_file);
  const std::string title = a.title.empty() ? name : a.title;
  char *report = nullptr;
  Check(vpd_evaluate(a.common.out.c_str(), model, title.c_str(), &report));
  OwnedString report_text = Own(report);
  char *tables = nullptr, *csv = nullptr;
  Check(vpd_render_report(report_text.get(), "text", &tables));
  OwnedString tables_text = Own(tables);
  Check(vpd_render_report(report_text.get(), "csv", &csv));
  OwnedString csv_text = Own(csv);
  Spit(Join(a.common.out, "report_" + name + ".json"), report_text.get());
  Spit(Join(a.common.out, "cm_" + name + ".csv"), csv_text.get());
  std::fputs(tables_text.get(), stdout);
  return kExitOk;
}

int RunAblate(const Args &a) {
  Require(a.common.out, "--out");
  Options o(a.common);
  Check(vpd_options_set_n_iter(o.get(), a.n_iter));
  Check(vpd_options_set_inverse_weights(o.get(), a.inverse_weights ? 1 : 0));
  const std::string model = a.model.empty() ? "gbt" : a.model;
  const std::string subsets = a.subsets.empty() ? "all,af-stats,af,af-base,mfcc" : a.subsets;
  char *csv = nullptr;
  Check(vpd_ablate(a.common.out.c_str(), model.c_str(), subsets.c_str(), o.get(), &csv));
  OwnedString text = Own(csv);
  Spit(Join(a.common.out, "ablation_" + model + ".csv"), text.get());
  std::fputs(text.get(), stdout);
  return kExitOk;
}

int RunStats(const Args &a) {
  Require(a.manifest, "--manifest");
  char *csv = nullptr;
  Check(vpd_stats(a.manifest.c_str(), &csv));
  OwnedString text = Own(csv);
  if (!a.common.out.empty()) Spit(Join(a.common.out, "stats.csv"), text.get());
  std::fputs(text.get(), stdout);
  return kExitOk;
}

int RunReport(const Args &a) {
  Require(a.report, "a report file");
  const std::string json = Slurp(a.report);
  char *text = nullptr;
  Check(vpd_render_report(json.c_str(), a.format.c_str(), &text));
  std::fputs(Own(text).get(), stdout);
  return kExitOk;
}

CLI::Option *FindOption(CLI::App *sub, const std::string &name) {
  try {
    return sub->get_option(name);
  } catch (const CLI::OptionNotFound &) {
    return nullptr;
  }
}

int Jobs(const CLI::App *sub, int flag_or_config) {
  if (sub->get_option("--jobs")->count() > 0) return flag_or_config;
  if (const char *env = std::getenv("VPD_JOBS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096)
      UsageError(std::string("VPD_JOBS must be a positive integer, got '") + env + "'");
    return static_cast<int>(v);
  }
  return flag_or_config;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Voice pathology detection toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", vpd_version());
  Args a;
  const std::vector<std::string> model_kinds = {"gbt", "iforest", "densenet"};
  const std::vector<std::string> sets = {"all", "af", "af-base", "af-stats", "mfcc", "spec", "raw"};
  std::map<CLI::App *, std::function<int(const Args &)>> handlers;
  std::map<CLI::App *, bool> seeded;

  auto add = [&](const char *name, const char *help, bool needs_seed,
                 std::function<int(const Args &)> fn) {
    CLI::App *sub = app.add_subcommand(name, help);
    AddCommon(sub, a.common, needs_seed);
    handlers[sub] = std::move(fn);
    seeded[sub] = needs_seed;
    return sub;
  };

  CLI::App *synth = add("synth", "Generate a synthetic sustained-vowel corpus", true, RunSynth);
  synth->add_option("--out,-o", a.common.out, "Corpus directory");
  synth->add_option("--healthy", a.healthy, "Healthy recordings")->check(CLI::PositiveNumber);
  synth->add_option("--pathological", a.pathological, "Pathological recordings")
      ->check(CLI::PositiveNumber);

  CLI::App *pre = add("preprocess", "Admit recordings and list their chunks", false, RunPreprocess);
  pre->add_option("--corpus", a.corpus, "Corpus directory holding manifest.jsonl");
  pre->add_option("--out,-o", a.common.out, "Work directory");

  CLI::App *feat = add("features", "Extract a feature set for every chunk", false, RunFeatures);
  feat->add_option("--out,-o", a.common.out, "Work directory");
  feat->add_option("--set", a.set, "Feature set")->check(CLI::IsMember(sets));

  CLI::App *split = add("split", "Speaker-disjoint test set and folds", true, RunSplit);
  split->add_option("--out,-o", a.common.out, "Work directory");
  split->add_option("--test-per-class", a.test_per_class, "Test chunks per class")
      ->check(CLI::PositiveNumber);
  split->add_option("--folds", a.folds, "Cross-validation folds")->check(CLI::Range(2, 100));
  split->add_flag("--inverse-weights", "Up-weight under-represented groups");

  auto model_opts = [&](CLI::App *sub) {
    sub->add_option("--out,-o", a.common.out, "Work directory");
    sub->add_option("--model", a.model, "Model kind")->check(CLI::IsMember(model_kinds));
    sub->add_option("--features", a.features,
                    "Feature subset (all, af, af-base, af-stats, mfcc) or network input "
                    "(mfcc, spec, raw)");
    sub->add_option("--model-file", a.model_file, "Model path (default <out>/model_<kind>_<features>.json)");
    sub->add_flag("--inverse-weights", "Up-weight under-represented groups");
  };
  CLI::App *train = add("train", "Fit one model with fixed parameters", true, RunTrain);
  model_opts(train);
  train->add_option("--params", a.params, "Model parameters: JSON object or file");

  CLI::App *tune = add("tune", "Randomized search with cross-validation, then refit", true, RunTune);
  model_opts(tune);
  tune->add_option("--n-iter", a.n_iter, "Sampled parameter sets")->check(CLI::PositiveNumber);
  tune->add_option("--space", a.space, "Search space: JSON object or file");

  CLI::App *eval = add("evaluate", "Score a model on the test chunks", false, RunEvaluate);
  eval->add_option("--out,-o", a.common.out, "Work directory");
  eval->add_option("--model-file", a.model_file, "Model to evaluate");
  eval->add_option("--title", a.title, "Title of the report tables");

  CLI::App *ablate = add("ablate", "Tune and test on each feature subset", true, RunAblate);
  ablate->add_option("--out,-o", a.common.out, "Work directory");
  ablate->add_option("--model", a.model, "Model kind (default gbt)")
      ->check(CLI::IsMember(std::vector<std::string>{"gbt", "iforest"}));
  ablate->add_option("--subsets", a.subsets, "Comma-separated subsets (default all five)");
  ablate->add_option("--n-iter", a.n_iter, "Sampled parameter sets")->check(CLI::PositiveNumber);
  ablate->add_flag("--inverse-weights", "Up-weight under-represented groups");

  CLI::App *stats = add("stats", "Recordings per database and pathology", false, RunStats);
  stats->add_option("--manifest", a.manifest, "manifest.jsonl");
  stats->add_option("--out,-o", a.common.out, "Directory for stats.csv");

  CLI::App *report = add("report", "Render a report JSON as tables", false, RunReport);
  report->add_option("report", a.report, "Report JSON");
  report->add_option("--format", a.format, "text or csv")
      ->check(CLI::IsMember(std::vector<std::string>{"text", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    if (app.get_subcommands().empty()) std::cerr << app.help();
    return kExitUsage;
  }

  CLI::App *sub = app.get_subcommands().front();
  try {
    if (!a.common.config.empty()) ApplyConfig(sub, a.common.config);
    a.common.jobs = Jobs(sub, a.common.jobs);
    // Flags are read back from the active subcommand: CLI11 resets a
    // variable bound to flags of several subcommands.
    a.common.verbosity = static_cast<int>(sub->get_option("--verbose")->count());
    if (CLI::Option *inv = FindOption(sub, "--inverse-weights"); inv && inv->count() > 0)
      a.inverse_weights = inv->as<bool>();
    vpd_set_log_level(a.common.verbosity >= 2 ? 1 : a.common.verbosity == 1 ? 2 : 3);
    if (seeded[sub] && sub->get_option("--seed")->count() == 0)
      std::fprintf(stderr, "seed: %llu (default)\n",
                   static_cast<unsigned long long>(a.common.seed));
    return handlers[sub](a);
  } catch (const Failure &f) {
    std::fprintf(stderr, "vpd %s: %s\n", sub->get_name().c_str(), f.message.c_str());
    if (f.exit_code == kExitUsage) std::cerr << sub->help();
    return f.exit_code;
  }
}
