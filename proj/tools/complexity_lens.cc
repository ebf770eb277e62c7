/*
 * Copyright 2026 The complexity-lens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// complexity-lens: command-line front end for the explainable complexity
// pipeline.
//
//   complexity-lens evaluate --config run.cfg --corpus pairs.tsv \
//       --explainer lime --classifier lr --seed 42 --out out/

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "clens/classify.h"
#include "clens/corpus.h"
#include "clens/error.h"
#include "clens/metrics.h"
#include "clens/pipeline.h"
#include "clens/report.h"
#include "json.hpp"

namespace clens {
namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

using Entries = std::vector<std::pair<std::string, std::string>>;

bool IsBooleanKey(const std::string& key) {
  return key == "tune" || key == "lexical_features" || key == "case_sensitive";
}

std::string Dashed(std::string key) {
  for (char& c : key) c = c == '_' ? '-' : c;
  return key;
}

// Registers one option per configuration key. Values are appended to
// `entries` in command-line order so that later flags win.
void AddConfigFlags(CLI::App* app, Entries* entries, std::string* config_file) {
  app->add_option("--config", *config_file, "flat key = value configuration file");
  for (const auto& key : RunConfigKeys()) {
    std::string names = "--" + key;
    if (Dashed(key) != key) names += ",--" + Dashed(key);
    const auto store = [entries, key](const std::string& v) { entries->emplace_back(key, v); };
    if (IsBooleanKey(key)) {
      app->add_flag_function(names, [entries, key](std::int64_t count) {
        entries->emplace_back(key, count > 0 ? "true" : "false");
      });
    } else {
      app->add_option_function<std::string>(names, store)->type_name("VALUE");
    }
  }
}

RunConfig BuildConfig(const std::string& config_file, const Entries& flags) {
  RunConfig config;
  if (!config_file.empty()) {
    for (const auto& [k, v] : LoadConfigFile(config_file)) ApplyConfigEntry(config, k, v);
  }
  for (const auto& [k, v] : flags) ApplyConfigEntry(config, k, v);
  return config;
}

void PrintJson(const nlohmann::ordered_json& j) { std::cout << j.dump(2) << "\n"; }

nlohmann::ordered_json AccuracyJson(const AccuracyReport& r) {
  return {{"accuracy", r.accuracy}, {"n", r.n}, {"confusion", r.confusion}};
}

int Ingest(const RunConfig& config) {
  ValidateRunConfig(config);
  const auto corpus = PrepareCorpus(config);
  std::filesystem::create_directories(config.out);
  const auto path = config.out / "instances.jsonl";
  WriteInstances(corpus.instances, path);
  std::size_t positives = 0;
  for (const auto& inst : corpus.instances) positives += inst.label == 1;
  PrintJson({{"pairs", corpus.pairs.size()},
             {"instances", corpus.instances.size()},
             {"positive", positives},
             {"seed", config.seed},
             {"output", path.string()}});
  return 0;
}

int Train(const RunConfig& config) {
  ValidateRunConfig(config);
  const auto corpus = PrepareCorpus(config);
  const auto lexicon = LoadConfiguredLexicon(config);
  const auto trained = TrainClassifier(config, config.classifier, corpus, lexicon);
  SaveClassifier(trained, config.out);
  nlohmann::ordered_json out{{"classifier", ClassifierName(config.classifier)},
                             {"seed", config.seed},
                             {"dimension", trained.space.dimension()},
                             {"model_dir", config.out.string()}};
  for (const auto& [name, split] : {std::pair{"valid", Split::kValid}, {"test", Split::kTest}}) {
    const auto part = corpus.Select(split);
    if (!part.empty()) out[name] = AccuracyJson(EvaluateClassifier(trained.model, trained.space, part));
  }
  PrintJson(out);
  return 0;
}

int Explain(const RunConfig& config) {
  ValidateRunConfig(config);
  const auto corpus = PrepareCorpus(config);
  const auto lexicon = LoadConfiguredLexicon(config);
  const auto classifier = config.model_dir
                              ? LoadClassifier(config, corpus, lexicon)
                              : TrainClassifier(config, config.classifier, corpus, lexicon);
  const auto report = EvaluateWithClassifier(config, corpus, classifier, lexicon);
  std::filesystem::create_directories(config.out);
  for (const auto& path : WriteReport(report, ReportFormat::kHighlightedText, config.out)) {
    std::cout << path.string() << "\n";
  }
  return 0;
}

int Evaluate(const RunConfig& config) {
  TrainedClassifier trained;
  const auto report = EvaluateDataset(config, &trained);
  std::filesystem::create_directories(config.out);
  if (!config.model_dir) SaveClassifier(trained, config.out);
  for (auto format : {ReportFormat::kJson, ReportFormat::kTsv, ReportFormat::kHighlightedText}) {
    WriteReport(report, format, config.out);
  }
  std::cout << ReportTsvFromJson(ReportToJson(report));
  return 0;
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, '\t')) out.push_back(field);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

int CorrelateColumns(const std::filesystem::path& input, const std::string& x_col,
                     const std::string& y_col, const std::string& methods) {
  std::ifstream in(input);
  if (!in) throw ValidationError("cannot open " + input.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty table " + input.string());
  const auto header = SplitTabs(line);
  const auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError("no column '" + name + "' in " + input.string());
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t xi = column(x_col), yi = column(y_col);
  std::vector<double> x, y;
  std::size_t skipped = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != header.size()) throw ValidationError("ragged row in " + input.string());
    try {
      std::size_t used_x = 0, used_y = 0;
      const double vx = std::stod(fields[xi], &used_x);
      const double vy = std::stod(fields[yi], &used_y);
      if (used_x != fields[xi].size() || used_y != fields[yi].size()) throw std::invalid_argument("");
      x.push_back(vx);
      y.push_back(vy);
    } catch (const std::logic_error&) {
      ++skipped;  // NA and other non-numeric cells
    }
  }
  nlohmann::ordered_json out{{"x", x_col}, {"y", y_col}, {"n", x.size()}, {"skipped", skipped}};
  std::stringstream ms(methods);
  std::string name;
  while (std::getline(ms, name, ',')) {
    const auto method = ParseCorrelationMethod(name);
    const auto value = Correlate(x, y, method);
    out[std::string(CorrelationName(method))] =
        value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json(nullptr);
  }
  PrintJson(out);
  return 0;
}

int ConvertReport(const std::filesystem::path& input, const std::string& format,
                  const std::string& output) {
  std::ifstream in(input);
  if (!in) throw ValidationError("cannot open " + input.string());
  nlohmann::ordered_json report;
  try {
    report = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad report " + input.string() + ": " + e.what());
  }
  std::string text;
  switch (ParseReportFormat(format)) {
    case ReportFormat::kJson: text = report.dump(2) + "\n"; break;
    case ReportFormat::kTsv: text = ReportTsvFromJson(report); break;
    case ReportFormat::kHighlightedText:
      throw ValidationError("highlighted-text is produced by explain/evaluate, not from a report");
  }
  if (output.empty()) {
    std::cout << text;
  } else {
    WriteTextFile(output, text);
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Explainable text-complexity prediction and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "complexity-lens 0.1.0");

  struct Stage {
    CLI::App* cmd;
    Entries flags;
    std::string config_file;
  };
  std::vector<std::pair<std::string, std::string>> stage_help = {
      {"ingest", "derive labeled instances from a parallel corpus"},
      {"train", "train a classifier and save model.json and vocab.json"},
      {"explain", "highlight the complex test sentences"},
      {"evaluate", "train, explain, score and aggregate in one run"},
  };
  std::vector<Stage> stages(stage_help.size());
  for (std::size_t i = 0; i < stages.size(); ++i) {
    stages[i].cmd = app.add_subcommand(stage_help[i].first, stage_help[i].second);
    AddConfigFlags(stages[i].cmd, &stages[i].flags, &stages[i].config_file);
  }

  std::string input, x_col, y_col, methods = "kendall_tau_b,spearman,pearson";
  auto* correlate = app.add_subcommand("correlate", "correlate two numeric columns of a TSV table");
  correlate->add_option("--input", input, "TSV table with a header row")->required();
  correlate->add_option("--x", x_col, "first column")->required();
  correlate->add_option("--y", y_col, "second column")->required();
  correlate->add_option("--methods", methods, "comma-separated: pearson, spearman, kendall_tau_b");

  std::string report_input, report_format = "tsv", report_out;
  auto* report = app.add_subcommand("report", "re-render a report.json");
  report->add_option("--input", report_input, "report.json")->required();
  report->add_option("--format", report_format, "json or tsv");
  report->add_option("--out", report_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (correlate->parsed()) return CorrelateColumns(input, x_col, y_col, methods);
  if (report->parsed()) return ConvertReport(report_input, report_format, report_out);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (!stages[i].cmd->parsed()) continue;
    const RunConfig config = BuildConfig(stages[i].config_file, stages[i].flags);
    switch (i) {
      case 0: return Ingest(config);
      case 1: return Train(config);
      case 2: return Explain(config);
      default: return Evaluate(config);
    }
  }
  return kExitValidation;
}

}  // namespace
}  // namespace clens

int main(int argc, char** argv) {
  try {
    return clens::Main(argc, argv);
  } catch (const clens::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return clens::kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return clens::kExitRuntime;
  }
}
