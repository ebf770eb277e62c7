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

#ifndef CLENS_PIPELINE_H_
#define CLENS_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clens/classify.h"
#include "clens/corpus.h"
#include "clens/explain.h"
#include "clens/features.h"
#include "clens/metrics.h"

namespace clens {

enum class ClassifierKind { kLogisticRegression, kNaiveBayes };
ClassifierKind ParseClassifierKind(std::string_view name);
std::string_view ClassifierName(ClassifierKind kind);

struct RunConfig {
  std::string dataset = "corpus";

  // Either one corpus (split by the fractions below) or explicit splits.
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> valid;
  std::optional<std::filesystem::path> test;
  // Pre-derived instances (ingest output); replaces the corpus paths for
  // the train and explain stages.
  std::optional<std::filesystem::path> instances;
  CorpusFormat format = CorpusFormat::kTsv;
  TokenizeMode tokenize = TokenizeMode::kWhitespace;
  double valid_fraction = 0.1;
  double test_fraction = 0.1;
  MembershipOptions membership;

  int max_n = 3;
  int min_df = 2;
  bool lexical_features = false;
  std::optional<std::filesystem::path> lexicon;
  LexiconColumns lexicon_columns;
  double hard_word_aoa = 10.0;

  ClassifierKind classifier = ClassifierKind::kLogisticRegression;
  LogisticHyper hyper;
  bool tune = false;
  double nb_alpha = 1.0;
  std::optional<ClassifierKind> compare_with;
  // Directory holding model.json and vocab.json from a previous `train`.
  std::optional<std::filesystem::path> model_dir;

  ExplainerKind explainer = ExplainerKind::kShap;
  ExplainerConfig explain;
  // When set, overrides max_highlights for top-features and LIME.
  std::optional<DatasetPreset> preset;

  UndefinedPolicy undefined_policy = UndefinedPolicy::kExclude;

  std::filesystem::path out = "out";
  std::uint64_t seed = 42;
  int threads = 1;
};

// Flat `key = value` configuration. Keys mirror the CLI flags
// (e.g. "explainer", "max_highlights", "seed"). Unknown keys are rejected.
const std::vector<std::string>& RunConfigKeys();
void ApplyConfigEntry(RunConfig& config, std::string_view key, std::string_view value);
std::vector<std::pair<std::string, std::string>> ParseConfigText(std::string_view text);
std::vector<std::pair<std::string, std::string>> LoadConfigFile(const std::filesystem::path& path);

// Propagates the global seed, checks parameter ranges and that every
// referenced input path exists.
void ValidateRunConfig(const RunConfig& config);

struct PreparedCorpus {
  std::vector<SentencePair> pairs;  // rebuilt from both sides when loaded from instances
  std::vector<LabeledInstance> instances;

  std::vector<LabeledInstance> Select(Split split) const;
  const SentencePair* FindPair(std::int64_t id) const;
};

PreparedCorpus PrepareCorpus(const RunConfig& config);

struct TrainedClassifier {
  FeatureSpace space;
  Model model;
  std::vector<double> background;  // mean training feature vector
};

// Empty unless a lexicon path is configured.
Lexicon LoadConfiguredLexicon(const RunConfig& config);

TrainedClassifier TrainClassifier(const RunConfig& config, ClassifierKind kind,
                                  const PreparedCorpus& corpus, const Lexicon& lexicon);

// Reads model.json + vocab.json written by SaveClassifier.
TrainedClassifier LoadClassifier(const RunConfig& config, const PreparedCorpus& corpus,
                                 const Lexicon& lexicon);
void SaveClassifier(const TrainedClassifier& classifier, const std::filesystem::path& dir);

// Test-split complex sentences with gold label 1, ordered by pair id.
std::vector<const LabeledInstance*> ExplanationTargets(const PreparedCorpus& corpus);

// Runs the configured explainer on each target; deterministic for any
// thread count.
std::vector<HighlightMask> ExplainTargets(const RunConfig& config,
                                          const TrainedClassifier& classifier,
                                          const Lexicon& lexicon,
                                          std::span<const LabeledInstance* const> targets);

struct SentenceRecord {
  std::int64_t id = 0;
  std::optional<std::string> domain;
  std::vector<Token> complex;
  HighlightMask mask;
  std::optional<SentenceScore> score;
};

struct DomainReport {
  std::string domain;
  MacroAverages macro;
  std::optional<double> classification_f1;
};

struct CorrelationRecord {
  std::string classification_metric;  // always "F1"
  std::string explanation_metric;     // "F1", "ED_1.5" or "TER"
  CorrelationMethod method = CorrelationMethod::kSpearman;
  std::size_t domains = 0;
  std::optional<double> value;
};

struct ClassifierComparison {
  std::string classifier;
  AccuracyReport test;
  ZTestResult ztest;
};

struct EvaluationReport {
  std::string dataset;
  std::string explainer;
  std::string classifier;
  std::uint64_t seed = 0;
  UndefinedPolicy undefined_policy = UndefinedPolicy::kExclude;
  std::map<std::string, std::size_t> split_pairs;

  std::optional<AccuracyReport> classification;
  std::optional<ClassifierComparison> comparison;

  std::vector<SentenceRecord> sentences;
  MacroAverages macro;
  std::vector<DomainReport> per_domain;
  std::vector<CorrelationRecord> correlations;
};

// ingest -> train -> explain -> score -> aggregate -> correlate.
// When `trained` is non-null it receives the classifier that was used.
EvaluationReport EvaluateDataset(const RunConfig& config, TrainedClassifier* trained = nullptr);

// Same, reusing an already trained classifier.
EvaluationReport EvaluateWithClassifier(const RunConfig& config, const PreparedCorpus& corpus,
                                        const TrainedClassifier& classifier,
                                        const Lexicon& lexicon);

}  // namespace clens

#endif  // CLENS_PIPELINE_H_
