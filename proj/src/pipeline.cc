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

#include "clens/pipeline.h"

#include <algorithm>
#include <charconv>
#include <exception>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "clens/error.h"

namespace clens {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("config key '" + std::string(key) + "': cannot parse '" +
                          std::string(value) + "'");
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ValidationError("config key '" + std::string(key) + "': expected a boolean, got '" +
                        std::string(value) + "'");
}

// The global seed drives training and explanation streams.
RunConfig Effective(const RunConfig& config) {
  RunConfig out = config;
  out.hyper.seed = config.seed;
  out.explain.seed = config.seed;
  return out;
}

void RequireFile(const std::filesystem::path& path, std::string_view what) {
  if (!std::filesystem::exists(path)) {
    throw ValidationError(std::string(what) + " not found: " + path.string());
  }
}

void RequireCorpus(const std::filesystem::path& path, CorpusFormat format, std::string_view what) {
  if (format == CorpusFormat::kTsv) {
    RequireFile(path, what);
  } else {
    RequireFile(path.string() + ".complex", what);
    RequireFile(path.string() + ".simple", what);
  }
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first
// failure.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Re-throws with the sentence id prepended, preserving the error category.
[[noreturn]] void RethrowWithContext(std::int64_t id) {
  const std::string prefix = "sentence " + std::to_string(id) + ": ";
  try {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const std::exception& e) {
    throw RuntimeError(prefix + e.what());
  }
}

std::optional<double> MetricOf(const MacroAverages& m, std::string_view metric) {
  if (metric == "F1") return m.f1;
  if (metric == "TER") return m.ter;
  return m.edit_distance[1];  // ED_1.5
}

}  // namespace

ClassifierKind ParseClassifierKind(std::string_view name) {
  if (name == "lr") return ClassifierKind::kLogisticRegression;
  if (name == "nb") return ClassifierKind::kNaiveBayes;
  throw ValidationError("unknown classifier: " + std::string(name));
}

std::string_view ClassifierName(ClassifierKind kind) {
  return kind == ClassifierKind::kLogisticRegression ? "lr" : "nb";
}

const std::vector<std::string>& RunConfigKeys() {
  static const std::vector<std::string> kKeys = {
      "dataset",        "corpus",          "train",
      "valid",          "test",            "instances",
      "format",         "tokenize",        "valid_fraction",
      "test_fraction",  "case_sensitive",  "max_n",
      "min_df",         "lexical_features", "lexicon",
      "lexicon_word_column", "lexicon_rating_column", "hard_word_aoa",
      "classifier",     "learning_rate",   "l2",
      "epochs",         "patience",        "batch_size",
      "tune",           "nb_alpha",        "compare_with",
      "model_dir",      "explainer",       "max_highlights",
      "lime_samples",   "lime_kernel_width", "lime_ridge",
      "lexicon_mode",   "lexicon_threshold", "preset",
      "undefined_policy", "out",           "seed",
      "threads",
  };
  return kKeys;
}

void ApplyConfigEntry(RunConfig& c, std::string_view key, std::string_view raw) {
  const std::string value = Trim(raw);
  const auto path = [&] { return std::filesystem::path(value); };
  if (key == "dataset") c.dataset = value;
  else if (key == "corpus") c.corpus = path();
  else if (key == "train") c.train = path();
  else if (key == "valid") c.valid = path();
  else if (key == "test") c.test = path();
  else if (key == "instances") c.instances = path();
  else if (key == "format") c.format = ParseCorpusFormat(value);
  else if (key == "tokenize") c.tokenize = ParseTokenizeMode(value);
  else if (key == "valid_fraction") c.valid_fraction = ParseNumber<double>(key, value);
  else if (key == "test_fraction") c.test_fraction = ParseNumber<double>(key, value);
  else if (key == "case_sensitive") c.membership.case_sensitive = ParseBool(key, value);
  else if (key == "max_n") c.max_n = ParseNumber<int>(key, value);
  else if (key == "min_df") c.min_df = ParseNumber<int>(key, value);
  else if (key == "lexical_features") c.lexical_features = ParseBool(key, value);
  else if (key == "lexicon") c.lexicon = path();
  else if (key == "lexicon_word_column") c.lexicon_columns.word = value;
  else if (key == "lexicon_rating_column") c.lexicon_columns.rating = value;
  else if (key == "hard_word_aoa") c.hard_word_aoa = ParseNumber<double>(key, value);
  else if (key == "classifier") c.classifier = ParseClassifierKind(value);
  else if (key == "learning_rate") c.hyper.learning_rate = ParseNumber<double>(key, value);
  else if (key == "l2") c.hyper.l2 = ParseNumber<double>(key, value);
  else if (key == "epochs") c.hyper.epochs = ParseNumber<int>(key, value);
  else if (key == "patience") c.hyper.patience = ParseNumber<int>(key, value);
  else if (key == "batch_size") c.hyper.batch_size = ParseNumber<int>(key, value);
  else if (key == "tune") c.tune = ParseBool(key, value);
  else if (key == "nb_alpha") c.nb_alpha = ParseNumber<double>(key, value);
  else if (key == "compare_with") {
    if (value == "none") c.compare_with.reset();
    else c.compare_with = ParseClassifierKind(value);
  }
  else if (key == "model_dir") c.model_dir = path();
  else if (key == "explainer") c.explainer = ParseExplainerKind(value);
  else if (key == "max_highlights") c.explain.max_highlights = ParseNumber<int>(key, value);
  else if (key == "lime_samples") c.explain.lime_samples = ParseNumber<int>(key, value);
  else if (key == "lime_kernel_width") c.explain.lime_kernel_width = ParseNumber<double>(key, value);
  else if (key == "lime_ridge") c.explain.lime_ridge = ParseNumber<double>(key, value);
  else if (key == "lexicon_mode") c.explain.lexicon_mode = ParseLexiconMode(value);
  else if (key == "lexicon_threshold") c.explain.lexicon_threshold = ParseNumber<double>(key, value);
  else if (key == "preset") {
    if (value == "none") c.preset.reset();
    else c.preset = ParseDatasetPreset(value);
  }
  else if (key == "undefined_policy") c.undefined_policy = ParseUndefinedPolicy(value);
  else if (key == "out") c.out = path();
  else if (key == "seed") c.seed = ParseNumber<std::uint64_t>(key, value);
  else if (key == "threads") c.threads = ParseNumber<int>(key, value);
  else throw ValidationError("unknown config key: " + std::string(key));
}

std::vector<std::pair<std::string, std::string>> ParseConfigText(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = Trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    entries.emplace_back(Trim(body.substr(0, eq)), Trim(body.substr(eq + 1)));
  }
  return entries;
}

std::vector<std::pair<std::string, std::string>> LoadConfigFile(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfigText(buf.str());
}

void ValidateRunConfig(const RunConfig& config) {
  const bool split_files = config.train || config.valid || config.test;
  if (config.corpus && split_files) {
    throw ValidationError("use either corpus or train/valid/test, not both");
  }
  if (!config.corpus && !split_files && !config.instances) {
    throw ValidationError("no corpus configured (corpus, train/valid/test or instances)");
  }
  if (config.corpus) RequireCorpus(*config.corpus, config.format, "corpus");
  if (config.train) RequireCorpus(*config.train, config.format, "train corpus");
  if (config.valid) RequireCorpus(*config.valid, config.format, "valid corpus");
  if (config.test) RequireCorpus(*config.test, config.format, "test corpus");
  if (config.instances) RequireFile(*config.instances, "instances file");
  if (config.lexicon) RequireFile(*config.lexicon, "lexicon");
  if (config.model_dir) {
    RequireFile(*config.model_dir / "model.json", "model");
    RequireFile(*config.model_dir / "vocab.json", "vocabulary");
  }
  if (!(config.valid_fraction >= 0 && config.test_fraction >= 0 &&
        config.valid_fraction + config.test_fraction < 1)) {
    throw ValidationError("split fractions must be non-negative and sum to < 1");
  }
  if (config.max_n < 1) throw ValidationError("max_n must be >= 1");
  if (config.min_df < 1) throw ValidationError("min_df must be >= 1");
  if (!(config.nb_alpha > 0)) throw ValidationError("nb_alpha must be > 0");
  if (config.threads < 1) throw ValidationError("threads must be >= 1");
  if (config.lexical_features && !config.lexicon) {
    throw ValidationError("lexical_features requires a lexicon");
  }
  if (config.explainer == ExplainerKind::kLexicon && !config.lexicon) {
    throw ValidationError("the lexicon explainer requires a lexicon");
  }
  if ((config.explainer == ExplainerKind::kTopFeatures ||
       config.explainer == ExplainerKind::kShap) &&
      config.classifier != ClassifierKind::kLogisticRegression) {
    throw ValidationError(std::string(ExplainerName(config.explainer)) +
                          " explanations need the lr classifier");
  }
  ValidateExplainerConfig(config.explain);
}

std::vector<LabeledInstance> PreparedCorpus::Select(Split split) const {
  std::vector<LabeledInstance> out;
  for (const auto& inst : instances) {
    if (inst.split == split) out.push_back(inst);
  }
  return out;
}

const SentencePair* PreparedCorpus::FindPair(std::int64_t id) const {
  const auto it = std::lower_bound(pairs.begin(), pairs.end(), id,
                                   [](const SentencePair& p, std::int64_t v) { return p.id < v; });
  if (it == pairs.end() || it->id != id) return nullptr;
  return &*it;
}

PreparedCorpus PrepareCorpus(const RunConfig& config) {
  PreparedCorpus prepared;
  if (config.corpus) {
    prepared.pairs = LoadParallelCorpus(
        {*config.corpus, config.format, Split::kTrain, config.tokenize, 0});
    // Deterministic seeded split over pair ids.
    std::vector<std::size_t> order(prepared.pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(config.seed);
    std::shuffle(order.begin(), order.end(), rng);
    const auto n = static_cast<double>(order.size());
    const auto n_test = static_cast<std::size_t>(config.test_fraction * n);
    const auto n_valid = static_cast<std::size_t>(config.valid_fraction * n);
    for (std::size_t k = 0; k < order.size(); ++k) {
      auto& pair = prepared.pairs[order[k]];
      pair.split = k < n_test ? Split::kTest : (k < n_test + n_valid ? Split::kValid : Split::kTrain);
    }
  } else if (config.train || config.valid || config.test) {
    std::int64_t next_id = 0;
    const std::pair<const std::optional<std::filesystem::path>*, Split> parts[] = {
        {&config.train, Split::kTrain}, {&config.valid, Split::kValid}, {&config.test, Split::kTest}};
    for (const auto& [path, split] : parts) {
      if (!*path) continue;
      auto loaded = LoadParallelCorpus({**path, config.format, split, config.tokenize, next_id});
      next_id += static_cast<std::int64_t>(loaded.size());
      std::move(loaded.begin(), loaded.end(), std::back_inserter(prepared.pairs));
    }
  } else if (config.instances) {
    prepared.instances = ReadInstances(*config.instances);
    // Rebuild the pairs; an identical pair was stored as its complex side only.
    std::map<std::int64_t, SentencePair> by_id;
    for (const auto& inst : prepared.instances) {
      auto& pair = by_id[inst.origin.pair_id];
      pair.id = inst.origin.pair_id;
      pair.split = inst.split;
      pair.domain = inst.domain;
      (inst.origin.side == Side::kComplex ? pair.complex : pair.simple) = inst.tokens;
    }
    for (auto& [id, pair] : by_id) {
      if (pair.simple.empty()) pair.simple = pair.complex;
      prepared.pairs.push_back(std::move(pair));
    }
    return prepared;
  } else {
    throw ValidationError("no corpus configured (corpus, train/valid/test or instances)");
  }
  prepared.instances = DeriveLabels(prepared.pairs, config.membership);
  return prepared;
}

Lexicon LoadConfiguredLexicon(const RunConfig& config) {
  if (!config.lexicon) return {};
  return LoadAoaLexicon(*config.lexicon, config.lexicon_columns).lexicon;
}

TrainedClassifier TrainClassifier(const RunConfig& raw, ClassifierKind kind,
                                  const PreparedCorpus& corpus, const Lexicon& lexicon) {
  const RunConfig config = Effective(raw);
  const auto train = corpus.Select(Split::kTrain);
  const auto valid = corpus.Select(Split::kValid);
  if (train.empty()) throw ValidationError("training split is empty");

  Vocabulary vocab = BuildVocabulary(train, config.max_n, config.min_df);
  TrainedClassifier out;
  out.space = config.lexical_features
                  ? FeatureSpace(std::move(vocab), lexicon, LexicalOptions{config.hard_word_aoa})
                  : FeatureSpace(std::move(vocab));
  if (kind == ClassifierKind::kNaiveBayes) {
    out.model = TrainNaiveBayes(train, out.space, config.nb_alpha);
  } else if (config.tune) {
    out.model = TuneLogisticRegression(train, valid, out.space, config.hyper);
  } else {
    out.model = TrainLogisticRegression(train, valid, out.space, config.hyper);
  }
  out.background = MeanFeatureVector(out.space, train);
  return out;
}

TrainedClassifier LoadClassifier(const RunConfig& config, const PreparedCorpus& corpus,
                                 const Lexicon& lexicon) {
  if (!config.model_dir) throw ValidationError("model_dir is not set");
  std::ifstream in(*config.model_dir / "vocab.json");
  if (!in) throw ValidationError("cannot open " + (*config.model_dir / "vocab.json").string());
  std::stringstream buf;
  buf << in.rdbuf();
  Vocabulary vocab = Vocabulary::FromJson(buf.str());
  TrainedClassifier out;
  out.space = config.lexical_features
                  ? FeatureSpace(std::move(vocab), lexicon, LexicalOptions{config.hard_word_aoa})
                  : FeatureSpace(std::move(vocab));
  out.model = LoadModel(*config.model_dir / "model.json");
  // Surface fingerprint mismatches before any explanation work.
  (void)MakeScorer(out.model, out.space);
  out.background = MeanFeatureVector(out.space, corpus.Select(Split::kTrain));
  return out;
}

void SaveClassifier(const TrainedClassifier& classifier, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  SaveModel(classifier.model, dir / "model.json");
  std::ofstream out(dir / "vocab.json", std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + (dir / "vocab.json").string());
  out << classifier.space.vocab().ToJson() << '\n';
}

std::vector<const LabeledInstance*> ExplanationTargets(const PreparedCorpus& corpus) {
  std::vector<const LabeledInstance*> targets;
  for (const auto& inst : corpus.instances) {
    if (inst.split == Split::kTest && inst.label == 1 && inst.origin.side == Side::kComplex) {
      targets.push_back(&inst);
    }
  }
  std::stable_sort(targets.begin(), targets.end(), [](const auto* a, const auto* b) {
    return a->origin.pair_id < b->origin.pair_id;
  });
  return targets;
}

std::vector<HighlightMask> ExplainTargets(const RunConfig& raw,
                                          const TrainedClassifier& classifier,
                                          const Lexicon& lexicon,
                                          std::span<const LabeledInstance* const> targets) {
  const RunConfig config = Effective(raw);
  ExplainerConfig ec = config.explain;
  if (config.preset) {
    if (config.explainer == ExplainerKind::kTopFeatures) ec.max_highlights = TopFeatureBudget(*config.preset);
    if (config.explainer == ExplainerKind::kLime) ec.max_highlights = LimeBudget(*config.preset);
  }
  ValidateExplainerConfig(ec);

  const LinearModel* linear = std::get_if<LinearModel>(&classifier.model);
  if ((config.explainer == ExplainerKind::kTopFeatures ||
       config.explainer == ExplainerKind::kShap) && linear == nullptr) {
    throw ValidationError(std::string(ExplainerName(config.explainer)) +
                          " explanations need a logistic regression model");
  }
  TopFeatureSet top;
  if (config.explainer == ExplainerKind::kTopFeatures) {
    top = TopFeatureSet(*linear, classifier.space.vocab(), ec.max_highlights);
  }
  ScoreFn scorer;
  if (config.explainer == ExplainerKind::kLime) scorer = MakeScorer(classifier.model, classifier.space);

  std::vector<HighlightMask> masks(targets.size());
  ParallelFor(targets.size(), config.threads, [&](std::size_t i) {
    const LabeledInstance& inst = *targets[i];
    const auto id = inst.origin.pair_id;
    try {
      const auto seed = SentenceSeed(ec.seed, id);
      switch (config.explainer) {
        case ExplainerKind::kRandom: masks[i] = ExplainRandom(inst.tokens, seed); break;
        case ExplainerKind::kLexicon: masks[i] = ExplainLexicon(inst.tokens, lexicon, ec); break;
        case ExplainerKind::kTopFeatures: masks[i] = ExplainTopFeatures(top, inst.tokens); break;
        case ExplainerKind::kLime: masks[i] = ExplainLime(scorer, inst.tokens, ec, seed); break;
        case ExplainerKind::kShap:
          masks[i] = ExplainShapLinear(*linear, classifier.space, inst.tokens, classifier.background);
          break;
        case ExplainerKind::kReference:
          if (!inst.ref_mask) throw ValidationError("instance has no reference mask");
          masks[i] = *inst.ref_mask;
          masks[i].kind = HighlightMask::Kind::kPredicted;
          break;
        case ExplainerKind::kNone:
          masks[i].bits.assign(inst.tokens.size(), 0);
          break;
      }
    } catch (...) {
      RethrowWithContext(id);
    }
  });
  return masks;
}

EvaluationReport EvaluateWithClassifier(const RunConfig& raw, const PreparedCorpus& corpus,
                                        const TrainedClassifier& classifier,
                                        const Lexicon& lexicon) {
  const RunConfig config = Effective(raw);
  EvaluationReport report;
  report.dataset = config.dataset;
  report.explainer = ExplainerName(config.explainer);
  report.classifier = std::holds_alternative<LinearModel>(classifier.model) ? "lr" : "nb";
  report.seed = config.seed;
  report.undefined_policy = config.undefined_policy;
  for (const auto& pair : corpus.pairs) ++report.split_pairs[std::string(SplitName(pair.split))];

  const auto test = corpus.Select(Split::kTest);
  if (test.empty()) throw ValidationError("test split is empty");
  report.classification = EvaluateClassifier(classifier.model, classifier.space, test);

  const auto targets = ExplanationTargets(corpus);
  const auto masks = ExplainTargets(config, classifier, lexicon, targets);
  report.sentences.resize(targets.size());
  ParallelFor(targets.size(), config.threads, [&](std::size_t i) {
    const LabeledInstance& inst = *targets[i];
    const auto id = inst.origin.pair_id;
    try {
      auto& record = report.sentences[i];
      record.id = id;
      record.domain = inst.domain;
      record.complex = inst.tokens;
      record.mask = masks[i];
      if (const SentencePair* pair = corpus.FindPair(id)) {
        SentenceScore score = ScoreSentence(masks[i], pair->complex, pair->simple, config.membership);
        score.id = id;
        score.domain = inst.domain;
        record.score = std::move(score);
      }
    } catch (...) {
      RethrowWithContext(id);
    }
  });

  std::vector<SentenceScore> scores;
  std::map<std::string, std::vector<SentenceScore>> by_domain;
  for (const auto& record : report.sentences) {
    if (!record.score) continue;
    scores.push_back(*record.score);
    if (record.domain) by_domain[*record.domain].push_back(*record.score);
  }
  if (scores.empty()) throw ValidationError("no test sentences could be scored (missing pairs?)");
  report.macro = MacroAverage(scores, config.undefined_policy);

  std::map<std::string, std::vector<LabeledInstance>> test_by_domain;
  for (const auto& inst : test) {
    if (inst.domain) test_by_domain[*inst.domain].push_back(inst);
  }
  for (const auto& [domain, domain_scores] : by_domain) {
    DomainReport dr;
    dr.domain = domain;
    dr.macro = MacroAverage(domain_scores, config.undefined_policy);
    const auto it = test_by_domain.find(domain);
    if (it != test_by_domain.end()) {
      dr.classification_f1 =
          EvaluateClassifier(classifier.model, classifier.space, it->second).PositiveF1();
    }
    report.per_domain.push_back(std::move(dr));
  }

  for (const std::string metric : {"F1", "ED_1.5", "TER"}) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& dr : report.per_domain) {
      const auto value = MetricOf(dr.macro, metric);
      if (dr.classification_f1 && value) {
        x.push_back(*dr.classification_f1);
        y.push_back(*value);
      }
    }
    if (x.size() < 2) continue;
    for (auto method : {CorrelationMethod::kKendallTauB, CorrelationMethod::kSpearman,
                        CorrelationMethod::kPearson}) {
      report.correlations.push_back({"F1", metric, method, x.size(), Correlate(x, y, method)});
    }
  }
  return report;
}

EvaluationReport EvaluateDataset(const RunConfig& raw, TrainedClassifier* trained) {
  ValidateRunConfig(raw);
  const RunConfig config = Effective(raw);
  const PreparedCorpus corpus = PrepareCorpus(config);
  if (corpus.pairs.empty()) throw ValidationError("evaluate needs a parallel corpus");
  const Lexicon lexicon = LoadConfiguredLexicon(config);
  const TrainedClassifier classifier =
      config.model_dir ? LoadClassifier(config, corpus, lexicon)
                       : TrainClassifier(config, config.classifier, corpus, lexicon);
  EvaluationReport report = EvaluateWithClassifier(config, corpus, classifier, lexicon);

  if (config.compare_with) {
    const TrainedClassifier other = TrainClassifier(config, *config.compare_with, corpus, lexicon);
    ClassifierComparison cmp;
    cmp.classifier = ClassifierName(*config.compare_with);
    cmp.test = EvaluateClassifier(other.model, other.space, corpus.Select(Split::kTest));
    cmp.ztest = CompareAccuracyZTest(report.classification->accuracy, report.classification->n,
                                     cmp.test.accuracy, cmp.test.n);
    report.comparison = std::move(cmp);
  }
  if (trained) *trained = classifier;
  return report;
}

}  // namespace clens
