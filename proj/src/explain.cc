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

#include "clens/explain.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "clens/error.h"

namespace clens {
namespace {

HighlightMask Predicted(std::size_t n) {
  HighlightMask mask;
  mask.kind = HighlightMask::Kind::kPredicted;
  mask.bits.assign(n, 0);
  return mask;
}

void CheckBackground(const LinearModel& model, std::span<const double> background) {
  if (background.size() != model.weights.size()) {
    throw ValidationError("background has " + std::to_string(background.size()) +
                          " dimensions, model has " + std::to_string(model.weights.size()));
  }
}

}  // namespace

ExplainerKind ParseExplainerKind(std::string_view name) {
  if (name == "random") return ExplainerKind::kRandom;
  if (name == "lexicon") return ExplainerKind::kLexicon;
  if (name == "top-features" || name == "lr") return ExplainerKind::kTopFeatures;
  if (name == "lime") return ExplainerKind::kLime;
  if (name == "shap") return ExplainerKind::kShap;
  if (name == "reference") return ExplainerKind::kReference;
  if (name == "none") return ExplainerKind::kNone;
  throw ValidationError("unknown explainer: " + std::string(name));
}

std::string_view ExplainerName(ExplainerKind kind) {
  switch (kind) {
    case ExplainerKind::kRandom: return "random";
    case ExplainerKind::kLexicon: return "lexicon";
    case ExplainerKind::kTopFeatures: return "top-features";
    case ExplainerKind::kLime: return "lime";
    case ExplainerKind::kShap: return "shap";
    case ExplainerKind::kReference: return "reference";
    case ExplainerKind::kNone: return "none";
  }
  return "none";
}

LexiconMode ParseLexiconMode(std::string_view name) {
  if (name == "presence") return LexiconMode::kPresence;
  if (name == "threshold") return LexiconMode::kThreshold;
  throw ValidationError("unknown lexicon mode: " + std::string(name));
}

void ValidateExplainerConfig(const ExplainerConfig& config) {
  if (config.max_highlights < 0) throw ValidationError("max_highlights must be >= 0");
  if (config.lime_samples < 1) throw ValidationError("lime_samples must be >= 1");
  if (config.lime_kernel_width && !(*config.lime_kernel_width > 0)) {
    throw ValidationError("lime_kernel_width must be > 0");
  }
  if (!(config.lime_ridge > 0)) throw ValidationError("lime_ridge must be > 0");
}

DatasetPreset ParseDatasetPreset(std::string_view name) {
  if (name == "newsela") return DatasetPreset::kNewsela;
  if (name == "wikilarge") return DatasetPreset::kWikiLarge;
  if (name == "biendata") return DatasetPreset::kBiendata;
  throw ValidationError("unknown preset: " + std::string(name));
}

int TopFeatureBudget(DatasetPreset preset) {
  switch (preset) {
    case DatasetPreset::kNewsela: return 200;
    case DatasetPreset::kWikiLarge: return 20000;
    case DatasetPreset::kBiendata: return 200;
  }
  return 200;
}

int LimeBudget(DatasetPreset preset) {
  switch (preset) {
    case DatasetPreset::kNewsela: return 10;
    case DatasetPreset::kWikiLarge: return 50;
    case DatasetPreset::kBiendata: return 10;
  }
  return 10;
}

ScoreFn MakeScorer(const LinearModel& model, const FeatureSpace& space) {
  // Validates the fingerprint up front.
  (void)Predict(model, space, std::span<const Token>{});
  return [&model, &space](std::span<const Token> tokens) {
    return PredictFeatures(model, space.Featurize(tokens)).score;
  };
}

ScoreFn MakeScorer(const NBModel& model, const FeatureSpace& space) {
  (void)Predict(model, space, std::span<const Token>{});
  return [&model, &space](std::span<const Token> tokens) {
    return PredictFeatures(model, FeaturizeNgrams(tokens, space.vocab())).score;
  };
}

ScoreFn MakeScorer(const Model& model, const FeatureSpace& space) {
  return std::visit([&space](const auto& m) { return MakeScorer(m, space); }, model);
}

HighlightMask ExplainRandom(std::span<const Token> tokens, std::uint64_t seed) {
  const std::size_t n = tokens.size();
  HighlightMask mask = Predicted(n);
  std::mt19937_64 rng(seed);
  const std::size_t k = std::uniform_int_distribution<std::size_t>(0, n)(rng);
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  // Partial Fisher-Yates: the first k entries are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
    std::swap(positions[i], positions[j]);
    mask.bits[positions[i]] = 1;
  }
  return mask;
}

HighlightMask ExplainLexicon(std::span<const Token> tokens, const Lexicon& lexicon,
                             const ExplainerConfig& config) {
  HighlightMask mask = Predicted(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto rating = lexicon.Rating(tokens[i].norm);
    if (!rating) continue;
    if (config.lexicon_mode == LexiconMode::kPresence || *rating >= config.lexicon_threshold) {
      mask.bits[i] = 1;
    }
  }
  return mask;
}

TopFeatureSet::TopFeatureSet(const LinearModel& model, const Vocabulary& vocab, int k) {
  if (k < 0) throw ValidationError("top-feature budget must be >= 0");
  std::vector<std::int32_t> candidates;
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    const auto fid = static_cast<std::int32_t>(id);
    if (vocab.Order(fid) == 1 && model.weights.at(id) > 0) candidates.push_back(fid);
  }
  const auto budget = static_cast<std::size_t>(k);
  if (budget > candidates.size()) {
    Warn("top-feature budget " + std::to_string(k) + " exceeds the " +
         std::to_string(candidates.size()) + " positive-weight unigrams; clipping");
  }
  const std::size_t keep = std::min(budget, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), [&](std::int32_t a, std::int32_t b) {
                      const double wa = model.weights[static_cast<std::size_t>(a)];
                      const double wb = model.weights[static_cast<std::size_t>(b)];
                      return wa != wb ? wa > wb : a < b;
                    });
  candidates.resize(keep);
  ids_ = std::move(candidates);
  for (auto id : ids_) words_.insert(vocab.Key(id));
}

HighlightMask ExplainTopFeatures(const TopFeatureSet& top, std::span<const Token> tokens) {
  HighlightMask mask = Predicted(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (top.Contains(tokens[i].norm)) mask.bits[i] = 1;
  }
  return mask;
}

LimeSurrogate FitLimeSurrogate(const ScoreFn& score, std::span<const Token> tokens,
                               const ExplainerConfig& config, std::uint64_t seed) {
  ValidateExplainerConfig(config);
  const std::size_t n = tokens.size();
  const auto samples = static_cast<std::size_t>(config.lime_samples);
  LimeSurrogate result;
  result.coefficients.assign(n, 0.0);
  if (n == 0) {
    result.degenerate = true;
    return result;
  }
  const double width = config.lime_kernel_width.value_or(0.75 * std::sqrt(static_cast<double>(n)));

  std::mt19937_64 rng(seed);
  Eigen::MatrixXd design(samples, n + 1);
  Eigen::VectorXd target(samples);
  Eigen::VectorXd weight(samples);
  std::vector<Token> kept;
  kept.reserve(n);
  for (std::size_t s = 0; s < samples; ++s) {
    kept.clear();
    std::size_t dropped = 0;
    design(static_cast<Eigen::Index>(s), 0) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool keep = (rng() >> 63) != 0;
      design(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i + 1)) = keep ? 1.0 : 0.0;
      if (keep) {
        kept.push_back(tokens[i]);
      } else {
        ++dropped;
      }
    }
    const double distance = static_cast<double>(dropped) / static_cast<double>(n);
    weight(static_cast<Eigen::Index>(s)) = std::exp(-(distance * distance) / (width * width));
    target(static_cast<Eigen::Index>(s)) = score(kept);
  }

  bool all_same = true;
  for (Eigen::Index s = 1; s < design.rows() && all_same; ++s) {
    all_same = design.row(s) == design.row(0);
  }
  if (all_same) {
    Warn("LIME samples are all identical; surrogate is degenerate");
    result.degenerate = true;
    return result;
  }

  const Eigen::MatrixXd weighted = design.array().colwise() * weight.array();
  Eigen::MatrixXd gram = design.transpose() * weighted;
  for (Eigen::Index i = 1; i < gram.rows(); ++i) gram(i, i) += config.lime_ridge;
  const Eigen::VectorXd rhs = weighted.transpose() * target;
  const Eigen::VectorXd beta = gram.ldlt().solve(rhs);
  result.intercept = beta(0);
  for (std::size_t i = 0; i < n; ++i) result.coefficients[i] = beta(static_cast<Eigen::Index>(i + 1));
  return result;
}

HighlightMask ExplainLime(const ScoreFn& score, std::span<const Token> tokens,
                          const ExplainerConfig& config, std::uint64_t seed) {
  const LimeSurrogate surrogate = FitLimeSurrogate(score, tokens, config, seed);
  HighlightMask mask = Predicted(tokens.size());
  if (surrogate.degenerate) return mask;
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (surrogate.coefficients[i] > 0) positive.push_back(i);
  }
  std::stable_sort(positive.begin(), positive.end(), [&](std::size_t a, std::size_t b) {
    return surrogate.coefficients[a] > surrogate.coefficients[b];
  });
  const std::size_t keep =
      std::min(positive.size(), static_cast<std::size_t>(config.max_highlights));
  for (std::size_t r = 0; r < keep; ++r) mask.bits[positive[r]] = 1;
  return mask;
}

std::vector<double> LinearShapValues(const LinearModel& model, const SparseVector& x,
                                     std::span<const double> background) {
  CheckBackground(model, background);
  std::vector<double> phi(model.weights.size());
  for (std::size_t j = 0; j < phi.size(); ++j) {
    phi[j] = model.weights[j] * (x.Get(static_cast<std::int32_t>(j)) - background[j]);
  }
  return phi;
}

std::vector<double> TokenAttributions(const LinearModel& model, const FeatureSpace& space,
                                      std::span<const Token> tokens,
                                      std::span<const double> background) {
  CheckBackground(model, background);
  if (model.weights.size() != space.dimension()) {
    throw ValidationError("model dimension does not match the feature space");
  }
  const SparseVector x = space.Featurize(tokens);
  std::vector<std::set<std::int32_t>> covering(tokens.size());
  ForEachNgram(tokens, space.vocab(), [&](std::int32_t id, std::size_t start, std::size_t n) {
    for (std::size_t k = start; k < start + n; ++k) covering[k].insert(id);
  });
  std::vector<double> attribution(tokens.size(), 0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (auto id : covering[i]) {
      const auto j = static_cast<std::size_t>(id);
      attribution[i] += model.weights[j] * (x.Get(id) - background[j]);
    }
  }
  return attribution;
}

HighlightMask ExplainShapLinear(const LinearModel& model, const FeatureSpace& space,
                                std::span<const Token> tokens,
                                std::span<const double> background) {
  const auto attribution = TokenAttributions(model, space, tokens, background);
  HighlightMask mask = Predicted(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) mask.bits[i] = attribution[i] > 0 ? 1 : 0;
  return mask;
}

std::string FormatHighlighted(std::span<const Token> tokens, const HighlightMask& mask) {
  if (mask.size() != tokens.size()) throw ValidationError("mask length does not match sentence");
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    if (mask.bits[i]) {
      out += "[[" + tokens[i].surface + "]]";
    } else {
      out += tokens[i].surface;
    }
  }
  return out;
}

}  // namespace clens
