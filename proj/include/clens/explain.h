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

#ifndef CLENS_EXPLAIN_H_
#define CLENS_EXPLAIN_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "clens/classify.h"
#include "clens/corpus.h"
#include "clens/features.h"

namespace clens {

enum class ExplainerKind {
  kRandom,
  kLexicon,
  kTopFeatures,
  kLime,
  kShap,
  kReference,  // oracle: predicted = reference mask
  kNone,       // all-zero mask
};

ExplainerKind ParseExplainerKind(std::string_view name);
std::string_view ExplainerName(ExplainerKind kind);

enum class LexiconMode { kPresence, kThreshold };
LexiconMode ParseLexiconMode(std::string_view name);

struct ExplainerConfig {
  // Budget K for top-feature and LIME highlighting.
  int max_highlights = 10;
  int lime_samples = 1000;
  // Kernel width on the normalized Hamming distance; 0.75 * sqrt(n) if unset.
  std::optional<double> lime_kernel_width;
  double lime_ridge = 1.0;
  LexiconMode lexicon_mode = LexiconMode::kThreshold;
  double lexicon_threshold = 10.0;
  std::uint64_t seed = 42;
};

void ValidateExplainerConfig(const ExplainerConfig& config);

// Highlight budgets tuned per dataset for LR feature highlighting and for
// LIME over LR.
enum class DatasetPreset { kNewsela, kWikiLarge, kBiendata };
DatasetPreset ParseDatasetPreset(std::string_view name);
int TopFeatureBudget(DatasetPreset preset);
int LimeBudget(DatasetPreset preset);

// Per-sentence stream seed, independent of scheduling order.
inline std::uint64_t SentenceSeed(std::uint64_t seed, std::int64_t sentence_id) {
  return seed ^ static_cast<std::uint64_t>(sentence_id);
}

// Probability of label 1 for an arbitrary token sequence.
using ScoreFn = std::function<double(std::span<const Token>)>;

// Checks the model/space fingerprint once and returns a scorer.
// The scorer keeps references to both arguments.
ScoreFn MakeScorer(const Model& model, const FeatureSpace& space);
ScoreFn MakeScorer(const LinearModel& model, const FeatureSpace& space);
ScoreFn MakeScorer(const NBModel& model, const FeatureSpace& space);

// Draws k ~ Uniform{0..n}, then k distinct positions uniformly.
HighlightMask ExplainRandom(std::span<const Token> tokens, std::uint64_t seed);

HighlightMask ExplainLexicon(std::span<const Token> tokens, const Lexicon& lexicon,
                             const ExplainerConfig& config);

// The global set of the K unigrams with the largest positive weights. Ties
// are broken toward the lower feature id.
class TopFeatureSet {
 public:
  TopFeatureSet() = default;
  TopFeatureSet(const LinearModel& model, const Vocabulary& vocab, int k);

  bool Contains(std::string_view norm) const { return words_.contains(std::string(norm)); }
  const std::vector<std::int32_t>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<std::int32_t> ids_;
  std::unordered_set<std::string> words_;
};

HighlightMask ExplainTopFeatures(const TopFeatureSet& top, std::span<const Token> tokens);

struct LimeSurrogate {
  std::vector<double> coefficients;  // one per token position
  double intercept = 0;
  bool degenerate = false;
};

// Weighted ridge fit from keep/drop masks to model scores.
LimeSurrogate FitLimeSurrogate(const ScoreFn& score, std::span<const Token> tokens,
                               const ExplainerConfig& config, std::uint64_t seed);

// Highlights up to K positions with the largest positive coefficients
// (lower index wins ties). A degenerate sample set yields an empty mask.
HighlightMask ExplainLime(const ScoreFn& score, std::span<const Token> tokens,
                          const ExplainerConfig& config, std::uint64_t seed);

// phi_j = w_j (x_j - mu_j), dense over the model dimension.
std::vector<double> LinearShapValues(const LinearModel& model, const SparseVector& x,
                                     std::span<const double> background);

// Sum of phi over the distinct in-vocabulary n-grams covering each token.
std::vector<double> TokenAttributions(const LinearModel& model, const FeatureSpace& space,
                                      std::span<const Token> tokens,
                                      std::span<const double> background);

// Highlights every token with positive attribution.
HighlightMask ExplainShapLinear(const LinearModel& model, const FeatureSpace& space,
                                std::span<const Token> tokens,
                                std::span<const double> background);

// "Their [[fatigue]] changes ..."
std::string FormatHighlighted(std::span<const Token> tokens, const HighlightMask& mask);

}  // namespace clens

#endif  // CLENS_EXPLAIN_H_
