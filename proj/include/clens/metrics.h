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

#ifndef CLENS_METRICS_H_
#define CLENS_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clens/corpus.h"

namespace clens {

// Tokenwise precision/recall/F1 of a predicted mask against the tokens of d
// that do not occur in d'. Undefined values are nullopt.
struct HighlightScore {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

HighlightScore ScoreHighlights(const HighlightMask& predicted, std::span<const Token> complex,
                               std::span<const Token> simple,
                               const MembershipOptions& membership = {});

// Word-level Levenshtein over norms: insertion = deletion = 1,
// substitution = sub_cost.
double EditDistance(std::span<const Token> a, std::span<const Token> b, double sub_cost = 1.0);

// d | not h(d): tokens whose mask bit is 0, in order.
std::vector<Token> UnhighlightedRemainder(std::span<const Token> complex,
                                          const HighlightMask& mask);

// Shift-free TER against a single reference: edits / |reference|.
double TranslationEditRate(std::span<const Token> remainder, std::span<const Token> reference);

inline constexpr std::array<double, 3> kSubstitutionCosts{1.0, 1.5, 2.0};
std::string_view SubstitutionCostLabel(std::size_t index);  // "ED_1", "ED_1.5", "ED_2"

struct SentenceScore {
  std::int64_t id = 0;
  std::optional<std::string> domain;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::array<double, 3> edit_distance{};  // indexed like kSubstitutionCosts
  double ter = 0;
};

SentenceScore ScoreSentence(const HighlightMask& predicted, std::span<const Token> complex,
                            std::span<const Token> simple,
                            const MembershipOptions& membership = {});

// kExclude drops undefined values from the mean; kZero counts them as 0.
enum class UndefinedPolicy { kExclude, kZero };
UndefinedPolicy ParseUndefinedPolicy(std::string_view name);
std::string_view UndefinedPolicyName(UndefinedPolicy policy);

struct MacroAverages {
  std::size_t sentences = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::array<std::optional<double>, 3> edit_distance{};
  std::optional<double> ter;
  std::size_t undefined_precision = 0;
  std::size_t undefined_recall = 0;
  std::size_t undefined_f1 = 0;
};

MacroAverages MacroAverage(std::span<const SentenceScore> scores,
                           UndefinedPolicy policy = UndefinedPolicy::kExclude);

enum class CorrelationMethod { kPearson, kSpearman, kKendallTauB };
CorrelationMethod ParseCorrelationMethod(std::string_view name);
std::string_view CorrelationName(CorrelationMethod method);

// Fractional (average) ranks starting at 1.
std::vector<double> AverageRanks(std::span<const double> values);

// nullopt when either input has zero variance (the coefficient is
// undefined). Throws ValidationError unless |x| = |y| >= 2.
std::optional<double> Correlate(std::span<const double> x, std::span<const double> y,
                                CorrelationMethod method);

}  // namespace clens

#endif  // CLENS_METRICS_H_
