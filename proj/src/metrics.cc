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

#include "clens/metrics.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "clens/error.h"

namespace clens {
namespace {

std::optional<double> Mean(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

bool Constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

std::optional<double> Pearson(std::span<const double> x, std::span<const double> y) {
  if (Constant(x) || Constant(y)) return std::nullopt;
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Sum of t(t-1)/2 over runs of equal adjacent values under `eq`.
template <typename Eq>
std::int64_t TiedPairs(const std::vector<std::size_t>& order, Eq eq) {
  std::int64_t total = 0;
  std::int64_t run = 1;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i < order.size() && eq(order[i - 1], order[i])) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Stable merge sort of `order` by y, returning the number of swaps
// (strict inversions).
std::int64_t MergeCountInversions(std::vector<std::size_t>& order, std::span<const double> y) {
  std::vector<std::size_t> buffer(order.size());
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < order.size(); width *= 2) {
    for (std::size_t lo = 0; lo < order.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, order.size());
      const std::size_t hi = std::min(lo + 2 * width, order.size());
      std::size_t i = lo;
      std::size_t j = mid;
      std::size_t k = lo;
      while (i < mid && j < hi) {
        if (y[order[j]] < y[order[i]]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buffer[k++] = order[j++];
        } else {
          buffer[k++] = order[i++];
        }
      }
      while (i < mid) buffer[k++] = order[i++];
      while (j < hi) buffer[k++] = order[j++];
    }
    order.swap(buffer);
  }
  return swaps;
}

// Knight's O(n log n) tau-b.
std::optional<double> KendallTauB(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<std::int64_t>(x.size());
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });
  const std::int64_t n0 = n * (n - 1) / 2;
  const std::int64_t n1 = TiedPairs(order, [&](std::size_t a, std::size_t b) { return x[a] == x[b]; });
  const std::int64_t n3 = TiedPairs(
      order, [&](std::size_t a, std::size_t b) { return x[a] == x[b] && y[a] == y[b]; });
  const std::int64_t swaps = MergeCountInversions(order, y);
  const std::int64_t n2 = TiedPairs(order, [&](std::size_t a, std::size_t b) { return y[a] == y[b]; });
  if (n0 == n1 || n0 == n2) return std::nullopt;
  const std::int64_t numerator = n0 - n1 - n2 + n3 - 2 * swaps;
  const double denom = std::sqrt(static_cast<double>(n0 - n1)) * std::sqrt(static_cast<double>(n0 - n2));
  return std::clamp(static_cast<double>(numerator) / denom, -1.0, 1.0);
}

}  // namespace

HighlightScore ScoreHighlights(const HighlightMask& predicted, std::span<const Token> complex,
                               std::span<const Token> simple,
                               const MembershipOptions& membership) {
  if (predicted.size() != complex.size()) {
    throw ValidationError("mask has " + std::to_string(predicted.size()) + " bits for " +
                          std::to_string(complex.size()) + " tokens");
  }
  const auto absent = AbsentFromSimple(complex, simple, membership);
  std::size_t highlighted = 0;
  std::size_t hits = 0;
  std::size_t reference = 0;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    highlighted += predicted.bits[i];
    reference += absent[i];
    hits += predicted.bits[i] && absent[i];
  }
  HighlightScore score;
  if (highlighted > 0) score.precision = static_cast<double>(hits) / static_cast<double>(highlighted);
  if (reference > 0) score.recall = static_cast<double>(hits) / static_cast<double>(reference);
  if (score.precision && score.recall) {
    const double sum = *score.precision + *score.recall;
    score.f1 = sum == 0 ? 0.0 : 2 * *score.precision * *score.recall / sum;
  }
  return score;
}

double EditDistance(std::span<const Token> a, std::span<const Token> b, double sub_cost) {
  if (!(sub_cost > 0)) throw ValidationError("substitution cost must be > 0");
  std::vector<double> prev(b.size() + 1);
  std::vector<double> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0.0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<double>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const double diag = prev[j - 1] + (a[i - 1].norm == b[j - 1].norm ? 0.0 : sub_cost);
      cur[j] = std::min({prev[j] + 1.0, cur[j - 1] + 1.0, diag});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<Token> UnhighlightedRemainder(std::span<const Token> complex,
                                          const HighlightMask& mask) {
  if (mask.size() != complex.size()) {
    throw ValidationError("mask length does not match sentence length");
  }
  std::vector<Token> out;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    if (!mask.bits[i]) out.push_back(complex[i]);
  }
  return out;
}

double TranslationEditRate(std::span<const Token> remainder, std::span<const Token> reference) {
  if (reference.empty()) throw ValidationError("TER needs a non-empty reference");
  return EditDistance(remainder, reference, 1.0) / static_cast<double>(reference.size());
}

std::string_view SubstitutionCostLabel(std::size_t index) {
  static constexpr std::array<std::string_view, 3> kLabels{"ED_1", "ED_1.5", "ED_2"};
  return kLabels.at(index);
}

SentenceScore ScoreSentence(const HighlightMask& predicted, std::span<const Token> complex,
                            std::span<const Token> simple, const MembershipOptions& membership) {
  const HighlightScore hs = ScoreHighlights(predicted, complex, simple, membership);
  SentenceScore score;
  score.precision = hs.precision;
  score.recall = hs.recall;
  score.f1 = hs.f1;
  const auto remainder = UnhighlightedRemainder(complex, predicted);
  for (std::size_t k = 0; k < kSubstitutionCosts.size(); ++k) {
    score.edit_distance[k] = EditDistance(remainder, simple, kSubstitutionCosts[k]);
  }
  score.ter = TranslationEditRate(remainder, simple);
  return score;
}

UndefinedPolicy ParseUndefinedPolicy(std::string_view name) {
  if (name == "exclude") return UndefinedPolicy::kExclude;
  if (name == "zero") return UndefinedPolicy::kZero;
  throw ValidationError("unknown undefined-value policy: " + std::string(name));
}

std::string_view UndefinedPolicyName(UndefinedPolicy policy) {
  return policy == UndefinedPolicy::kExclude ? "exclude" : "zero";
}

MacroAverages MacroAverage(std::span<const SentenceScore> scores, UndefinedPolicy policy) {
  MacroAverages out;
  out.sentences = scores.size();
  std::vector<double> p, r, f, ter;
  std::array<std::vector<double>, 3> ed;
  const auto collect = [&](const std::optional<double>& v, std::vector<double>& into,
                           std::size_t& undefined) {
    if (v) {
      into.push_back(*v);
    } else {
      ++undefined;
      if (policy == UndefinedPolicy::kZero) into.push_back(0.0);
    }
  };
  for (const auto& s : scores) {
    collect(s.precision, p, out.undefined_precision);
    collect(s.recall, r, out.undefined_recall);
    collect(s.f1, f, out.undefined_f1);
    for (std::size_t k = 0; k < ed.size(); ++k) ed[k].push_back(s.edit_distance[k]);
    ter.push_back(s.ter);
  }
  out.precision = Mean(p);
  out.recall = Mean(r);
  out.f1 = Mean(f);
  for (std::size_t k = 0; k < ed.size(); ++k) out.edit_distance[k] = Mean(ed[k]);
  out.ter = Mean(ter);
  return out;
}

CorrelationMethod ParseCorrelationMethod(std::string_view name) {
  if (name == "pearson") return CorrelationMethod::kPearson;
  if (name == "spearman") return CorrelationMethod::kSpearman;
  if (name == "kendall" || name == "kendall_tau_b") return CorrelationMethod::kKendallTauB;
  throw ValidationError("unknown correlation method: " + std::string(name));
}

std::string_view CorrelationName(CorrelationMethod method) {
  switch (method) {
    case CorrelationMethod::kPearson: return "pearson";
    case CorrelationMethod::kSpearman: return "spearman";
    case CorrelationMethod::kKendallTauB: return "kendall_tau_b";
  }
  return "pearson";
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> Correlate(std::span<const double> x, std::span<const double> y,
                                CorrelationMethod method) {
  if (x.size() != y.size()) throw ValidationError("correlation inputs differ in length");
  if (x.size() < 2) throw ValidationError("correlation needs at least two observations");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ValidationError("correlation inputs must be finite");
    }
  }
  switch (method) {
    case CorrelationMethod::kPearson:
      return Pearson(x, y);
    case CorrelationMethod::kSpearman: {
      const auto rx = AverageRanks(x);
      const auto ry = AverageRanks(y);
      return Pearson(rx, ry);
    }
    case CorrelationMethod::kKendallTauB:
      return KendallTauB(x, y);
  }
  return std::nullopt;
}

}  // namespace clens
