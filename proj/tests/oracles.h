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

// Independent reference implementations used only by tests. None of these
// share code paths with the library routines they check.

#ifndef CLENS_TESTS_ORACLES_H_
#define CLENS_TESTS_ORACLES_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace clens::oracle {

// Minimum cost over all order-preserving alignments (traces): choose k
// aligned position pairs, pay sub_cost per mismatched pair and 1 per
// unaligned symbol on either side. Exhaustive over position subsets.
double TraceEditDistance(const std::vector<std::string>& a, const std::vector<std::string>& b,
                         double sub_cost);

struct PrfOracle {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

// Direct set comprehension over lowercased words.
PrfOracle TokenwisePrf(const std::vector<std::string>& complex,
                       const std::vector<std::string>& simple,
                       const std::vector<int>& mask);

// Textbook one-pass sums in long double.
std::optional<double> Pearson(const std::vector<double>& x, const std::vector<double>& y);
// Ranks by counting smaller and equal values, O(n^2).
std::vector<double> RanksByCounting(const std::vector<double>& v);
std::optional<double> Spearman(const std::vector<double>& x, const std::vector<double>& y);
// Pair enumeration: (C - D) / sqrt((C + D + Ty)(C + D + Tx)) where Tx/Ty
// count pairs tied only in x / only in y.
std::optional<double> KendallTauB(const std::vector<double>& x, const std::vector<double>& y);

// Two-tailed p-value via composite Simpson integration of the normal density.
double TwoTailedNormalP(double z);

// Exact Shapley values of v over n players by subset enumeration.
std::vector<double> ShapleyValues(int n, const std::function<double(std::uint32_t)>& value);

}  // namespace clens::oracle

#endif  // CLENS_TESTS_ORACLES_H_
