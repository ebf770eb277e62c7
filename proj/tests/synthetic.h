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

#ifndef CLENS_TESTS_SYNTHETIC_H_
#define CLENS_TESTS_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "clens/corpus.h"

namespace clens::testing {

struct SyntheticOptions {
  std::size_t pairs = 100;
  std::uint64_t seed = 7;
  int domains = 0;            // 0: no domain tags
  double identical_rate = 0.1;
  std::size_t min_length = 6;
  std::size_t max_length = 15;
};

// Complex sentences mix common words ("w0".."w39") with rarer words
// ("rare0".."rare39"); simplification drops or replaces the rare words.
// Domain k uses a rare-word rate that grows with k.
std::vector<SentencePair> MakeSyntheticPairs(const SyntheticOptions& options);

// Writes `<dir>/<name>.tsv` (+ `.domain` when tagged); returns the TSV path.
std::filesystem::path WriteSyntheticCorpus(const std::filesystem::path& dir,
                                           const std::string& name,
                                           const SyntheticOptions& options);

// Label 1 iff the sentence contains the marker token "q".
std::vector<LabeledInstance> MakeSeparableInstances(std::size_t n, std::uint64_t seed);

std::vector<Token> Tokens(std::initializer_list<const char*> words);

// Fresh scratch directory under the system temp dir.
std::filesystem::path ScratchDir(const std::string& tag);

}  // namespace clens::testing

#endif  // CLENS_TESTS_SYNTHETIC_H_
