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

#ifndef CLENS_CORPUS_H_
#define CLENS_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clens {

struct Token {
  std::string surface;
  std::string norm;  // ASCII case-folded surface.

  bool operator==(const Token&) const = default;
};

Token MakeToken(std::string surface);

enum class Split { kTrain, kValid, kTest };
enum class Side { kComplex, kSimple };
enum class TokenizeMode { kWhitespace, kWhitespacePunct };
enum class CorpusFormat { kTsv, kTwoFile };

std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);
std::string_view SideName(Side side);
Side ParseSide(std::string_view name);
TokenizeMode ParseTokenizeMode(std::string_view name);
std::string_view TokenizeModeName(TokenizeMode mode);
CorpusFormat ParseCorpusFormat(std::string_view name);

struct SentencePair {
  std::int64_t id = 0;
  std::vector<Token> complex;  // d
  std::vector<Token> simple;   // d'
  Split split = Split::kTrain;
  std::optional<std::string> domain;
};

struct HighlightMask {
  enum class Kind { kReference, kPredicted };

  std::vector<std::uint8_t> bits;
  Kind kind = Kind::kPredicted;

  std::size_t size() const { return bits.size(); }
  std::size_t CountOnes() const;
  bool AllZero() const { return CountOnes() == 0; }
};

// Controls how a complex token is matched against the simple sentence.
// Matching is type-level: duplicated tokens all receive the same bit.
struct MembershipOptions {
  bool case_sensitive = false;
};

struct InstanceOrigin {
  std::int64_t pair_id = 0;
  Side side = Side::kComplex;
};

struct LabeledInstance {
  std::vector<Token> tokens;
  int label = 0;
  InstanceOrigin origin;
  Split split = Split::kTrain;
  std::optional<std::string> domain;
  // Present on complex-side instances; derived once at labeling time.
  std::optional<HighlightMask> ref_mask;
};

std::vector<Token> Tokenize(std::string_view text,
                            TokenizeMode mode = TokenizeMode::kWhitespace);

std::string JoinSurfaces(std::span<const Token> tokens);

struct CorpusSource {
  // For kTsv a single file. For kTwoFile the common prefix: <prefix>.complex
  // and <prefix>.simple are read. An optional <prefix>.domain (or
  // <file>.domain for TSV) supplies one domain tag per line.
  std::filesystem::path path;
  CorpusFormat format = CorpusFormat::kTsv;
  Split split = Split::kTrain;
  TokenizeMode mode = TokenizeMode::kWhitespace;
  std::int64_t first_id = 0;
};

// Throws ValidationError on malformed input and RuntimeError on I/O
// failure. Ids are assigned sequentially from source.first_id.
std::vector<SentencePair> LoadParallelCorpus(const CorpusSource& source);

// Writes `complex<TAB>simple` lines (surfaces joined by single spaces).
void WriteTsvCorpus(std::span<const SentencePair> pairs,
                    const std::filesystem::path& path);

bool SameNormSequence(std::span<const Token> a, std::span<const Token> b);

std::vector<LabeledInstance> DeriveLabels(
    std::span<const SentencePair> pairs,
    const MembershipOptions& membership = {});

HighlightMask DeriveReferenceMask(const SentencePair& pair,
                                  const MembershipOptions& membership = {});

// Lower-level form of the membership rule shared with the metrics.
std::vector<std::uint8_t> AbsentFromSimple(
    std::span<const Token> complex, std::span<const Token> simple,
    const MembershipOptions& membership = {});

// JSON-lines instance records: {"id","side","split","tokens","label",
// "ref_mask","domain"}.
std::string InstanceToJson(const LabeledInstance& instance);
LabeledInstance InstanceFromJson(std::string_view line);
void WriteInstances(std::span<const LabeledInstance> instances,
                    const std::filesystem::path& path);
std::vector<LabeledInstance> ReadInstances(const std::filesystem::path& path);

}  // namespace clens

#endif  // CLENS_CORPUS_H_
