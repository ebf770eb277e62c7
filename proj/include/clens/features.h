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

#ifndef CLENS_FEATURES_H_
#define CLENS_FEATURES_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clens/corpus.h"

namespace clens {

// Word -> Age-of-Acquisition rating (years). Keys are lowercased.
class Lexicon {
 public:
  Lexicon() = default;

  // Keeps the first rating for duplicate words. Throws ValidationError on
  // negative or non-finite ratings.
  void Add(std::string_view word, double rating);

  std::optional<double> Rating(std::string_view norm) const;
  bool Contains(std::string_view norm) const { return ratings_.contains(std::string(norm)); }
  std::size_t size() const { return ratings_.size(); }
  bool empty() const { return ratings_.empty(); }
  std::uint64_t Checksum() const;

 private:
  std::map<std::string, double> ratings_;
};

struct LexiconColumns {
  std::string word = "Word";
  std::string rating = "Rating.Mean";
};

struct LexiconLoadResult {
  Lexicon lexicon;
  std::size_t skipped_rows = 0;
};

LexiconLoadResult LoadAoaLexicon(const std::filesystem::path& path,
                                 const LexiconColumns& columns = {});

// Sparse feature vector ordered by feature id. Zero values are never stored.
class SparseVector {
 public:
  void Add(std::int32_t id, double value);
  void Set(std::int32_t id, double value);
  double Get(std::int32_t id) const;

  const std::map<std::int32_t, double>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double Dot(std::span<const double> dense) const;

  bool operator==(const SparseVector&) const = default;

 private:
  std::map<std::int32_t, double> entries_;
};

// N-gram keys join token norms with a single space; tokens never contain
// whitespace, so the separator is unambiguous.
inline constexpr char kNgramSeparator = ' ';

std::string NgramKey(std::span<const Token> tokens, std::size_t start, std::size_t n);

class Vocabulary {
 public:
  Vocabulary() = default;

  // Ids are assigned in lexicographic key order.
  Vocabulary(std::vector<std::string> keys, int max_n, int min_df);

  std::optional<std::int32_t> Find(std::string_view key) const;
  const std::string& Key(std::int32_t id) const { return keys_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return keys_.size(); }
  int max_n() const { return max_n_; }
  int min_df() const { return min_df_; }
  const std::vector<std::string>& keys() const { return keys_; }

  // Number of tokens in the n-gram stored under `id`.
  int Order(std::int32_t id) const;

  std::uint64_t Fingerprint() const;

  std::string ToJson() const;
  static Vocabulary FromJson(std::string_view text);

  bool operator==(const Vocabulary& other) const {
    return keys_ == other.keys_ && max_n_ == other.max_n_ && min_df_ == other.min_df_;
  }

 private:
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::int32_t> index_;
  int max_n_ = 1;
  int min_df_ = 1;
};

Vocabulary BuildVocabulary(std::span<const LabeledInstance> instances, int max_n,
                           int min_df);

// Calls fn(id, start, n) for every in-vocabulary n-gram occurrence.
template <typename Fn>
void ForEachNgram(std::span<const Token> tokens, const Vocabulary& vocab, Fn&& fn) {
  const auto n_max = static_cast<std::size_t>(vocab.max_n());
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    for (std::size_t n = 1; n <= n_max && start + n <= tokens.size(); ++n) {
      if (auto id = vocab.Find(NgramKey(tokens, start, n))) fn(*id, start, n);
    }
  }
}

SparseVector FeaturizeNgrams(std::span<const Token> tokens, const Vocabulary& vocab);

enum LexicalFeature : std::int32_t {
  kTokenCount = 0,
  kMeanChars,
  kMaxChars,
  kMeanAoa,
  kMaxAoa,
  kHardWordCount,
  kCoverage,
  kCoveredCount,
  kLexicalFeatureCount,
};

struct LexicalOptions {
  double hard_word_aoa = 10.0;
};

// Fills ids offset .. offset+kLexicalFeatureCount-1. AoA aggregates are taken
// over lexicon-covered tokens only and are zero when nothing is covered.
SparseVector FeaturizeLexical(std::span<const Token> tokens, const Lexicon& lexicon,
                              std::int32_t offset, const LexicalOptions& options = {});

// N-gram block followed by an optional lexical block.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  explicit FeatureSpace(Vocabulary vocab) : vocab_(std::move(vocab)) {}
  FeatureSpace(Vocabulary vocab, Lexicon lexicon, LexicalOptions options = {})
      : vocab_(std::move(vocab)), lexicon_(std::move(lexicon)), lexical_(true),
        lexical_options_(options) {}

  const Vocabulary& vocab() const { return vocab_; }
  const Lexicon& lexicon() const { return lexicon_; }
  bool has_lexical() const { return lexical_; }
  const LexicalOptions& lexical_options() const { return lexical_options_; }

  std::size_t dimension() const {
    return vocab_.size() + (lexical_ ? static_cast<std::size_t>(kLexicalFeatureCount) : 0);
  }
  std::int32_t lexical_offset() const { return static_cast<std::int32_t>(vocab_.size()); }

  SparseVector Featurize(std::span<const Token> tokens) const;

  // Covers the vocabulary, the presence of the lexical block and its lexicon.
  std::uint64_t Fingerprint() const;

 private:
  Vocabulary vocab_;
  Lexicon lexicon_;
  bool lexical_ = false;
  LexicalOptions lexical_options_;
};

// Mean feature vector (dense) over the given instances.
std::vector<double> MeanFeatureVector(const FeatureSpace& space,
                                      std::span<const LabeledInstance> instances);

}  // namespace clens

#endif  // CLENS_FEATURES_H_
