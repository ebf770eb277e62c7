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

#include "clens/features.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "clens/error.h"
#include "hash.h"
#include "json.hpp"

namespace clens {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Minimal RFC 4180 field splitter (double-quoted fields, "" escapes).
std::vector<std::string> SplitCsv(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(Trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(Trim(field));
  return fields;
}

std::size_t CodePoints(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

void Lexicon::Add(std::string_view word, double rating) {
  if (!std::isfinite(rating) || rating < 0) {
    throw ValidationError("AoA rating must be finite and non-negative");
  }
  ratings_.emplace(Lower(word), rating);
}

std::optional<double> Lexicon::Rating(std::string_view norm) const {
  const auto it = ratings_.find(std::string(norm));
  if (it == ratings_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Lexicon::Checksum() const {
  internal::Fnv1a h;
  for (const auto& [word, rating] : ratings_) {
    h.Update(word);
    h.Update(rating);
  }
  return h.digest();
}

LexiconLoadResult LoadAoaLexicon(const std::filesystem::path& path,
                                 const LexiconColumns& columns) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw ValidationError("empty lexicon file " + path.string());
  const char delim = header.find('\t') != std::string::npos ? '\t' : ',';
  const auto names = SplitCsv(header, delim);
  const auto column = [&](const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw ValidationError("lexicon " + path.string() + " lacks column '" + name + "'");
    }
    return static_cast<std::size_t>(it - names.begin());
  };
  const std::size_t word_col = column(columns.word);
  const std::size_t rating_col = column(columns.rating);

  LexiconLoadResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsv(line, delim);
    if (fields.size() <= std::max(word_col, rating_col) || fields[word_col].empty()) {
      ++result.skipped_rows;
      continue;
    }
    double rating = 0;
    const auto& raw = fields[rating_col];
    std::size_t consumed = 0;
    try {
      rating = std::stod(raw, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != raw.size() || raw.empty() || !std::isfinite(rating) || rating < 0) {
      ++result.skipped_rows;
      continue;
    }
    result.lexicon.Add(fields[word_col], rating);
  }
  if (result.skipped_rows > 0) {
    Warn("lexicon " + path.string() + ": skipped " + std::to_string(result.skipped_rows) +
         " unparseable rows");
  }
  return result;
}

void SparseVector::Add(std::int32_t id, double value) {
  if (value == 0) return;
  auto [it, inserted] = entries_.try_emplace(id, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) entries_.erase(it);
  }
}

void SparseVector::Set(std::int32_t id, double value) {
  if (value == 0) {
    entries_.erase(id);
  } else {
    entries_[id] = value;
  }
}

double SparseVector::Get(std::int32_t id) const {
  const auto it = entries_.find(id);
  return it == entries_.end() ? 0.0 : it->second;
}

double SparseVector::Dot(std::span<const double> dense) const {
  double sum = 0;
  for (const auto& [id, v] : entries_) sum += dense[static_cast<std::size_t>(id)] * v;
  return sum;
}

std::string NgramKey(std::span<const Token> tokens, std::size_t start, std::size_t n) {
  std::string key = tokens[start].norm;
  for (std::size_t k = 1; k < n; ++k) {
    key += kNgramSeparator;
    key += tokens[start + k].norm;
  }
  return key;
}

Vocabulary::Vocabulary(std::vector<std::string> keys, int max_n, int min_df)
    : keys_(std::move(keys)), max_n_(max_n), min_df_(min_df) {
  std::sort(keys_.begin(), keys_.end());
  keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
  index_.reserve(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    index_.emplace(keys_[i], static_cast<std::int32_t>(i));
  }
}

std::optional<std::int32_t> Vocabulary::Find(std::string_view key) const {
  const auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::Order(std::int32_t id) const {
  const auto& key = Key(id);
  return 1 + static_cast<int>(std::count(key.begin(), key.end(), kNgramSeparator));
}

std::uint64_t Vocabulary::Fingerprint() const {
  internal::Fnv1a h;
  h.Update(static_cast<std::uint64_t>(max_n_));
  for (const auto& key : keys_) {
    h.Update(key);
    h.Update(std::string_view("\n"));
  }
  return h.digest();
}

std::string Vocabulary::ToJson() const {
  nlohmann::ordered_json j;
  j["max_n"] = max_n_;
  j["min_df"] = min_df_;
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < keys_.size(); ++i) entries[keys_[i]] = i;
  j["entries"] = std::move(entries);
  return j.dump(1);
}

Vocabulary Vocabulary::FromJson(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& entries = j.at("entries");
    std::vector<std::string> keys(entries.size());
    for (const auto& [key, id] : entries.items()) {
      const auto i = id.get<std::size_t>();
      if (i >= keys.size() || !keys[i].empty()) {
        throw ValidationError("vocabulary ids are not dense");
      }
      keys[i] = key;
    }
    Vocabulary vocab(keys, j.at("max_n").get<int>(), j.at("min_df").get<int>());
    if (vocab.keys_ != keys) throw ValidationError("vocabulary ids are not in key order");
    return vocab;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad vocabulary file: ") + e.what());
  }
}

Vocabulary BuildVocabulary(std::span<const LabeledInstance> instances, int max_n, int min_df) {
  if (max_n < 1) throw ValidationError("max_n must be >= 1");
  if (min_df < 1) throw ValidationError("min_df must be >= 1");
  if (instances.empty()) throw ValidationError("cannot build a vocabulary from no instances");

  std::unordered_map<std::string, int> df;
  std::unordered_set<std::string> seen;
  for (const auto& inst : instances) {
    seen.clear();
    const auto& tokens = inst.tokens;
    for (std::size_t start = 0; start < tokens.size(); ++start) {
      for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n) && start + n <= tokens.size();
           ++n) {
        auto key = NgramKey(tokens, start, n);
        if (seen.insert(key).second) ++df[std::move(key)];
      }
    }
  }
  std::vector<std::string> keys;
  for (auto& [key, count] : df) {
    if (count >= min_df) keys.push_back(key);
  }
  return Vocabulary(std::move(keys), max_n, min_df);
}

SparseVector FeaturizeNgrams(std::span<const Token> tokens, const Vocabulary& vocab) {
  SparseVector v;
  ForEachNgram(tokens, vocab, [&](std::int32_t id, std::size_t, std::size_t) { v.Add(id, 1.0); });
  return v;
}

SparseVector FeaturizeLexical(std::span<const Token> tokens, const Lexicon& lexicon,
                              std::int32_t offset, const LexicalOptions& options) {
  SparseVector v;
  if (tokens.empty()) return v;
  std::size_t total_chars = 0;
  std::size_t max_chars = 0;
  std::size_t covered = 0;
  std::size_t hard = 0;
  double aoa_sum = 0;
  double aoa_max = 0;
  for (const auto& t : tokens) {
    const auto chars = CodePoints(t.surface);
    total_chars += chars;
    max_chars = std::max(max_chars, chars);
    if (auto rating = lexicon.Rating(t.norm)) {
      ++covered;
      aoa_sum += *rating;
      aoa_max = std::max(aoa_max, *rating);
      if (*rating >= options.hard_word_aoa) ++hard;
    }
  }
  const double n = static_cast<double>(tokens.size());
  v.Set(offset + kTokenCount, n);
  v.Set(offset + kMeanChars, static_cast<double>(total_chars) / n);
  v.Set(offset + kMaxChars, static_cast<double>(max_chars));
  if (covered > 0) {
    v.Set(offset + kMeanAoa, aoa_sum / static_cast<double>(covered));
    v.Set(offset + kMaxAoa, aoa_max);
  }
  v.Set(offset + kHardWordCount, static_cast<double>(hard));
  v.Set(offset + kCoverage, static_cast<double>(covered) / n);
  v.Set(offset + kCoveredCount, static_cast<double>(covered));
  return v;
}

SparseVector FeatureSpace::Featurize(std::span<const Token> tokens) const {
  SparseVector v = FeaturizeNgrams(tokens, vocab_);
  if (lexical_) {
    const auto lex = FeaturizeLexical(tokens, lexicon_, lexical_offset(), lexical_options_);
    for (const auto& [id, value] : lex.entries()) v.Set(id, value);
  }
  return v;
}

std::uint64_t FeatureSpace::Fingerprint() const {
  internal::Fnv1a h;
  h.Update(vocab_.Fingerprint());
  h.Update(static_cast<std::uint64_t>(lexical_));
  if (lexical_) {
    h.Update(lexicon_.Checksum());
    h.Update(lexical_options_.hard_word_aoa);
  }
  return h.digest();
}

std::vector<double> MeanFeatureVector(const FeatureSpace& space,
                                      std::span<const LabeledInstance> instances) {
  std::vector<double> mean(space.dimension(), 0.0);
  if (instances.empty()) return mean;
  for (const auto& inst : instances) {
    const auto features = space.Featurize(inst.tokens);
    for (const auto& [id, v] : features.entries()) {
      mean[static_cast<std::size_t>(id)] += v;
    }
  }
  for (double& m : mean) m /= static_cast<double>(instances.size());
  return mean;
}

}  // namespace clens
