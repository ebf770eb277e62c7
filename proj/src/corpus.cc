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

#include "clens/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "clens/error.h"
#include "json.hpp"

namespace clens {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)); }

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw RuntimeError("read failure on " + path.string());
  return lines;
}

std::string Where(const std::filesystem::path& path, std::size_t line_index) {
  return path.string() + ":" + std::to_string(line_index + 1);
}

std::vector<std::optional<std::string>> ReadDomains(
    const std::filesystem::path& path, std::size_t expected) {
  std::vector<std::optional<std::string>> domains(expected);
  if (!std::filesystem::exists(path)) return domains;
  const auto lines = ReadLines(path);
  if (lines.size() != expected) {
    throw ValidationError("domain file " + path.string() + " has " +
                          std::to_string(lines.size()) + " lines, expected " +
                          std::to_string(expected));
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!lines[i].empty()) domains[i] = lines[i];
  }
  return domains;
}

std::filesystem::path WithSuffix(const std::filesystem::path& p,
                                 std::string_view suffix) {
  return std::filesystem::path(p.string() + std::string(suffix));
}

}  // namespace

Token MakeToken(std::string surface) {
  Token t;
  t.norm = Lower(surface);
  t.surface = std::move(surface);
  return t;
}

std::size_t HighlightMask::CountOnes() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "train";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  throw ValidationError("unknown split: " + std::string(name));
}

std::string_view SideName(Side side) {
  return side == Side::kComplex ? "complex" : "simple";
}

Side ParseSide(std::string_view name) {
  if (name == "complex") return Side::kComplex;
  if (name == "simple") return Side::kSimple;
  throw ValidationError("unknown side: " + std::string(name));
}

TokenizeMode ParseTokenizeMode(std::string_view name) {
  if (name == "whitespace") return TokenizeMode::kWhitespace;
  if (name == "whitespace+punct") return TokenizeMode::kWhitespacePunct;
  throw ValidationError("unknown tokenization mode: " + std::string(name));
}

std::string_view TokenizeModeName(TokenizeMode mode) {
  return mode == TokenizeMode::kWhitespace ? "whitespace" : "whitespace+punct";
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "tsv") return CorpusFormat::kTsv;
  if (name == "two-file") return CorpusFormat::kTwoFile;
  throw ValidationError("unknown corpus format: " + std::string(name));
}

std::vector<Token> Tokenize(std::string_view text, TokenizeMode mode) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    if (j == i) break;
    std::string_view word = text.substr(i, j - i);
    i = j;

    if (mode == TokenizeMode::kWhitespace ||
        std::all_of(word.begin(), word.end(), IsPunct)) {
      tokens.push_back(MakeToken(std::string(word)));
      continue;
    }
    std::size_t lo = 0;
    std::size_t hi = word.size();
    while (lo < hi && IsPunct(word[lo])) {
      tokens.push_back(MakeToken(std::string(1, word[lo])));
      ++lo;
    }
    while (hi > lo && IsPunct(word[hi - 1])) --hi;
    tokens.push_back(MakeToken(std::string(word.substr(lo, hi - lo))));
    for (std::size_t k = hi; k < word.size(); ++k) {
      tokens.push_back(MakeToken(std::string(1, word[k])));
    }
  }
  return tokens;
}

std::string JoinSurfaces(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i].surface;
  }
  return out;
}

std::vector<SentencePair> LoadParallelCorpus(const CorpusSource& source) {
  std::vector<std::string> complex_lines;
  std::vector<std::string> simple_lines;
  std::vector<std::string> where;
  std::filesystem::path domain_path;

  if (source.format == CorpusFormat::kTsv) {
    const auto lines = ReadLines(source.path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& line = lines[i];
      const auto tabs = std::count(line.begin(), line.end(), '\t');
      if (tabs != 1) {
        throw ValidationError(Where(source.path, i) + ": expected exactly one tab, found " +
                              std::to_string(tabs));
      }
      const auto tab = line.find('\t');
      complex_lines.push_back(line.substr(0, tab));
      simple_lines.push_back(line.substr(tab + 1));
      where.push_back(Where(source.path, i));
    }
    domain_path = WithSuffix(source.path, ".domain");
  } else {
    const auto complex_path = WithSuffix(source.path, ".complex");
    const auto simple_path = WithSuffix(source.path, ".simple");
    complex_lines = ReadLines(complex_path);
    simple_lines = ReadLines(simple_path);
    if (complex_lines.size() != simple_lines.size()) {
      throw ValidationError("alignment error: " + complex_path.string() + " has " +
                            std::to_string(complex_lines.size()) + " lines but " +
                            simple_path.string() + " has " +
                            std::to_string(simple_lines.size()));
    }
    for (std::size_t i = 0; i < complex_lines.size(); ++i) {
      where.push_back(Where(complex_path, i));
    }
    domain_path = WithSuffix(source.path, ".domain");
  }

  const auto domains = ReadDomains(domain_path, complex_lines.size());
  std::vector<SentencePair> pairs;
  pairs.reserve(complex_lines.size());
  for (std::size_t i = 0; i < complex_lines.size(); ++i) {
    SentencePair pair;
    pair.id = source.first_id + static_cast<std::int64_t>(i);
    pair.complex = Tokenize(complex_lines[i], source.mode);
    pair.simple = Tokenize(simple_lines[i], source.mode);
    if (pair.complex.empty()) throw ValidationError(where[i] + ": empty complex sentence");
    if (pair.simple.empty()) throw ValidationError(where[i] + ": empty simple sentence");
    pair.split = source.split;
    pair.domain = domains[i];
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

void WriteTsvCorpus(std::span<const SentencePair> pairs,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path.string());
  for (const auto& pair : pairs) {
    out << JoinSurfaces(pair.complex) << '\t' << JoinSurfaces(pair.simple) << '\n';
  }
  if (!out) throw RuntimeError("write failure on " + path.string());
}

bool SameNormSequence(std::span<const Token> a, std::span<const Token> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Token& x, const Token& y) { return x.norm == y.norm; });
}

std::vector<std::uint8_t> AbsentFromSimple(std::span<const Token> complex,
                                           std::span<const Token> simple,
                                           const MembershipOptions& membership) {
  const auto key = [&](const Token& t) -> const std::string& {
    return membership.case_sensitive ? t.surface : t.norm;
  };
  std::unordered_set<std::string> present;
  for (const auto& t : simple) present.insert(key(t));
  std::vector<std::uint8_t> bits(complex.size());
  for (std::size_t i = 0; i < complex.size(); ++i) {
    bits[i] = present.contains(key(complex[i])) ? 0 : 1;
  }
  return bits;
}

HighlightMask DeriveReferenceMask(const SentencePair& pair,
                                  const MembershipOptions& membership) {
  HighlightMask mask;
  mask.kind = HighlightMask::Kind::kReference;
  mask.bits = AbsentFromSimple(pair.complex, pair.simple, membership);
  return mask;
}

std::vector<LabeledInstance> DeriveLabels(std::span<const SentencePair> pairs,
                                          const MembershipOptions& membership) {
  std::vector<LabeledInstance> out;
  out.reserve(pairs.size() * 2);
  for (const auto& pair : pairs) {
    const bool identical = SameNormSequence(pair.complex, pair.simple);
    LabeledInstance complex;
    complex.tokens = pair.complex;
    complex.label = identical ? 0 : 1;
    complex.origin = {pair.id, Side::kComplex};
    complex.split = pair.split;
    complex.domain = pair.domain;
    complex.ref_mask = DeriveReferenceMask(pair, membership);
    out.push_back(std::move(complex));
    if (identical) continue;

    LabeledInstance simple;
    simple.tokens = pair.simple;
    simple.label = 0;
    simple.origin = {pair.id, Side::kSimple};
    simple.split = pair.split;
    simple.domain = pair.domain;
    out.push_back(std::move(simple));
  }
  return out;
}

std::string InstanceToJson(const LabeledInstance& instance) {
  nlohmann::ordered_json j;
  j["id"] = instance.origin.pair_id;
  j["side"] = SideName(instance.origin.side);
  j["split"] = SplitName(instance.split);
  auto tokens = nlohmann::ordered_json::array();
  for (const auto& t : instance.tokens) tokens.push_back(t.surface);
  j["tokens"] = std::move(tokens);
  j["label"] = instance.label;
  if (instance.ref_mask) {
    j["ref_mask"] = instance.ref_mask->bits;
  } else {
    j["ref_mask"] = nullptr;
  }
  if (instance.domain) {
    j["domain"] = *instance.domain;
  } else {
    j["domain"] = nullptr;
  }
  return j.dump();
}

LabeledInstance InstanceFromJson(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
    LabeledInstance inst;
    inst.origin.pair_id = j.at("id").get<std::int64_t>();
    inst.origin.side = ParseSide(j.at("side").get<std::string>());
    inst.split = ParseSplit(j.value("split", std::string("train")));
    for (const auto& s : j.at("tokens")) inst.tokens.push_back(MakeToken(s.get<std::string>()));
    inst.label = j.at("label").get<int>();
    if (inst.label != 0 && inst.label != 1) {
      throw ValidationError("label must be 0 or 1");
    }
    if (j.contains("ref_mask") && !j["ref_mask"].is_null()) {
      HighlightMask mask;
      mask.kind = HighlightMask::Kind::kReference;
      mask.bits = j["ref_mask"].get<std::vector<std::uint8_t>>();
      if (mask.size() != inst.tokens.size()) {
        throw ValidationError("ref_mask length does not match tokens");
      }
      inst.ref_mask = std::move(mask);
    }
    if (j.contains("domain") && !j["domain"].is_null()) {
      inst.domain = j["domain"].get<std::string>();
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad instance record: ") + e.what());
  }
}

void WriteInstances(std::span<const LabeledInstance> instances,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path.string());
  for (const auto& inst : instances) out << InstanceToJson(inst) << '\n';
  if (!out) throw RuntimeError("write failure on " + path.string());
}

std::vector<LabeledInstance> ReadInstances(const std::filesystem::path& path) {
  std::vector<LabeledInstance> out;
  const auto lines = ReadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      out.push_back(InstanceFromJson(lines[i]));
    } catch (const ValidationError& e) {
      throw ValidationError(Where(path, i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace clens
