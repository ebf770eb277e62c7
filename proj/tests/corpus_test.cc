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

#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "clens/error.h"
#include "synthetic.h"

namespace clens {
namespace {

using testing::ScratchDir;
using testing::Tokens;

std::vector<std::string> Surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

void Write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

SentencePair Pair(std::vector<Token> complex, std::vector<Token> simple) {
  SentencePair p;
  p.complex = std::move(complex);
  p.simple = std::move(simple);
  return p;
}

TEST(TokenizeTest, WhitespaceModeKeepsPretokenizedText) {
  const auto tokens = Tokenize(
      "Their fatigue changes their voices , but they 're still on the freedom highway .");
  ASSERT_EQ(tokens.size(), 15u);
  EXPECT_EQ(tokens[5].surface, ",");
  EXPECT_EQ(tokens[8].surface, "'re");
  EXPECT_EQ(tokens[0].norm, "their");
}

TEST(TokenizeTest, EmptyInput) {
  EXPECT_TRUE(Tokenize("").empty());
  EXPECT_TRUE(Tokenize("   \t ").empty());
}

TEST(TokenizeTest, PunctModeSplitsLeadingAndTrailingMarks) {
  EXPECT_EQ(Surfaces(Tokenize("Hello, world!", TokenizeMode::kWhitespacePunct)),
            (std::vector<std::string>{"Hello", ",", "world", "!"}));
  EXPECT_EQ(Surfaces(Tokenize("(see \"this\")...", TokenizeMode::kWhitespacePunct)),
            (std::vector<std::string>{"(", "see", "\"", "this", "\"", ")", ".", ".", "."}));
  EXPECT_EQ(Surfaces(Tokenize("well-known -- ok", TokenizeMode::kWhitespacePunct)),
            (std::vector<std::string>{"well-known", "--", "ok"}));
}

TEST(TokenizeTest, NormIsLowercasedSurface) {
  for (const auto& t : Tokenize("MiXeD CASE words")) {
    std::string lower = t.surface;
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    EXPECT_EQ(t.norm, lower);
  }
}

TEST(TokenizeTest, IdempotentOnJoinedTokens) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> alphabet{"a", "Bb", ",", "c.", "'s", "--", "X"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const auto n = rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
      text += std::string(rng() % 3, ' ') + alphabet[rng() % alphabet.size()] + " ";
    }
    const auto tokens = Tokenize(text);
    EXPECT_EQ(Tokenize(JoinSurfaces(tokens)), tokens);
  }
}

TEST(LoadCorpusTest, TsvIdenticalPair) {
  const auto dir = ScratchDir("tsv");
  Write(dir / "c.tsv", "The cat sat .\tThe cat sat .\n");
  const auto pairs = LoadParallelCorpus({dir / "c.tsv"});
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].id, 0);
  EXPECT_EQ(pairs[0].complex, pairs[0].simple);
}

TEST(LoadCorpusTest, TwoFileAssignsSequentialIds) {
  const auto dir = ScratchDir("two");
  Write(dir / "c.complex", "a b\nc d\ne f\n");
  Write(dir / "c.simple", "a\nc\ne\n");
  const auto pairs = LoadParallelCorpus({dir / "c", CorpusFormat::kTwoFile});
  ASSERT_EQ(pairs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(pairs[i].id, static_cast<std::int64_t>(i));
  EXPECT_EQ(pairs[2].complex[1].surface, "f");
}

TEST(LoadCorpusTest, TwoFileLineCountMismatch) {
  const auto dir = ScratchDir("mismatch");
  Write(dir / "c.complex", "a\nb\nc\n");
  Write(dir / "c.simple", "a\nb\n");
  EXPECT_THROW(LoadParallelCorpus({dir / "c", CorpusFormat::kTwoFile}), ValidationError);
}

TEST(LoadCorpusTest, TsvTabCountAndEmptySides) {
  const auto dir = ScratchDir("tabs");
  Write(dir / "none.tsv", "no tab here\n");
  Write(dir / "two.tsv", "a\tb\tc\n");
  Write(dir / "empty.tsv", "a b\t  \n");
  EXPECT_THROW(LoadParallelCorpus({dir / "none.tsv"}), ValidationError);
  EXPECT_THROW(LoadParallelCorpus({dir / "two.tsv"}), ValidationError);
  EXPECT_THROW(LoadParallelCorpus({dir / "empty.tsv"}), ValidationError);
  EXPECT_THROW(LoadParallelCorpus({dir / "missing.tsv"}), ValidationError);
}

TEST(LoadCorpusTest, DomainSidecar) {
  const auto dir = ScratchDir("domain");
  Write(dir / "c.tsv", "a b\ta\nc d\tc\n");
  Write(dir / "c.tsv.domain", "news\n\n");
  const auto pairs = LoadParallelCorpus({dir / "c.tsv"});
  EXPECT_EQ(pairs[0].domain, "news");
  EXPECT_FALSE(pairs[1].domain.has_value());
  Write(dir / "c.tsv.domain", "news\n");
  EXPECT_THROW(LoadParallelCorpus({dir / "c.tsv"}), ValidationError);
}

TEST(LoadCorpusTest, SerializeAndReloadRoundTrips) {
  const auto dir = ScratchDir("roundtrip");
  const auto path = testing::WriteSyntheticCorpus(dir, "syn", {.pairs = 50, .seed = 11});
  const auto first = LoadParallelCorpus({path});
  WriteTsvCorpus(first, dir / "again.tsv");
  const auto second = LoadParallelCorpus({dir / "again.tsv"});
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].id, second[i].id);
    EXPECT_EQ(first[i].complex, second[i].complex);
    EXPECT_EQ(first[i].simple, second[i].simple);
  }
}

TEST(DeriveLabelsTest, NonIdenticalPairYieldsBothSides) {
  const auto out = DeriveLabels(std::vector{Pair(Tokens({"a", "big", "dog"}), Tokens({"a", "dog"}))});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].label, 1);
  EXPECT_EQ(out[0].origin.side, Side::kComplex);
  EXPECT_EQ(out[1].label, 0);
  EXPECT_EQ(out[1].origin.side, Side::kSimple);
  EXPECT_EQ(Surfaces(out[1].tokens), (std::vector<std::string>{"a", "dog"}));
}

TEST(DeriveLabelsTest, IdenticalPairYieldsOneNegative) {
  const auto out = DeriveLabels(std::vector{Pair(Tokens({"The", "dog"}), Tokens({"the", "dog"}))});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].label, 0);
  EXPECT_EQ(out[0].origin.side, Side::kComplex);
  EXPECT_TRUE(out[0].ref_mask->AllZero());
}

TEST(DeriveLabelsTest, EmptyCorpus) {
  EXPECT_TRUE(DeriveLabels(std::vector<SentencePair>{}).empty());
}

TEST(DeriveLabelsTest, CountsMatchNonIdenticalPairs) {
  const auto pairs = testing::MakeSyntheticPairs({.pairs = 300, .seed = 5, .identical_rate = 0.3});
  const auto out = DeriveLabels(pairs);
  std::size_t non_identical = 0;
  for (const auto& p : pairs) non_identical += !SameNormSequence(p.complex, p.simple);
  std::size_t positives = 0;
  for (const auto& inst : out) positives += inst.label == 1;
  EXPECT_EQ(positives, non_identical);
  EXPECT_EQ(out.size(), pairs.size() + non_identical);
  // Pair order is preserved.
  for (std::size_t i = 1; i < out.size(); ++i) {
    EXPECT_LE(out[i - 1].origin.pair_id, out[i].origin.pair_id);
  }
}

TEST(ReferenceMaskTest, MembershipRule) {
  const auto mask = DeriveReferenceMask(Pair(Tokens({"a", "b", "c"}), Tokens({"a", "c"})));
  EXPECT_EQ(mask.bits, (std::vector<std::uint8_t>{0, 1, 0}));
  EXPECT_EQ(mask.kind, HighlightMask::Kind::kReference);
  EXPECT_TRUE(DeriveReferenceMask(Pair(Tokens({"x", "y"}), Tokens({"x", "y"}))).AllZero());
}

TEST(ReferenceMaskTest, PretokenizedNewsPair) {
  SentencePair pair;
  pair.complex = Tokenize("Their fatigue changes their voices , but they 're still on the freedom highway .");
  pair.simple = Tokenize("Still , they are fighting for their rights .");
  const auto mask = DeriveReferenceMask(pair);
  // Hand-applied rule: highlighted = {fatigue, changes, voices, but, 're, on,
  // the, freedom, highway}.
  EXPECT_EQ(mask.bits,
            (std::vector<std::uint8_t>{0, 1, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 0}));
}

TEST(ReferenceMaskTest, CaseSensitivityKnob) {
  const auto pair = Pair(Tokens({"Still", "here"}), Tokens({"still", "here"}));
  EXPECT_TRUE(DeriveReferenceMask(pair).AllZero());
  EXPECT_EQ(DeriveReferenceMask(pair, {.case_sensitive = true}).bits,
            (std::vector<std::uint8_t>{1, 0}));
}

TEST(ReferenceMaskTest, LengthAndAllZeroProperty) {
  for (const auto& pair : testing::MakeSyntheticPairs({.pairs = 200, .seed = 9})) {
    const auto mask = DeriveReferenceMask(pair);
    ASSERT_EQ(mask.size(), pair.complex.size());
    bool all_present = true;
    for (const auto& t : pair.complex) {
      bool found = false;
      for (const auto& s : pair.simple) found |= s.norm == t.norm;
      all_present &= found;
    }
    EXPECT_EQ(mask.AllZero(), all_present);
  }
}

TEST(InstancesJsonTest, RoundTrip) {
  auto pairs = testing::MakeSyntheticPairs({.pairs = 20, .seed = 2, .domains = 2});
  pairs[3].split = Split::kTest;
  const auto instances = DeriveLabels(pairs);
  const auto dir = ScratchDir("jsonl");
  WriteInstances(instances, dir / "i.jsonl");
  const auto back = ReadInstances(dir / "i.jsonl");
  ASSERT_EQ(back.size(), instances.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].tokens, instances[i].tokens);
    EXPECT_EQ(back[i].label, instances[i].label);
    EXPECT_EQ(back[i].origin.pair_id, instances[i].origin.pair_id);
    EXPECT_EQ(back[i].origin.side, instances[i].origin.side);
    EXPECT_EQ(back[i].split, instances[i].split);
    EXPECT_EQ(back[i].domain, instances[i].domain);
    EXPECT_EQ(back[i].ref_mask.has_value(), instances[i].ref_mask.has_value());
    if (back[i].ref_mask) EXPECT_EQ(back[i].ref_mask->bits, instances[i].ref_mask->bits);
  }
  const auto line = InstanceToJson(instances[0]);
  for (const char* key : {"\"id\"", "\"side\"", "\"tokens\"", "\"label\"", "\"ref_mask\"", "\"domain\""}) {
    EXPECT_NE(line.find(key), std::string::npos) << key;
  }
}

TEST(InstancesJsonTest, RejectsBadRecords) {
  EXPECT_THROW(InstanceFromJson("{\"id\":0}"), ValidationError);
  EXPECT_THROW(InstanceFromJson(
                   R"({"id":0,"side":"complex","tokens":["a"],"label":2,"ref_mask":null,"domain":null})"),
               ValidationError);
  EXPECT_THROW(InstanceFromJson(
                   R"({"id":0,"side":"complex","tokens":["a"],"label":1,"ref_mask":[1,0],"domain":null})"),
               ValidationError);
}

}  // namespace
}  // namespace clens
