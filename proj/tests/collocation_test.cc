// Copyright 2026 The pmimask Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pmimask/collocation.h"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pmimask/error.h"
#include "pmimask/rng.h"
#include "testing/oracles.h"
#include "testing/synthetic_corpus.h"

namespace pmimask {
namespace {

using ::pmimask::testing::BruteForceCounts;
using ::pmimask::testing::BruteForcePmi;
using ::pmimask::testing::RandomWordDocs;
using ::pmimask::testing::WordDocs;

std::vector<int> PartLengths(const Segmentation& s) {
  std::vector<int> out;
  for (const auto& [b, e] : s.parts()) out.push_back(e - b);
  return out;
}

TEST(SegmentationTest, EnumerationOrderAndCount) {
  const auto three = EnumerateSegmentations(3);
  const std::vector<std::string> w = {"a", "b", "c"};
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(three[0].Render(w), "[a][b][c]");
  EXPECT_EQ(three[1].Render(w), "[a b][c]");
  EXPECT_EQ(three[2].Render(w), "[a][b c]");
  for (int n = 2; n <= 5; ++n) {
    const auto segs = EnumerateSegmentations(n);
    EXPECT_EQ(segs.size(), (1u << (n - 1)) - 1);
    EXPECT_EQ(segs.front().num_parts(), n);
    for (const auto& s : segs) EXPECT_GE(s.num_parts(), 2);
  }
  EXPECT_THROW(EnumerateSegmentations(1), InvalidArgumentError);
  EXPECT_THROW(EnumerateSegmentations(6), InvalidArgumentError);
  EXPECT_THROW(Segmentation(3, 0), InvalidArgumentError);
  EXPECT_EQ(Segmentation(4, 0b010).part_ends(), (std::vector<int>{2, 4}));
}

// Every composition of n into >= 2 parts appears exactly once.
TEST(SegmentationTest, MatchesCompositions) {
  for (int n = 2; n <= 5; ++n) {
    auto expected = testing::Compositions(n);
    std::vector<std::vector<int>> actual;
    for (const auto& s : EnumerateSegmentations(n)) actual.push_back(PartLengths(s));
    std::sort(expected.begin(), expected.end());
    std::sort(actual.begin(), actual.end());
    EXPECT_EQ(actual, expected);
  }
}

TEST(Pmi2Test, IndependentPairScoresZero) {
  const WordDocs docs = {{"a", "b"}, {"b", "a"}, {"a", "a"}, {"b", "b"}};
  const auto counts = CountNgrams(docs, 2);
  EXPECT_NEAR(Pmi2(counts, "a", "b"), 0.0, 1e-12);
}

TEST(Pmi2Test, HandComputedValue) {
  // p(a b) = 2/5, p(a) = 3/6, p(b) = 2/6.
  const WordDocs docs = {{"a", "b", "a", "b", "a", "c"}};
  const auto counts = CountNgrams(docs, 2);
  EXPECT_NEAR(Pmi2(counts, "a", "b"), std::log((2.0 / 5) / (0.5 * (2.0 / 6))),
              1e-12);
  EXPECT_THROW(Pmi2(counts, "a", "zz"), InvalidArgumentError);
  EXPECT_THROW(Pmi2(counts, "b", "c"), InvalidArgumentError);
}

TEST(PmiNTest, TrigramArgminOnHandBuiltCorpus) {
  WordDocs docs(1);
  for (int i = 0; i < 4; ++i) {
    for (const char* w : {"a", "b", "c", "c", "c", "a", "b", "x", "c", "c"}) {
      docs[0].push_back(w);
    }
  }
  const auto counts = CountNgrams(docs, 3);
  const std::vector<std::string> abc = {"a", "b", "c"};
  const auto s = PmiN(counts, abc);
  EXPECT_EQ(s.count, 4u);
  EXPECT_EQ(s.argmin_segmentation.Render(abc), "[a b][c]");
  // p(abc) = 4/38, p(ab) = 8/39, p(c) = 20/40.
  EXPECT_NEAR(s.pmi_n, std::log((4.0 / 38) / ((8.0 / 39) * 0.5)), 1e-12);
  const double naive = std::log((4.0 / 38) / (0.2 * 0.2 * 0.5));
  EXPECT_NEAR(s.naive_pmi, naive, 1e-12);
  EXPECT_NEAR(NaivePmiN(counts, abc), naive, 1e-12);
}

TEST(PmiNTest, MatchesBruteForceOracle) {
  Rng rng(101);
  for (int trial = 0; trial < 15; ++trial) {
    const auto docs = RandomWordDocs(rng, 2 + trial % 10, 200 + 30 * trial,
                                     1 + trial % 4);
    const auto counts = CountNgrams(docs, 5);
    const CollocationScorer scorer(counts);
    const auto tables = BruteForceCounts(docs, 5);
    for (int n = 2; n <= 5; ++n) {
      for (const auto& [ngram, c] : tables[n]) {
        const auto oracle = BruteForcePmi(docs, ngram);
        const auto s = PmiN(counts, ngram);
        ASSERT_NEAR(s.pmi_n, oracle.pmi_n, 1e-9);
        ASSERT_NEAR(s.naive_pmi, oracle.naive_pmi, 1e-9);
        ASSERT_LE(s.pmi_n, s.naive_pmi);
        if (n == 2) ASSERT_EQ(s.pmi_n, s.naive_pmi);
        ASSERT_EQ(s.count, c);
      }
    }
  }
}

TEST(PmiNTest, ArgminTiesGoToFirstEnumerated) {
  // All unigrams, bigrams equally likely: every segmentation of "a a a"
  // scores the same.
  const WordDocs docs = {{"a", "a", "a", "a", "a"}};
  const auto counts = CountNgrams(docs, 3);
  const std::vector<std::string> aaa = {"a", "a", "a"};
  const auto s = PmiN(counts, aaa);
  EXPECT_EQ(s.argmin_segmentation.cuts(), 0b11u);
  EXPECT_NEAR(s.pmi_n, 0.0, 1e-12);
}

TEST(CollocationScorerTest, RejectsBadInput) {
  const auto counts = CountNgrams({{"a", "b", "c"}}, 3);
  const CollocationScorer scorer(counts);
  const std::vector<WordId> one = {0};
  EXPECT_THROW(scorer.Score(one), InvalidArgumentError);
  const std::vector<WordId> unseen = {2, 0};
  EXPECT_THROW(scorer.Score(unseen), InvalidArgumentError);
  const std::vector<WordId> four = {0, 1, 2, 0};
  EXPECT_THROW(scorer.Score(four), InvalidArgumentError);
}

}  // namespace
}  // namespace pmimask
