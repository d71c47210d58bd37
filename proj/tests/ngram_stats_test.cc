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

#include "pmimask/ngram_stats.h"

#include <sstream>
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
using ::pmimask::testing::BruteForceTotals;
using ::pmimask::testing::RandomWordDocs;
using ::pmimask::testing::WordDocs;

void ExpectMatchesOracle(const NgramCounts& counts, const WordDocs& docs,
                         int max_n, uint64_t min_count) {
  const auto tables = BruteForceCounts(docs, max_n);
  const auto totals = BruteForceTotals(docs, max_n);
  for (int n = 1; n <= max_n; ++n) {
    EXPECT_EQ(counts.total(n), totals[n]) << "n=" << n;
    size_t expected_entries = 0;
    for (const auto& [ngram, c] : tables[n]) {
      const bool kept = n == 1 || c >= min_count;
      expected_entries += kept;
      EXPECT_EQ(counts.Count(ngram), kept ? c : 0);
    }
    EXPECT_EQ(counts.entries(n).size(), expected_entries) << "n=" << n;
  }
}

std::vector<std::string> DocsAsText(const WordDocs& docs) {
  std::vector<std::string> out;
  for (const auto& d : docs) out.push_back(testing::Join(d));
  return out;
}

TEST(CountNgramsTest, SmallExample) {
  const WordDocs docs = {{"a", "b", "a", "b"}, {"b", "a"}};
  const auto counts = CountNgrams(docs, 3);
  EXPECT_EQ(counts.words(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(counts.total(1), 6u);
  EXPECT_EQ(counts.total(2), 4u);
  EXPECT_EQ(counts.total(3), 2u);
  const std::vector<std::string> ab = {"a", "b"}, ba = {"b", "a"};
  EXPECT_EQ(counts.Count(ab), 2u);
  EXPECT_EQ(counts.Count(ba), 2u);
  // Never across the document boundary.
  const std::vector<std::string> bba = {"b", "b", "a"};
  EXPECT_EQ(counts.Count(bba), 0u);
  EXPECT_DOUBLE_EQ(Prob(counts, ab), 0.5);
  const std::vector<std::string> unseen = {"a", "zz"};
  EXPECT_EQ(counts.Count(unseen), 0u);
  EXPECT_FALSE(counts.ToIds(unseen).has_value());
}

TEST(CountNgramsTest, MatchesBruteForceOnRandomCorpora) {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int vocab = 2 + static_cast<int>(rng.UniformInt(19));
    const int words = 1 + static_cast<int>(rng.UniformInt(600));
    const int num_docs = 1 + static_cast<int>(rng.UniformInt(std::min(words, 8)));
    const auto docs = RandomWordDocs(rng, vocab, words, num_docs);
    ExpectMatchesOracle(CountNgrams(docs, 5), docs, 5, 1);
  }
}

TEST(CountCorpusTest, ShardAndThreadInvariance) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto docs = RandomWordDocs(rng, 12, 400, 1 + trial % 9);
    const auto text = DocsAsText(docs);
    const std::vector<std::string_view> views(text.begin(), text.end());
    CountOptions base;
    base.min_count = 1 + trial % 3;
    const auto reference = CountCorpus(views, base);
    ExpectMatchesOracle(reference, docs, 5, base.min_count);
    for (int shards : {2, 3, 8, 16}) {
      for (int threads : {1, 3}) {
        CountOptions o = base;
        o.shards = shards;
        o.threads = threads;
        ASSERT_EQ(CountCorpus(views, o), reference)
            << "shards=" << shards << " threads=" << threads;
      }
    }
  }
}

TEST(CountCorpusTest, LargerVocabularyShardInvariance) {
  std::vector<std::string> text;
  std::string doc;
  for (int i = 0; i < 5000; ++i) {
    if (i) doc.push_back(' ');
    doc += "t" + std::to_string((i * 7919) % 3001);
  }
  text.push_back(doc);
  const std::vector<std::string_view> views(text.begin(), text.end());
  CountOptions o;
  const auto one = CountCorpus(views, o);
  o.shards = 4;
  EXPECT_EQ(CountCorpus(views, o), one);
  EXPECT_EQ(one.total(5), 4996u);
}

TEST(CountCorpusTest, EmptyInputs) {
  const std::vector<std::string_view> none;
  const auto counts = CountCorpus(none, CountOptions{});
  EXPECT_TRUE(counts.words().empty());
  EXPECT_EQ(counts.total(1), 0u);
  const std::vector<std::string> ngram = {"a"};
  EXPECT_THROW(Prob(counts, ngram), InvalidArgumentError);
  CountOptions bad;
  bad.shards = 0;
  EXPECT_THROW(CountCorpus(none, bad), InvalidArgumentError);
}

TEST(CountCorpusTest, PunctuationAndCaseFolding) {
  const std::vector<std::string_view> docs = {"The cat, the CAT."};
  const auto counts = CountCorpus(docs, CountOptions{});
  const std::vector<std::string> the_cat = {"the", "cat"};
  EXPECT_EQ(counts.Count(the_cat), 2u);
  EXPECT_EQ(counts.total(1), 6u);
}

TEST(MergeTest, EqualsCountingTheUnion) {
  Rng rng(31);
  const auto a = RandomWordDocs(rng, 8, 300, 3);
  const auto b = RandomWordDocs(rng, 15, 200, 2);
  WordDocs both = a;
  both.insert(both.end(), b.begin(), b.end());
  EXPECT_EQ(Merge(CountNgrams(a, 4), CountNgrams(b, 4)), CountNgrams(both, 4));
  EXPECT_THROW(Merge(CountNgrams(a, 4), CountNgrams(b, 3)),
               InvalidArgumentError);
}

TEST(PruneTest, KeepsUnigramsAndTotals) {
  Rng rng(37);
  const auto docs = RandomWordDocs(rng, 6, 500, 4);
  const auto pruned = Prune(CountNgrams(docs, 4), 5);
  EXPECT_EQ(pruned.min_count(), 5u);
  ExpectMatchesOracle(pruned, docs, 4, 5);
  EXPECT_THROW(Prune(pruned, 0), InvalidArgumentError);
}

TEST(CountsIoTest, RoundTripsBothFormats) {
  Rng rng(41);
  const auto counts = Prune(CountNgrams(RandomWordDocs(rng, 10, 300, 3), 5), 2);
  for (auto format : {CountsFormat::kText, CountsFormat::kBinary}) {
    std::stringstream buffer;
    WriteCounts(counts, buffer, format);
    EXPECT_EQ(ReadCounts(buffer), counts);
  }
}

TEST(CountsIoTest, TextFormatLayout) {
  const auto counts = CountNgrams({{"b", "a", "b"}}, 2);
  std::stringstream out;
  WriteCounts(counts, out, CountsFormat::kText);
  EXPECT_EQ(out.str(),
            "# pmimask-counts v1\n# max_n\t2\n# min_count\t1\n"
            "# total\t1\t3\n# total\t2\t2\n"
            "1\ta\t1\n1\tb\t2\n2\ta b\t1\n2\tb a\t1\n");
}

TEST(CountsIoTest, RejectsMalformedInput) {
  for (const char* bad :
       {"", "garbage\n", "# pmimask-counts v1\n# max_n\t9\n",
        "# pmimask-counts v1\n# max_n\t2\n1\ta\n",
        "# pmimask-counts v1\n# max_n\t2\n# total\t1\t1\n2\ta\t1\n",
        "# pmimask-counts v1\n# max_n\t2\n# total\t1\t1\n1\ta\tx\n",
        "# pmimask-counts v1\n# max_n\t2\n# total\t1\t1\n1\ta\t5\n",
        "PMICNT01\x02"}) {
    std::stringstream in{std::string(bad)};
    EXPECT_THROW(ReadCounts(in), FormatError) << bad;
  }
}

TEST(NgramCountsBuilderTest, ValidatesInput) {
  {
    NgramCountsBuilder b(2, {"b", "a"});
    EXPECT_THROW(std::move(b).Build(), FormatError);
  }
  {
    NgramCountsBuilder b(2, {"a", "b"});
    b.set_total(1, 1);
    b.entries(1).push_back(NgramEntry{NgramKey{{5}}, 1});
    EXPECT_THROW(std::move(b).Build(), FormatError);
  }
  {
    NgramCountsBuilder b(2, {"a", "b"});
    b.set_total(1, 10);
    b.entries(1).push_back(NgramEntry{NgramKey{{1}}, 1});
    b.entries(1).push_back(NgramEntry{NgramKey{{0}}, 1});
    EXPECT_THROW(std::move(b).Build(), FormatError);
  }
  EXPECT_THROW(NgramCounts(0), InvalidArgumentError);
  EXPECT_THROW(NgramCounts(6), InvalidArgumentError);
}

}  // namespace
}  // namespace pmimask
