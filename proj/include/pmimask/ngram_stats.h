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

#ifndef PMIMASK_NGRAM_STATS_H_
#define PMIMASK_NGRAM_STATS_H_

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmimask/tokenizer.h"

namespace pmimask {

inline constexpr int kMaxNgramOrder = 5;

using WordId = uint32_t;

// Word ids of an n-gram; slots past n are zero.
struct NgramKey {
  std::array<WordId, kMaxNgramOrder> ids{};

  friend auto operator<=>(const NgramKey&, const NgramKey&) = default;
};

struct NgramEntry {
  NgramKey key;
  uint64_t count = 0;

  friend bool operator==(const NgramEntry&, const NgramEntry&) = default;
};

// Exact word n-gram counts for n = 1..max_n, with the number of length-n
// positions per length. Word ids index `words()`, which is sorted bytewise,
// so ordering keys by id is the same as ordering n-grams lexicographically.
class NgramCounts {
 public:
  NgramCounts() : NgramCounts(kMaxNgramOrder) {}
  explicit NgramCounts(int max_n);

  int max_n() const { return max_n_; }
  // Smallest count retained for n >= 2 (1 means unpruned).
  uint64_t min_count() const { return min_count_; }
  uint64_t total(int n) const { return totals_.at(n - 1); }

  const std::vector<std::string>& words() const { return words_; }
  // Entries of length n sorted by key.
  const std::vector<NgramEntry>& entries(int n) const {
    return entries_.at(n - 1);
  }

  std::optional<WordId> word_id(std::string_view word) const;
  // Ids for a word sequence, or nullopt if any word was never seen.
  std::optional<std::vector<WordId>> ToIds(
      std::span<const std::string> ngram) const;

  uint64_t Count(std::span<const WordId> ngram) const;
  uint64_t Count(std::span<const std::string> ngram) const;

  std::vector<std::string> ToWords(const NgramKey& key, int n) const;
  std::string Join(const NgramKey& key, int n) const;

  friend bool operator==(const NgramCounts&, const NgramCounts&) = default;

 private:
  friend class NgramCountsBuilder;

  int max_n_;
  uint64_t min_count_ = 1;
  std::vector<std::string> words_;
  std::array<uint64_t, kMaxNgramOrder> totals_{};
  std::array<std::vector<NgramEntry>, kMaxNgramOrder> entries_;
};

// Low-level construction used by the counters and file readers. Validates
// sortedness and id ranges in Build().
class NgramCountsBuilder {
 public:
  NgramCountsBuilder(int max_n, std::vector<std::string> sorted_words);

  void set_total(int n, uint64_t total);
  void set_min_count(uint64_t min_count);
  std::vector<NgramEntry>& entries(int n);
  NgramCounts Build() &&;

 private:
  NgramCounts counts_;
};

struct CountOptions {
  int max_n = kMaxNgramOrder;
  // Applied while merging shards; 1 keeps exact counts.
  uint64_t min_count = 1;
  int shards = 1;
  int threads = 1;
  PreTokenizerOptions pretokenizer;
};

// Exact counts for documents given as word lists. N-grams never cross
// document boundaries.
NgramCounts CountNgrams(const std::vector<std::vector<std::string>>& documents,
                        int max_n = kMaxNgramOrder);

// Pre-tokenizes raw documents and counts them in `shards` independent
// partitions that are merged length by length, pruning as entries are
// emitted. The result does not depend on shards or threads.
NgramCounts CountCorpus(std::span<const std::string_view> documents,
                        const CountOptions& options);

// Pointwise sum of counts and totals. Throws InvalidArgumentError on
// mismatched max_n.
NgramCounts Merge(const NgramCounts& left, const NgramCounts& right);

// Drops entries with n >= 2 and count < min_count. Unigrams and totals are
// left intact so probabilities stay consistent.
NgramCounts Prune(NgramCounts counts, uint64_t min_count);

// count(ngram) / total_n; 0 for unseen n-grams.
double Prob(const NgramCounts& counts, std::span<const std::string> ngram);

// Counts files. The text form is
//   # pmimask-counts v1
//   # max_n <TAB> 5
//   # min_count <TAB> 1
//   # total <TAB> n <TAB> total_n        (one per length)
//   n <TAB> w1 ... wn <TAB> count         (sorted by n, then words)
// The binary form starts with the magic "PMICNT01"; see ngram_io.cc.
enum class CountsFormat { kText, kBinary };

void WriteCounts(const NgramCounts& counts, std::ostream& out,
                 CountsFormat format);
void WriteCountsFile(const NgramCounts& counts, const std::string& path,
                     CountsFormat format);
// Detects the format from the leading bytes.
NgramCounts ReadCounts(std::istream& in);
NgramCounts ReadCountsFile(const std::string& path);

}  // namespace pmimask

#endif  // PMIMASK_NGRAM_STATS_H_
