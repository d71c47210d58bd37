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

#include <algorithm>
#include <bit>
#include <queue>
#include <unordered_map>

#include "pmimask/error.h"
#include "pmimask/parallel.h"
#include "pmimask/string_util.h"

namespace pmimask {

namespace {

void CheckOrder(int n, int max_n) {
  if (n < 1 || n > max_n) {
    throw InvalidArgumentError("n-gram length " + std::to_string(n) +
                               " outside [1, " + std::to_string(max_n) + "]");
  }
}

// Word ids of a contiguous block of documents.
struct Shard {
  std::vector<WordId> ids;
  std::vector<size_t> doc_ends;
  std::vector<std::string> local_words;
};

using InternMap =
    std::unordered_map<std::string, WordId, StringHash, std::equal_to<>>;

WordId Intern(InternMap& map, Shard& shard, std::string_view word) {
  auto it = map.find(word);
  if (it != map.end()) return it->second;
  const auto id = static_cast<WordId>(shard.local_words.size());
  shard.local_words.emplace_back(word);
  map.emplace(std::string(word), id);
  return id;
}

Shard TokenizeShard(std::span<const std::string_view> docs,
                    const PreTokenizer& pretokenizer) {
  Shard shard;
  InternMap map;
  size_t bytes = 0;
  for (auto d : docs) bytes += d.size();
  shard.ids.reserve(bytes / 5);
  for (auto doc : docs) {
    pretokenizer.ForEachWord(doc, [&](std::string_view w) {
      shard.ids.push_back(Intern(map, shard, w));
    });
    shard.doc_ends.push_back(shard.ids.size());
  }
  return shard;
}

Shard ShardFromWords(const std::vector<std::vector<std::string>>& docs) {
  Shard shard;
  InternMap map;
  for (const auto& doc : docs) {
    for (const auto& w : doc) shard.ids.push_back(Intern(map, shard, w));
    shard.doc_ends.push_back(shard.ids.size());
  }
  return shard;
}

std::vector<std::string> UnionDictionary(const std::vector<Shard>& shards) {
  std::vector<std::string> dict;
  for (const auto& s : shards) {
    dict.insert(dict.end(), s.local_words.begin(), s.local_words.end());
  }
  std::sort(dict.begin(), dict.end());
  dict.erase(std::unique(dict.begin(), dict.end()), dict.end());
  return dict;
}

// Maps each id in `from` to its index in the sorted superset `to`.
std::vector<WordId> RemapTable(const std::vector<std::string>& from,
                               const std::vector<std::string>& to) {
  std::vector<WordId> table(from.size());
  for (size_t i = 0; i < from.size(); ++i) {
    const auto it = std::lower_bound(to.begin(), to.end(), from[i]);
    table[i] = static_cast<WordId>(it - to.begin());
  }
  return table;
}

void RemapShard(Shard& shard, const std::vector<std::string>& dict) {
  const auto table = RemapTable(shard.local_words, dict);
  for (auto& id : shard.ids) id = table[id];
  shard.local_words.clear();
  shard.local_words.shrink_to_fit();
}

template <typename Fn>
void ForEachWindow(const Shard& shard, int n, Fn&& fn) {
  size_t begin = 0;
  for (const size_t end : shard.doc_ends) {
    if (end - begin >= static_cast<size_t>(n)) {
      for (size_t i = begin; i + n <= end; ++i) fn(&shard.ids[i]);
    }
    begin = end;
  }
}

uint64_t Positions(const Shard& shard, int n) {
  uint64_t total = 0;
  size_t begin = 0;
  for (const size_t end : shard.doc_ends) {
    if (end - begin >= static_cast<size_t>(n)) total += end - begin - n + 1;
    begin = end;
  }
  return total;
}

// Sorted, run-length encoded n-grams of one shard; entries below
// `min_count` are dropped on emission.
std::vector<NgramEntry> SortedRun(const Shard& shard, int n,
                                  size_t vocab_size, uint64_t min_count) {
  std::vector<NgramEntry> run;
  if (n == 1) {
    std::vector<uint64_t> counts(vocab_size, 0);
    for (const WordId id : shard.ids) ++counts[id];
    for (size_t id = 0; id < vocab_size; ++id) {
      if (counts[id] >= std::max<uint64_t>(1, min_count)) {
        NgramEntry e;
        e.key.ids[0] = static_cast<WordId>(id);
        e.count = counts[id];
        run.push_back(e);
      }
    }
    return run;
  }
  const int bits = std::max(
      1, static_cast<int>(std::bit_width(std::max<size_t>(2, vocab_size) - 1)));
  auto emit = [&](const NgramKey& key, uint64_t count) {
    if (count >= min_count) run.push_back(NgramEntry{key, count});
  };
  if (bits * n <= 128) {
    // Packed keys: first word in the most significant bits, so integer order
    // equals lexicographic id order.
    using Packed = unsigned __int128;
    std::vector<Packed> keys;
    keys.reserve(Positions(shard, n));
    ForEachWindow(shard, n, [&](const WordId* w) {
      Packed k = 0;
      for (int j = 0; j < n; ++j) k = (k << bits) | w[j];
      keys.push_back(k);
    });
    std::sort(keys.begin(), keys.end());
    const Packed mask = (Packed(1) << bits) - 1;
    for (size_t i = 0; i < keys.size();) {
      size_t j = i + 1;
      while (j < keys.size() && keys[j] == keys[i]) ++j;
      NgramKey key;
      Packed k = keys[i];
      for (int p = n - 1; p >= 0; --p) {
        key.ids[p] = static_cast<WordId>(k & mask);
        k >>= bits;
      }
      emit(key, j - i);
      i = j;
    }
    return run;
  }
  std::vector<NgramKey> keys;
  keys.reserve(Positions(shard, n));
  ForEachWindow(shard, n, [&](const WordId* w) {
    NgramKey k;
    std::copy(w, w + n, k.ids.begin());
    keys.push_back(k);
  });
  std::sort(keys.begin(), keys.end());
  for (size_t i = 0; i < keys.size();) {
    size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    emit(keys[i], j - i);
    i = j;
  }
  return run;
}

// K-way merge of sorted runs, summing equal keys.
std::vector<NgramEntry> MergeRuns(std::vector<std::vector<NgramEntry>> runs,
                                  uint64_t min_count) {
  if (runs.size() == 1) {
    auto& run = runs.front();
    std::erase_if(run, [&](const NgramEntry& e) { return e.count < min_count; });
    return std::move(run);
  }
  using Cursor = std::pair<size_t, size_t>;  // (run, index)
  auto greater = [&](const Cursor& a, const Cursor& b) {
    return runs[b.first][b.second].key < runs[a.first][a.second].key;
  };
  std::priority_queue<Cursor, std::vector<Cursor>, decltype(greater)> heap(
      greater);
  for (size_t r = 0; r < runs.size(); ++r) {
    if (!runs[r].empty()) heap.push({r, 0});
  }
  std::vector<NgramEntry> out;
  while (!heap.empty()) {
    auto [r, i] = heap.top();
    heap.pop();
    NgramEntry acc = runs[r][i];
    if (i + 1 < runs[r].size()) heap.push({r, i + 1});
    while (!heap.empty()) {
      auto [r2, i2] = heap.top();
      if (!(runs[r2][i2].key == acc.key)) break;
      heap.pop();
      acc.count += runs[r2][i2].count;
      if (i2 + 1 < runs[r2].size()) heap.push({r2, i2 + 1});
    }
    if (acc.count >= min_count) out.push_back(acc);
  }
  return out;
}

NgramCounts CountShards(std::vector<Shard> shards, int max_n,
                        uint64_t min_count, int threads) {
  CheckOrder(max_n, kMaxNgramOrder);
  if (min_count < 1) throw InvalidArgumentError("min_count must be >= 1");
  std::vector<std::string> dict = UnionDictionary(shards);
  ParallelFor(shards.size(), threads,
              [&](size_t s) { RemapShard(shards[s], dict); });
  NgramCountsBuilder builder(max_n, dict);
  builder.set_min_count(min_count);
  const bool single = shards.size() == 1;
  for (int n = 1; n <= max_n; ++n) {
    const uint64_t threshold = n == 1 ? 1 : min_count;
    uint64_t total = 0;
    for (const auto& s : shards) total += Positions(s, n);
    builder.set_total(n, total);
    std::vector<std::vector<NgramEntry>> runs(shards.size());
    ParallelFor(shards.size(), threads, [&](size_t s) {
      runs[s] = SortedRun(shards[s], n, dict.size(), single ? threshold : 1);
    });
    builder.entries(n) = MergeRuns(std::move(runs), threshold);
  }
  return std::move(builder).Build();
}

const NgramEntry* FindEntry(const std::vector<NgramEntry>& entries,
                            const NgramKey& key) {
  const auto it = std::lower_bound(
      entries.begin(), entries.end(), key,
      [](const NgramEntry& e, const NgramKey& k) { return e.key < k; });
  if (it == entries.end() || !(it->key == key)) return nullptr;
  return &*it;
}

}  // namespace

NgramCounts::NgramCounts(int max_n) : max_n_(max_n) {
  CheckOrder(max_n, kMaxNgramOrder);
}

std::optional<WordId> NgramCounts::word_id(std::string_view word) const {
  const auto it = std::lower_bound(words_.begin(), words_.end(), word);
  if (it == words_.end() || *it != word) return std::nullopt;
  return static_cast<WordId>(it - words_.begin());
}

std::optional<std::vector<WordId>> NgramCounts::ToIds(
    std::span<const std::string> ngram) const {
  std::vector<WordId> ids;
  ids.reserve(ngram.size());
  for (const auto& w : ngram) {
    const auto id = word_id(w);
    if (!id) return std::nullopt;
    ids.push_back(*id);
  }
  return ids;
}

uint64_t NgramCounts::Count(std::span<const WordId> ngram) const {
  const int n = static_cast<int>(ngram.size());
  CheckOrder(n, max_n_);
  NgramKey key;
  std::copy(ngram.begin(), ngram.end(), key.ids.begin());
  const NgramEntry* e = FindEntry(entries_[n - 1], key);
  return e ? e->count : 0;
}

uint64_t NgramCounts::Count(std::span<const std::string> ngram) const {
  CheckOrder(static_cast<int>(ngram.size()), max_n_);
  const auto ids = ToIds(ngram);
  return ids ? Count(*ids) : 0;
}

std::vector<std::string> NgramCounts::ToWords(const NgramKey& key,
                                              int n) const {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(words_.at(key.ids[i]));
  return out;
}

std::string NgramCounts::Join(const NgramKey& key, int n) const {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out.push_back(' ');
    out += words_.at(key.ids[i]);
  }
  return out;
}

NgramCountsBuilder::NgramCountsBuilder(int max_n,
                                       std::vector<std::string> sorted_words)
    : counts_(max_n) {
  counts_.words_ = std::move(sorted_words);
}

void NgramCountsBuilder::set_total(int n, uint64_t total) {
  CheckOrder(n, counts_.max_n_);
  counts_.totals_[n - 1] = total;
}

void NgramCountsBuilder::set_min_count(uint64_t min_count) {
  counts_.min_count_ = min_count;
}

std::vector<NgramEntry>& NgramCountsBuilder::entries(int n) {
  CheckOrder(n, counts_.max_n_);
  return counts_.entries_[n - 1];
}

NgramCounts NgramCountsBuilder::Build() && {
  const auto& words = counts_.words_;
  for (size_t i = 1; i < words.size(); ++i) {
    if (!(words[i - 1] < words[i])) {
      throw FormatError("word list not strictly sorted at '" + words[i] + "'");
    }
  }
  for (int n = 1; n <= counts_.max_n_; ++n) {
    const auto& entries = counts_.entries_[n - 1];
    uint64_t sum = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      if (e.count == 0) throw FormatError("zero count entry");
      for (int j = 0; j < kMaxNgramOrder; ++j) {
        if (j < n ? e.key.ids[j] >= words.size() : e.key.ids[j] != 0) {
          throw FormatError("n-gram key out of range");
        }
      }
      if (i > 0 && !(entries[i - 1].key < e.key)) {
        throw FormatError("n-gram entries not strictly sorted for n=" +
                          std::to_string(n));
      }
      sum += e.count;
    }
    if (sum > counts_.totals_[n - 1]) {
      throw FormatError("counts exceed total for n=" + std::to_string(n));
    }
  }
  return std::move(counts_);
}

NgramCounts CountNgrams(const std::vector<std::vector<std::string>>& documents,
                        int max_n) {
  std::vector<Shard> shards;
  shards.push_back(ShardFromWords(documents));
  return CountShards(std::move(shards), max_n, 1, 1);
}

NgramCounts CountCorpus(std::span<const std::string_view> documents,
                        const CountOptions& options) {
  if (options.shards < 1) throw InvalidArgumentError("shards must be >= 1");
  const PreTokenizer pretokenizer(options.pretokenizer);
  // Contiguous document blocks of roughly equal byte size.
  size_t total_bytes = 0;
  for (auto d : documents) total_bytes += d.size();
  const size_t num_shards = static_cast<size_t>(options.shards);
  std::vector<size_t> bounds{0};
  size_t acc = 0;
  for (size_t i = 0; i < documents.size(); ++i) {
    acc += documents[i].size();
    if (bounds.size() < num_shards &&
        acc * num_shards >= total_bytes * bounds.size()) {
      bounds.push_back(i + 1);
    }
  }
  while (bounds.size() <= num_shards) bounds.push_back(documents.size());
  std::vector<Shard> shards(num_shards);
  ParallelFor(num_shards, options.threads, [&](size_t s) {
    shards[s] = TokenizeShard(
        documents.subspan(bounds[s], bounds[s + 1] - bounds[s]), pretokenizer);
  });
  return CountShards(std::move(shards), options.max_n, options.min_count,
                     options.threads);
}

NgramCounts Merge(const NgramCounts& left, const NgramCounts& right) {
  if (left.max_n() != right.max_n()) {
    throw InvalidArgumentError("cannot merge counts with max_n " +
                               std::to_string(left.max_n()) + " and " +
                               std::to_string(right.max_n()));
  }
  std::vector<std::string> dict;
  std::set_union(left.words().begin(), left.words().end(),
                 right.words().begin(), right.words().end(),
                 std::back_inserter(dict));
  const auto left_map = RemapTable(left.words(), dict);
  const auto right_map = RemapTable(right.words(), dict);
  NgramCountsBuilder builder(left.max_n(), dict);
  builder.set_min_count(std::max(left.min_count(), right.min_count()));
  auto remap = [](const std::vector<NgramEntry>& in,
                  const std::vector<WordId>& table, int n) {
    // Monotone id maps preserve sortedness.
    std::vector<NgramEntry> out = in;
    for (auto& e : out) {
      for (int j = 0; j < n; ++j) e.key.ids[j] = table[e.key.ids[j]];
    }
    return out;
  };
  for (int n = 1; n <= left.max_n(); ++n) {
    builder.set_total(n, left.total(n) + right.total(n));
    std::vector<std::vector<NgramEntry>> runs;
    runs.push_back(remap(left.entries(n), left_map, n));
    runs.push_back(remap(right.entries(n), right_map, n));
    builder.entries(n) = MergeRuns(std::move(runs), 1);
  }
  return std::move(builder).Build();
}

NgramCounts Prune(NgramCounts counts, uint64_t min_count) {
  if (min_count < 1) throw InvalidArgumentError("min_count must be >= 1");
  NgramCountsBuilder builder(counts.max_n(), counts.words());
  builder.set_min_count(std::max(counts.min_count(), min_count));
  for (int n = 1; n <= counts.max_n(); ++n) {
    builder.set_total(n, counts.total(n));
    auto entries = counts.entries(n);
    if (n >= 2) {
      std::erase_if(entries,
                    [&](const NgramEntry& e) { return e.count < min_count; });
    }
    builder.entries(n) = std::move(entries);
  }
  return std::move(builder).Build();
}

double Prob(const NgramCounts& counts, std::span<const std::string> ngram) {
  if (ngram.empty()) throw InvalidArgumentError("empty n-gram");
  const int n = static_cast<int>(ngram.size());
  CheckOrder(n, counts.max_n());
  const uint64_t total = counts.total(n);
  if (total == 0) {
    throw InvalidArgumentError("no length-" + std::to_string(n) +
                               " positions in corpus");
  }
  return static_cast<double>(counts.Count(ngram)) / static_cast<double>(total);
}

}  // namespace pmimask
