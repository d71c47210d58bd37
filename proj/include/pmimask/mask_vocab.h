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

#ifndef PMIMASK_MASK_VOCAB_H_
#define PMIMASK_MASK_VOCAB_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pmimask/ngram_stats.h"
#include "pmimask/string_util.h"

namespace pmimask {

enum class RankingMeasure { kPmiN, kNaivePmiN, kFrequency };

// "pmi", "naive-pmi", "frequency".
std::string_view MeasureName(RankingMeasure measure);
RankingMeasure ParseMeasure(std::string_view name);

struct RankedEntry {
  std::vector<std::string> ngram;
  uint64_t count = 0;
  double score = 0.0;
  uint64_t rank = 0;  // 1-based
};

// Candidates of one length ordered by (score desc, count desc, words asc).
struct RankedList {
  int n = 0;
  RankingMeasure measure = RankingMeasure::kPmiN;
  std::vector<RankedEntry> entries;
};

using RankedLists = std::map<int, RankedList>;

// Scores every stored n-gram of length 2..max_n. Counts are expected to be
// pruned already; an empty length yields an empty list.
RankedLists RankCandidates(const NgramCounts& counts, RankingMeasure measure,
                           int threads = 1);

struct MaskingVocabEntry {
  std::vector<std::string> ngram;
  uint64_t count = 0;
  double score = 0.0;
  uint64_t global_rank = 0;  // 1-based position in the integrated order

  int n() const { return static_cast<int>(ngram.size()); }
};

struct VocabProvenance {
  std::string corpus_id;
  std::string measure;
  uint64_t min_count = 0;
};

// Word n-grams (2 <= n <= 5) that are masked as single units.
class MaskingVocab {
 public:
  MaskingVocab() = default;
  // Throws InvalidArgumentError on duplicates or lengths outside [2, 5].
  MaskingVocab(std::vector<MaskingVocabEntry> entries,
               VocabProvenance provenance);

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<MaskingVocabEntry>& entries() const { return entries_; }
  const VocabProvenance& provenance() const { return provenance_; }
  int max_n() const { return max_n_; }

  std::optional<size_t> Find(std::span<const std::string> ngram) const;
  std::optional<size_t> FindJoined(std::string_view joined) const;
  // True if some entry starts with the given space-joined words.
  bool IsPrefix(std::string_view joined) const;

  // Text format, one entry per line after the '#' header:
  //   w1 ... wn <TAB> n <TAB> count <TAB> score <TAB> global_rank
  void Write(std::ostream& out) const;
  void Save(const std::string& path) const;
  static MaskingVocab Read(std::istream& in);
  static MaskingVocab Load(const std::string& path);

 private:
  std::vector<MaskingVocabEntry> entries_;
  VocabProvenance provenance_;
  int max_n_ = 0;
  std::unordered_map<std::string, size_t, StringHash, std::equal_to<>> index_;
  std::unordered_set<std::string, StringHash, std::equal_to<>> prefixes_;
};

// Position of a candidate inside RankedLists.
struct CandidateRef {
  int n = 0;
  size_t index = 0;
};

// All candidates ordered by normalized rank rank/|list| (compared exactly),
// then higher score, shorter n, and lexicographic words.
std::vector<CandidateRef> IntegratedOrder(const RankedLists& lists);

// The first M candidates of IntegratedOrder. M beyond the candidate count
// returns every candidate.
MaskingVocab IntegrateRankings(const RankedLists& lists, uint64_t size,
                               VocabProvenance provenance = {});

// Half-open word range of a vocabulary occurrence.
struct Occurrence {
  size_t begin = 0;
  size_t end = 0;
  size_t entry = 0;

  size_t size() const { return end - begin; }
  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

// Every occurrence of a vocabulary n-gram in `words`, sorted by (begin, end).
// If `eligible` is non-empty, matches never include a word with
// eligible[i] == 0.
std::vector<Occurrence> FindOccurrences(const MaskingVocab& vocab,
                                        std::span<const std::string> words,
                                        std::span<const uint8_t> eligible = {});

// Fraction of word positions inside at least one vocabulary occurrence.
double Coverage(const MaskingVocab& vocab,
                const std::vector<std::vector<std::string>>& documents);

struct LabeledNgram {
  std::vector<std::string> ngram;
  bool is_collocation = false;
};

// Lines of "w1 ... wn <TAB> 0|1".
std::vector<LabeledNgram> ReadLabeledSet(const std::string& path);

struct CalibrationPoint {
  uint64_t size = 0;
  uint64_t positives_in = 0;
  uint64_t negatives_out = 0;
  double r = 0.0;  // fraction of positives inside the list
  double c = 0.0;  // fraction of negatives outside the list
  double f = 0.0;  // 2rc / (r + c), 0 when r + c = 0
};

struct CalibrationReport {
  uint64_t step = 0;
  uint64_t total_candidates = 0;
  uint64_t positives = 0;
  uint64_t negatives = 0;
  std::vector<CalibrationPoint> grid;
  uint64_t chosen_size = 0;
  double chosen_f = 0.0;
};

double HarmonicBalance(double r, double c);

// Evaluates M = step, 2 step, ... below the candidate count, plus the full
// candidate count, and picks the smallest M with maximal f.
CalibrationReport CalibrateSize(const RankedLists& lists,
                                std::span<const LabeledNgram> labeled,
                                uint64_t step = 50000);

void WriteCalibrationReport(const CalibrationReport& report, std::ostream& out);

}  // namespace pmimask

#endif  // PMIMASK_MASK_VOCAB_H_
