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

#ifndef PMIMASK_COLLOCATION_H_
#define PMIMASK_COLLOCATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pmimask/ngram_stats.h"

namespace pmimask {

// A split of an n-gram into k >= 2 contiguous parts. Stored as the set of
// cut positions: bit (j - 1) is set when a part boundary follows word j.
class Segmentation {
 public:
  Segmentation() = default;
  Segmentation(int n, uint32_t cuts);

  int n() const { return n_; }
  uint32_t cuts() const { return cuts_; }
  int num_parts() const;
  // Exclusive end index of each part, e.g. {2, 3} for [w1 w2][w3].
  std::vector<int> part_ends() const;
  std::vector<std::pair<int, int>> parts() const;
  // "[a b][c]" style rendering against the given words.
  std::string Render(std::span<const std::string> words) const;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;

 private:
  int n_ = 0;
  uint32_t cuts_ = 0;
};

// All 2^(n-1) - 1 segmentations with at least two parts, all-unigram first,
// then by descending cut mask: for n = 3, [a][b][c], [a b][c], [a][b c].
// Throws InvalidArgumentError unless 2 <= n <= 5.
std::vector<Segmentation> EnumerateSegmentations(int n);

struct CollocationScore {
  std::vector<std::string> ngram;
  int n = 0;
  uint64_t count = 0;
  double naive_pmi = 0.0;
  double pmi_n = 0.0;
  Segmentation argmin_segmentation;
};

// log p(w1 w2) / (p(w1) p(w2)), natural log. Throws InvalidArgumentError if
// any of the probabilities is zero.
double Pmi2(const NgramCounts& counts, const std::string& w1,
            const std::string& w2);

// log p(w1..wn) / prod_j p(wj).
double NaivePmiN(const NgramCounts& counts, std::span<const std::string> ngram);

// Minimum over EnumerateSegmentations(n) of log p(ngram) / prod_s p(s).
// Ties go to the segmentation that comes first in enumeration order.
CollocationScore PmiN(const NgramCounts& counts,
                      std::span<const std::string> ngram);

// Id-level scorer for bulk ranking. Caches log totals and the segmentation
// tables so scoring a candidate costs only the sub-span lookups.
class CollocationScorer {
 public:
  explicit CollocationScorer(const NgramCounts& counts);

  struct Result {
    double naive_pmi = 0.0;
    double pmi_n = 0.0;
    Segmentation argmin;
  };

  // Scores ids[0..n). Throws InvalidArgumentError on a zero probability.
  Result Score(std::span<const WordId> ids) const;

  const NgramCounts& counts() const { return counts_; }

 private:
  double LogProb(std::span<const WordId> ids) const;

  const NgramCounts& counts_;
  std::vector<double> log_totals_;
  std::vector<std::vector<Segmentation>> segmentations_;
};

}  // namespace pmimask

#endif  // PMIMASK_COLLOCATION_H_
