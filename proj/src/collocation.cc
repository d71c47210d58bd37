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

#include <bit>
#include <cmath>
#include <limits>

#include "pmimask/error.h"

namespace pmimask {

namespace {

std::vector<WordId> IdsOrThrow(const NgramCounts& counts,
                               std::span<const std::string> ngram) {
  auto ids = counts.ToIds(ngram);
  if (!ids) throw InvalidArgumentError("zero probability: unseen word");
  return std::move(*ids);
}

}  // namespace

Segmentation::Segmentation(int n, uint32_t cuts) : n_(n), cuts_(cuts) {
  if (n < 2 || n > kMaxNgramOrder) {
    throw InvalidArgumentError("segmentation length out of range");
  }
  if (cuts == 0 || cuts >= (1u << (n - 1))) {
    throw InvalidArgumentError("segmentation needs at least two parts");
  }
}

int Segmentation::num_parts() const { return std::popcount(cuts_) + 1; }

std::vector<int> Segmentation::part_ends() const {
  std::vector<int> ends;
  for (int j = 1; j < n_; ++j) {
    if (cuts_ & (1u << (j - 1))) ends.push_back(j);
  }
  ends.push_back(n_);
  return ends;
}

std::vector<std::pair<int, int>> Segmentation::parts() const {
  std::vector<std::pair<int, int>> out;
  int begin = 0;
  for (const int end : part_ends()) {
    out.emplace_back(begin, end);
    begin = end;
  }
  return out;
}

std::string Segmentation::Render(std::span<const std::string> words) const {
  std::string out;
  for (const auto& [b, e] : parts()) {
    out.push_back('[');
    for (int i = b; i < e; ++i) {
      if (i > b) out.push_back(' ');
      out += words[i];
    }
    out.push_back(']');
  }
  return out;
}

std::vector<Segmentation> EnumerateSegmentations(int n) {
  if (n < 2 || n > kMaxNgramOrder) {
    throw InvalidArgumentError("segmentations need 2 <= n <= 5, got " +
                               std::to_string(n));
  }
  std::vector<Segmentation> out;
  for (uint32_t cuts = (1u << (n - 1)) - 1; cuts >= 1; --cuts) {
    out.emplace_back(n, cuts);
  }
  return out;
}

CollocationScorer::CollocationScorer(const NgramCounts& counts)
    : counts_(counts), segmentations_(kMaxNgramOrder + 1) {
  for (int n = 1; n <= counts.max_n(); ++n) {
    log_totals_.push_back(counts.total(n) > 0
                              ? std::log(static_cast<double>(counts.total(n)))
                              : 0.0);
  }
  for (int n = 2; n <= counts.max_n(); ++n) {
    segmentations_[n] = EnumerateSegmentations(n);
  }
}

double CollocationScorer::LogProb(std::span<const WordId> ids) const {
  const uint64_t c = counts_.Count(ids);
  if (c == 0) {
    throw InvalidArgumentError("zero probability for a length-" +
                               std::to_string(ids.size()) + " sub-span");
  }
  return std::log(static_cast<double>(c)) - log_totals_[ids.size() - 1];
}

CollocationScorer::Result CollocationScorer::Score(
    std::span<const WordId> ids) const {
  const int n = static_cast<int>(ids.size());
  if (n < 2 || n > counts_.max_n()) {
    throw InvalidArgumentError("collocation scores need 2 <= n <= max_n");
  }
  // log p of every sub-span [b, e), computed once.
  double span_log_prob[kMaxNgramOrder][kMaxNgramOrder + 1];
  for (int b = 0; b < n; ++b) {
    for (int e = b + 1; e <= n; ++e) {
      if (e - b == n) continue;
      span_log_prob[b][e] = LogProb(ids.subspan(b, e - b));
    }
  }
  const double whole = LogProb(ids);
  Result result;
  result.pmi_n = std::numeric_limits<double>::infinity();
  for (const Segmentation& seg : segmentations_[n]) {
    double denom = 0.0;
    int b = 0;
    for (const int e : seg.part_ends()) {
      denom += span_log_prob[b][e];
      b = e;
    }
    const double value = whole - denom;
    if (seg.cuts() == (1u << (n - 1)) - 1) result.naive_pmi = value;
    if (value < result.pmi_n) {
      result.pmi_n = value;
      result.argmin = seg;
    }
  }
  return result;
}

double Pmi2(const NgramCounts& counts, const std::string& w1,
            const std::string& w2) {
  const std::string pair[2] = {w1, w2};
  return NaivePmiN(counts, pair);
}

double NaivePmiN(const NgramCounts& counts,
                 std::span<const std::string> ngram) {
  const int n = static_cast<int>(ngram.size());
  if (n < 2 || n > counts.max_n()) {
    throw InvalidArgumentError("collocation scores need 2 <= n <= max_n");
  }
  const auto ids = IdsOrThrow(counts, ngram);
  auto log_prob = [&](std::span<const WordId> s) {
    const uint64_t c = counts.Count(s);
    if (c == 0) throw InvalidArgumentError("zero probability");
    return std::log(static_cast<double>(c)) -
           std::log(static_cast<double>(counts.total(static_cast<int>(s.size()))));
  };
  // Same summation order as CollocationScorer::Score.
  double denom = 0.0;
  for (int j = 0; j < n; ++j) denom += log_prob(std::span(ids).subspan(j, 1));
  return log_prob(ids) - denom;
}

CollocationScore PmiN(const NgramCounts& counts,
                      std::span<const std::string> ngram) {
  const auto ids = IdsOrThrow(counts, ngram);
  const auto r = CollocationScorer(counts).Score(ids);
  CollocationScore score;
  score.ngram.assign(ngram.begin(), ngram.end());
  score.n = static_cast<int>(ngram.size());
  score.count = counts.Count(std::span<const WordId>(ids));
  score.naive_pmi = r.naive_pmi;
  score.pmi_n = r.pmi_n;
  score.argmin_segmentation = r.argmin;
  return score;
}

}  // namespace pmimask
