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

#include "testing/oracles.h"

#include <cmath>
#include <limits>

namespace pmimask::testing {

std::vector<NgramTable> BruteForceCounts(const WordDocs& docs, int max_n) {
  std::vector<NgramTable> tables(max_n + 1);
  for (const auto& doc : docs) {
    for (int n = 1; n <= max_n; ++n) {
      for (size_t i = 0; i + n <= doc.size(); ++i) {
        std::vector<std::string> g(doc.begin() + i, doc.begin() + i + n);
        ++tables[n][g];
      }
    }
  }
  return tables;
}

std::vector<uint64_t> BruteForceTotals(const WordDocs& docs, int max_n) {
  std::vector<uint64_t> totals(max_n + 1, 0);
  for (const auto& doc : docs) {
    for (int n = 1; n <= max_n; ++n) {
      if (doc.size() >= static_cast<size_t>(n)) totals[n] += doc.size() - n + 1;
    }
  }
  return totals;
}

uint64_t ScanCount(const WordDocs& docs, const std::vector<std::string>& ngram) {
  uint64_t c = 0;
  for (const auto& doc : docs) {
    for (size_t i = 0; i + ngram.size() <= doc.size(); ++i) {
      bool match = true;
      for (size_t j = 0; j < ngram.size() && match; ++j) {
        match = doc[i + j] == ngram[j];
      }
      c += match;
    }
  }
  return c;
}

namespace {

void Compose(int remaining, std::vector<int>& prefix,
             std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(prefix);
    return;
  }
  for (int len = 1; len <= remaining; ++len) {
    prefix.push_back(len);
    Compose(remaining - len, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> Compositions(int n) {
  std::vector<std::vector<int>> all;
  std::vector<int> prefix;
  Compose(n, prefix, all);
  std::vector<std::vector<int>> out;
  for (auto& c : all) {
    if (c.size() >= 2) out.push_back(c);
  }
  return out;
}

namespace {

template <typename ProbFn>
OracleScore MinOverCompositions(const std::vector<std::string>& ngram,
                                ProbFn&& prob) {
  const int n = static_cast<int>(ngram.size());
  const double whole = prob(0, n);
  OracleScore s;
  s.pmi_n = std::numeric_limits<double>::infinity();
  for (const auto& parts : Compositions(n)) {
    double log_denom = 0.0;
    size_t begin = 0;
    for (const int len : parts) {
      log_denom += std::log(prob(begin, len));
      begin += len;
    }
    const double v = std::log(whole) - log_denom;
    if (static_cast<int>(parts.size()) == n) s.naive_pmi = v;
    if (v < s.pmi_n) {
      s.pmi_n = v;
      s.argmin_parts = parts;
    }
  }
  return s;
}

}  // namespace

OracleScore BruteForcePmi(const WordDocs& docs,
                          const std::vector<std::string>& ngram) {
  const auto totals = BruteForceTotals(docs, static_cast<int>(ngram.size()));
  return MinOverCompositions(ngram, [&](size_t begin, size_t len) {
    std::vector<std::string> g(ngram.begin() + begin,
                               ngram.begin() + begin + len);
    return static_cast<double>(ScanCount(docs, g)) /
           static_cast<double>(totals[len]);
  });
}

OracleScore BruteForcePmi(const std::vector<NgramTable>& tables,
                          const std::vector<uint64_t>& totals,
                          const std::vector<std::string>& ngram) {
  return MinOverCompositions(ngram, [&](size_t begin, size_t len) {
    std::vector<std::string> g(ngram.begin() + begin,
                               ngram.begin() + begin + len);
    const auto it = tables[len].find(g);
    const uint64_t c = it == tables[len].end() ? 0 : it->second;
    return static_cast<double>(c) / static_cast<double>(totals[len]);
  });
}

}  // namespace pmimask::testing
