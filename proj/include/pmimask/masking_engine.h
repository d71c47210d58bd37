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

#ifndef PMIMASK_MASKING_ENGINE_H_
#define PMIMASK_MASKING_ENGINE_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "pmimask/mask_vocab.h"
#include "pmimask/rng.h"
#include "pmimask/tokenizer.h"

namespace pmimask {

enum class UnitKind : uint8_t { kSingleToken, kWholeWord, kNgram, kSpan };
enum class MaskAction : uint8_t { kMask, kRandom, kKeep };
enum class Scheme { kRandomToken, kWholeWord, kRandomSpan, kPmi };

std::string_view SchemeName(Scheme scheme);
Scheme ParseScheme(std::string_view name);
char ActionCode(MaskAction action);  // 'M', 'R', 'K'
std::string_view UnitKindName(UnitKind kind);

struct MaskingUnit {
  TokenRange tokens;
  size_t word_begin = 0;  // word span indices [word_begin, word_end)
  size_t word_end = 0;
  UnitKind kind = UnitKind::kWholeWord;
  int64_t vocab_entry = -1;  // set for kNgram

  size_t num_words() const { return word_end - word_begin; }
  friend bool operator==(const MaskingUnit&, const MaskingUnit&) = default;
};

struct SchemeConfig {
  double budget = 0.15;
  double mask_prob = 0.8;
  double random_prob = 0.1;
  double keep_prob = 0.1;
  double span_geometric_p = 0.2;
  int span_cap_words = 10;
  int span_max_retries = 32;

  // Throws InvalidArgumentError when a field is out of range.
  void Validate() const;
};

// Geometric(p) on {1, 2, ...} truncated to {1..cap} and renormalized.
class TruncatedGeometric {
 public:
  TruncatedGeometric(double p, int cap);

  int Sample(Rng& rng) const;
  double Probability(int length) const;
  double Mean() const;
  int cap() const { return static_cast<int>(probs_.size()); }

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

struct SelectedUnit {
  MaskingUnit unit;
  MaskAction action = MaskAction::kMask;
};

struct MaskingPlan {
  std::vector<SelectedUnit> units;  // in selection order
  std::vector<size_t> positions;    // sorted selected token positions
  std::vector<TokenId> labels;      // original ids at `positions`
  size_t sequence_length = 0;
  size_t maskable_tokens = 0;       // L, the budget base
  size_t target = 0;                // ceil(budget * L)
};

// Number of tokens that count towards the budget: everything except control
// tokens such as [CLS] and [SEP].
size_t MaskableTokens(const TokenizedSequence& seq, const TokenVocab& vocab);

// ceil(budget * L) with the product nudged down by 1e-9 so that, e.g.,
// 0.15 * 100 does not round up to 16.
size_t BudgetTarget(double budget, size_t maskable_tokens);

// Atomic masking units. With a masking vocabulary, occurrences contained in
// a larger occurrence are dropped, overlapping occurrences are resolved by
// uniform choice scanning left to right, and all remaining words become
// whole-word units. Without one (nullptr) every word is a unit. Control
// tokens belong to no unit. Units are returned in sequence order.
std::vector<MaskingUnit> SegmentUnits(const TokenizedSequence& seq,
                                      const TokenVocab& token_vocab,
                                      const MaskingVocab* masking_vocab,
                                      Rng& rng);

MaskingPlan SelectRandomToken(const TokenizedSequence& seq,
                              const TokenVocab& token_vocab,
                              const SchemeConfig& config, Rng& rng);
MaskingPlan SelectWholeWord(const TokenizedSequence& seq,
                            const TokenVocab& token_vocab,
                            const SchemeConfig& config, Rng& rng);
MaskingPlan SelectRandomSpan(const TokenizedSequence& seq,
                             const TokenVocab& token_vocab,
                             const SchemeConfig& config, Rng& rng);
MaskingPlan SelectPmi(const TokenizedSequence& seq,
                      const TokenVocab& token_vocab,
                      const MaskingVocab* masking_vocab,
                      const SchemeConfig& config, Rng& rng);

// Dispatches on scheme; masking_vocab is required for kPmi.
MaskingPlan SelectUnits(Scheme scheme, const TokenizedSequence& seq,
                        const TokenVocab& token_vocab,
                        const MaskingVocab* masking_vocab,
                        const SchemeConfig& config, Rng& rng);

inline constexpr int32_t kIgnoreLabel = -100;

struct MaskedSequence {
  std::vector<TokenId> masked_ids;
  std::vector<int32_t> labels;        // original id where selected, else -100
  std::vector<MaskAction> actions;    // per entry of plan.positions
};

// MASK units become [MASK], RANDOM units draw each token uniformly from the
// non-special ids, KEEP units stay unchanged. Throws InvalidArgumentError if
// the plan does not fit the sequence.
MaskedSequence ApplyPlan(const TokenizedSequence& seq, const MaskingPlan& plan,
                         const TokenVocab& token_vocab, Rng& rng);

}  // namespace pmimask

#endif  // PMIMASK_MASKING_ENGINE_H_
