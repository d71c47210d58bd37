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

#ifndef PMIMASK_ENGINE_H_
#define PMIMASK_ENGINE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmimask/mask_vocab.h"
#include "pmimask/masking_engine.h"
#include "pmimask/tokenizer.h"

namespace pmimask {

struct RecordUnit {
  size_t token_begin = 0;
  size_t token_end = 0;
  size_t words = 0;
  UnitKind kind = UnitKind::kWholeWord;
  MaskAction action = MaskAction::kMask;
};

// One masked sequence. Serialized as a single JSON line:
//   {"index":i,"seed":s,"input_ids":[..],"masked_ids":[..],
//    "positions":[..],"actions":"MRK..","labels":[..]}
// where actions has one character per selected position and labels holds
// the original id at selected positions and -100 elsewhere.
struct MaskedRecord {
  uint64_t index = 0;
  uint64_t seed = 0;
  std::vector<TokenId> input_ids;
  std::vector<TokenId> masked_ids;
  std::vector<uint32_t> positions;
  std::vector<MaskAction> actions;
  std::vector<int32_t> labels;
  std::vector<RecordUnit> units;  // not serialized
  size_t maskable_tokens = 0;
};

std::string RecordToJson(const MaskedRecord& record);

// Batch results as contiguous arrays. Sequence i occupies
// [offsets[i], offsets[i+1]) of masked_ids and labels, and
// [position_offsets[i], position_offsets[i+1]) of positions and actions.
struct FlatMaskedBatch {
  std::vector<TokenId> masked_ids;
  std::vector<int32_t> labels;
  std::vector<uint64_t> offsets;
  std::vector<uint32_t> positions;
  std::vector<uint8_t> actions;  // MaskAction values
  std::vector<uint64_t> position_offsets;
};

// Immutable (token vocabulary, masking vocabulary, scheme) bundle. Sequence
// i of a batch masked under global seed s always uses the generator stream
// Rng::ForStream(s, first_index + i), so results do not depend on batching
// or threading. Safe to share across threads.
class MaskingEngine {
 public:
  MaskingEngine(TokenVocab token_vocab, std::optional<MaskingVocab> masking_vocab,
                Scheme scheme, SchemeConfig config,
                PreTokenizerOptions pretokenizer = {});

  static MaskingEngine Load(const std::string& token_vocab_path,
                            const std::optional<std::string>& masking_vocab_path,
                            Scheme scheme, SchemeConfig config,
                            PreTokenizerOptions pretokenizer = {});

  const TokenVocab& token_vocab() const { return *token_vocab_; }
  const MaskingVocab* masking_vocab() const {
    return masking_vocab_ ? &*masking_vocab_ : nullptr;
  }
  Scheme scheme() const { return scheme_; }
  const SchemeConfig& config() const { return config_; }

  TokenizedSequence TokenizeText(std::string_view text) const;
  std::vector<TokenId> EncodeText(std::string_view text) const;

  // Sequences without maskable tokens come back unchanged with no
  // selections. Throws InvalidArgumentError on out-of-range ids.
  MaskedRecord MaskIds(std::span<const TokenId> ids, uint64_t seed,
                       uint64_t index) const;

  std::vector<MaskedRecord> MaskBatch(
      const std::vector<std::vector<TokenId>>& batch, uint64_t seed,
      uint64_t first_index = 0, int threads = 1) const;

  // `offsets` has batch size + 1 entries delimiting sequences in `ids`.
  FlatMaskedBatch MaskBatchFlat(std::span<const TokenId> ids,
                                std::span<const uint64_t> offsets,
                                uint64_t seed, uint64_t first_index = 0,
                                int threads = 1) const;

  // Fraction of words inside masking-vocabulary occurrences; 0 without one.
  double Coverage(const std::vector<std::vector<std::string>>& documents) const;

  // First line of a masked-output file.
  std::string HeaderJson(uint64_t seed) const;

 private:
  std::shared_ptr<const TokenVocab> token_vocab_;
  std::shared_ptr<const MaskingVocab> masking_vocab_;
  Scheme scheme_;
  SchemeConfig config_;
  PreTokenizer pretokenizer_;
};

}  // namespace pmimask

#endif  // PMIMASK_ENGINE_H_
