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

#include "pmimask/engine.h"

#include <fmt/format.h>
#include <json.hpp>

#include "pmimask/error.h"
#include "pmimask/parallel.h"

namespace pmimask {

std::string RecordToJson(const MaskedRecord& r) {
  fmt::memory_buffer buf;
  auto out = std::back_inserter(buf);
  fmt::format_to(out, R"({{"index":{},"seed":{},"input_ids":[{}],)", r.index,
                 r.seed, fmt::join(r.input_ids, ","));
  fmt::format_to(out, R"("masked_ids":[{}],"positions":[{}],"actions":")",
                 fmt::join(r.masked_ids, ","), fmt::join(r.positions, ","));
  for (const auto a : r.actions) buf.push_back(ActionCode(a));
  fmt::format_to(out, R"(","labels":[{}]}})", fmt::join(r.labels, ","));
  return fmt::to_string(buf);
}

MaskingEngine::MaskingEngine(TokenVocab token_vocab,
                             std::optional<MaskingVocab> masking_vocab,
                             Scheme scheme, SchemeConfig config,
                             PreTokenizerOptions pretokenizer)
    : token_vocab_(std::make_shared<const TokenVocab>(std::move(token_vocab))),
      scheme_(scheme),
      config_(config),
      pretokenizer_(pretokenizer) {
  config_.Validate();
  if (masking_vocab) {
    masking_vocab_ =
        std::make_shared<const MaskingVocab>(std::move(*masking_vocab));
  }
  if (scheme_ == Scheme::kPmi && !masking_vocab_) {
    throw InvalidArgumentError("pmi scheme requires a masking vocabulary");
  }
}

MaskingEngine MaskingEngine::Load(
    const std::string& token_vocab_path,
    const std::optional<std::string>& masking_vocab_path, Scheme scheme,
    SchemeConfig config, PreTokenizerOptions pretokenizer) {
  std::optional<MaskingVocab> mv;
  if (masking_vocab_path) mv = MaskingVocab::Load(*masking_vocab_path);
  return MaskingEngine(TokenVocab::Load(token_vocab_path), std::move(mv),
                       scheme, config, pretokenizer);
}

TokenizedSequence MaskingEngine::TokenizeText(std::string_view text) const {
  return token_vocab_->TokenizeText(text, pretokenizer_);
}

std::vector<TokenId> MaskingEngine::EncodeText(std::string_view text) const {
  return TokenizeText(text).ids();
}

MaskedRecord MaskingEngine::MaskIds(std::span<const TokenId> ids,
                                    uint64_t seed, uint64_t index) const {
  const TokenVocab& tv = *token_vocab_;
  const TokenizedSequence seq = tv.FromIds(ids);
  MaskedRecord rec;
  rec.index = index;
  rec.seed = seed;
  rec.input_ids.assign(ids.begin(), ids.end());
  rec.maskable_tokens = MaskableTokens(seq, tv);
  if (rec.maskable_tokens == 0) {
    rec.masked_ids = rec.input_ids;
    rec.labels.assign(ids.size(), kIgnoreLabel);
    return rec;
  }
  Rng rng = Rng::ForStream(seed, index);
  const MaskingPlan plan =
      SelectUnits(scheme_, seq, tv, masking_vocab(), config_, rng);
  MaskedSequence masked = ApplyPlan(seq, plan, tv, rng);
  rec.masked_ids = std::move(masked.masked_ids);
  rec.labels = std::move(masked.labels);
  rec.actions = std::move(masked.actions);
  rec.positions.assign(plan.positions.begin(), plan.positions.end());
  for (const auto& su : plan.units) {
    rec.units.push_back(RecordUnit{su.unit.tokens.begin, su.unit.tokens.end,
                                   su.unit.num_words(), su.unit.kind,
                                   su.action});
  }
  return rec;
}

std::vector<MaskedRecord> MaskingEngine::MaskBatch(
    const std::vector<std::vector<TokenId>>& batch, uint64_t seed,
    uint64_t first_index, int threads) const {
  std::vector<MaskedRecord> out(batch.size());
  ParallelFor(batch.size(), threads, [&](size_t i) {
    out[i] = MaskIds(batch[i], seed, first_index + i);
  });
  return out;
}

FlatMaskedBatch MaskingEngine::MaskBatchFlat(std::span<const TokenId> ids,
                                             std::span<const uint64_t> offsets,
                                             uint64_t seed,
                                             uint64_t first_index,
                                             int threads) const {
  if (offsets.empty() || offsets.front() != 0 || offsets.back() != ids.size()) {
    throw InvalidArgumentError("offsets must start at 0 and end at ids.size()");
  }
  for (size_t i = 1; i < offsets.size(); ++i) {
    if (offsets[i] < offsets[i - 1]) {
      throw InvalidArgumentError("offsets must be nondecreasing");
    }
  }
  const size_t n = offsets.size() - 1;
  std::vector<MaskedRecord> records(n);
  ParallelFor(n, threads, [&](size_t i) {
    records[i] = MaskIds(ids.subspan(offsets[i], offsets[i + 1] - offsets[i]),
                         seed, first_index + i);
  });
  FlatMaskedBatch flat;
  flat.offsets.assign(offsets.begin(), offsets.end());
  flat.masked_ids.reserve(ids.size());
  flat.labels.reserve(ids.size());
  flat.position_offsets.push_back(0);
  for (const auto& r : records) {
    flat.masked_ids.insert(flat.masked_ids.end(), r.masked_ids.begin(),
                           r.masked_ids.end());
    flat.labels.insert(flat.labels.end(), r.labels.begin(), r.labels.end());
    flat.positions.insert(flat.positions.end(), r.positions.begin(),
                          r.positions.end());
    for (const auto a : r.actions) flat.actions.push_back(static_cast<uint8_t>(a));
    flat.position_offsets.push_back(flat.positions.size());
  }
  return flat;
}

double MaskingEngine::Coverage(
    const std::vector<std::vector<std::string>>& documents) const {
  if (!masking_vocab_) return 0.0;
  return pmimask::Coverage(*masking_vocab_, documents);
}

std::string MaskingEngine::HeaderJson(uint64_t seed) const {
  nlohmann::ordered_json h;
  h["format"] = "pmimask-masked v1";
  h["scheme"] = std::string(SchemeName(scheme_));
  h["seed"] = seed;
  h["budget"] = config_.budget;
  h["mask_prob"] = config_.mask_prob;
  h["random_prob"] = config_.random_prob;
  h["keep_prob"] = config_.keep_prob;
  h["span_geometric_p"] = config_.span_geometric_p;
  h["span_cap_words"] = config_.span_cap_words;
  h["token_vocab_size"] = token_vocab_->size();
  h["masking_vocab_size"] = masking_vocab_ ? masking_vocab_->size() : 0;
  nlohmann::ordered_json wrapper;
  wrapper["header"] = h;
  return wrapper.dump();
}

}  // namespace pmimask
