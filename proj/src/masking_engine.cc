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

#include "pmimask/masking_engine.h"

#include <algorithm>
#include <cmath>

#include "pmimask/error.h"

namespace pmimask {

namespace {

std::vector<uint8_t> MaskableWords(const TokenizedSequence& seq,
                                   const TokenVocab& vocab) {
  std::vector<uint8_t> out(seq.word_spans.size(), 1);
  for (size_t w = 0; w < seq.word_spans.size(); ++w) {
    const auto& span = seq.word_spans[w];
    for (size_t t = span.begin; t < span.end; ++t) {
      if (vocab.is_control(seq.tokens[t].id)) out[w] = 0;
    }
  }
  return out;
}

MaskAction DrawAction(const SchemeConfig& config, Rng& rng) {
  const double u = rng.UniformDouble();
  if (u < config.mask_prob) return MaskAction::kMask;
  if (u < config.mask_prob + config.random_prob) return MaskAction::kRandom;
  return MaskAction::kKeep;
}

MaskingPlan StartPlan(const TokenizedSequence& seq, const TokenVocab& vocab,
                      const SchemeConfig& config) {
  config.Validate();
  MaskingPlan plan;
  plan.sequence_length = seq.size();
  plan.maskable_tokens = MaskableTokens(seq, vocab);
  if (plan.maskable_tokens == 0) {
    throw InvalidArgumentError("sequence has no maskable tokens");
  }
  plan.target = BudgetTarget(config.budget, plan.maskable_tokens);
  return plan;
}

void FinishPlan(const TokenizedSequence& seq, MaskingPlan& plan) {
  for (const auto& su : plan.units) {
    for (size_t t = su.unit.tokens.begin; t < su.unit.tokens.end; ++t) {
      plan.positions.push_back(t);
    }
  }
  std::sort(plan.positions.begin(), plan.positions.end());
  plan.labels.reserve(plan.positions.size());
  for (const size_t p : plan.positions) plan.labels.push_back(seq.tokens[p].id);
}

// Draws units uniformly without replacement until the selected token count
// first reaches the target.
MaskingPlan SelectFromUnits(const TokenizedSequence& seq,
                            const TokenVocab& vocab,
                            std::vector<MaskingUnit> units,
                            const SchemeConfig& config, Rng& rng) {
  MaskingPlan plan = StartPlan(seq, vocab, config);
  size_t selected = 0;
  for (size_t t = 0; t < units.size() && selected < plan.target; ++t) {
    const size_t j = t + rng.UniformInt(units.size() - t);
    std::swap(units[t], units[j]);
    selected += units[t].tokens.size();
    plan.units.push_back(SelectedUnit{units[t], DrawAction(config, rng)});
  }
  FinishPlan(seq, plan);
  return plan;
}

MaskingUnit WordRangeUnit(const TokenizedSequence& seq, size_t word_begin,
                          size_t word_end, UnitKind kind) {
  MaskingUnit u;
  u.tokens = {seq.word_spans[word_begin].begin,
              seq.word_spans[word_end - 1].end};
  u.word_begin = word_begin;
  u.word_end = word_end;
  u.kind = kind;
  return u;
}

}  // namespace

std::string_view SchemeName(Scheme scheme) {
  switch (scheme) {
    case Scheme::kRandomToken:
      return "random-token";
    case Scheme::kWholeWord:
      return "whole-word";
    case Scheme::kRandomSpan:
      return "random-span";
    case Scheme::kPmi:
      return "pmi";
  }
  return "?";
}

Scheme ParseScheme(std::string_view name) {
  if (name == "random-token") return Scheme::kRandomToken;
  if (name == "whole-word") return Scheme::kWholeWord;
  if (name == "random-span") return Scheme::kRandomSpan;
  if (name == "pmi") return Scheme::kPmi;
  throw InvalidArgumentError("unknown masking scheme '" + std::string(name) +
                             "'");
}

char ActionCode(MaskAction action) {
  switch (action) {
    case MaskAction::kMask:
      return 'M';
    case MaskAction::kRandom:
      return 'R';
    case MaskAction::kKeep:
      return 'K';
  }
  return '?';
}

std::string_view UnitKindName(UnitKind kind) {
  switch (kind) {
    case UnitKind::kSingleToken:
      return "single_token";
    case UnitKind::kWholeWord:
      return "whole_word";
    case UnitKind::kNgram:
      return "ngram";
    case UnitKind::kSpan:
      return "span";
  }
  return "?";
}

void SchemeConfig::Validate() const {
  if (!(budget > 0.0 && budget < 1.0)) {
    throw InvalidArgumentError("masking budget must be in (0, 1)");
  }
  if (mask_prob < 0 || random_prob < 0 || keep_prob < 0 ||
      std::abs(mask_prob + random_prob + keep_prob - 1.0) > 1e-9) {
    throw InvalidArgumentError("action probabilities must be >= 0 and sum to 1");
  }
  if (!(span_geometric_p > 0.0 && span_geometric_p <= 1.0)) {
    throw InvalidArgumentError("span geometric p must be in (0, 1]");
  }
  if (span_cap_words < 1) throw InvalidArgumentError("span cap must be >= 1");
  if (span_max_retries < 1) {
    throw InvalidArgumentError("span retries must be >= 1");
  }
}

TruncatedGeometric::TruncatedGeometric(double p, int cap) {
  if (!(p > 0.0 && p <= 1.0) || cap < 1) {
    throw InvalidArgumentError("truncated geometric needs p in (0,1], cap >= 1");
  }
  double z = 0.0;
  for (int l = 1; l <= cap; ++l) {
    probs_.push_back(p * std::pow(1.0 - p, l - 1));
    z += probs_.back();
  }
  double acc = 0.0;
  for (auto& q : probs_) {
    q /= z;
    acc += q;
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;
}

int TruncatedGeometric::Sample(Rng& rng) const {
  const double u = rng.UniformDouble();
  for (size_t i = 0; i < cdf_.size(); ++i) {
    if (u < cdf_[i]) return static_cast<int>(i) + 1;
  }
  return cap();
}

double TruncatedGeometric::Probability(int length) const {
  if (length < 1 || length > cap()) return 0.0;
  return probs_[length - 1];
}

double TruncatedGeometric::Mean() const {
  double m = 0.0;
  for (int l = 1; l <= cap(); ++l) m += l * probs_[l - 1];
  return m;
}

size_t MaskableTokens(const TokenizedSequence& seq, const TokenVocab& vocab) {
  size_t n = 0;
  for (const auto& t : seq.tokens) n += !vocab.is_control(t.id);
  return n;
}

size_t BudgetTarget(double budget, size_t maskable_tokens) {
  if (maskable_tokens == 0) return 0;
  const double raw = budget * static_cast<double>(maskable_tokens);
  const auto target = static_cast<size_t>(std::ceil(raw - 1e-9));
  return std::clamp<size_t>(target, 1, maskable_tokens);
}

std::vector<MaskingUnit> SegmentUnits(const TokenizedSequence& seq,
                                      const TokenVocab& token_vocab,
                                      const MaskingVocab* masking_vocab,
                                      Rng& rng) {
  const auto maskable = MaskableWords(seq, token_vocab);
  const size_t num_words = seq.word_spans.size();
  // chosen_end[w] > 0 marks a chosen occurrence starting at word w.
  std::vector<size_t> chosen_end(num_words, 0);
  std::vector<int64_t> chosen_entry(num_words, -1);
  if (masking_vocab && !masking_vocab->empty()) {
    auto occ = FindOccurrences(*masking_vocab, seq.words, maskable);
    // Keep occurrences not contained in another: order by begin asc, end
    // desc, and drop any whose end does not pass the running maximum.
    std::sort(occ.begin(), occ.end(), [](const Occurrence& a, const Occurrence& b) {
      return a.begin != b.begin ? a.begin < b.begin : a.end > b.end;
    });
    std::vector<Occurrence> maximal;
    size_t max_end = 0;
    for (const auto& o : occ) {
      if (!maximal.empty() && o.end <= max_end) continue;
      maximal.push_back(o);
      max_end = o.end;
    }
    // Maximal occurrences have strictly increasing begin and end. Take the
    // leftmost remaining one together with everything overlapping it, pick
    // one uniformly, and skip past whatever overlaps the pick.
    size_t i = 0;
    while (i < maximal.size()) {
      size_t group_end = i + 1;
      while (group_end < maximal.size() &&
             maximal[group_end].begin < maximal[i].end) {
        ++group_end;
      }
      size_t pick = i;
      if (group_end - i > 1) pick = i + rng.UniformInt(group_end - i);
      const Occurrence& c = maximal[pick];
      chosen_end[c.begin] = c.end;
      chosen_entry[c.begin] = static_cast<int64_t>(c.entry);
      i = pick + 1;
      while (i < maximal.size() && maximal[i].begin < c.end) ++i;
    }
  }
  std::vector<MaskingUnit> units;
  for (size_t w = 0; w < num_words;) {
    if (chosen_end[w] > 0) {
      MaskingUnit u = WordRangeUnit(seq, w, chosen_end[w], UnitKind::kNgram);
      u.vocab_entry = chosen_entry[w];
      units.push_back(u);
      w = chosen_end[w];
      continue;
    }
    if (maskable[w]) units.push_back(WordRangeUnit(seq, w, w + 1, UnitKind::kWholeWord));
    ++w;
  }
  return units;
}

MaskingPlan SelectRandomToken(const TokenizedSequence& seq,
                              const TokenVocab& token_vocab,
                              const SchemeConfig& config, Rng& rng) {
  std::vector<MaskingUnit> units;
  for (size_t w = 0; w < seq.word_spans.size(); ++w) {
    for (size_t t = seq.word_spans[w].begin; t < seq.word_spans[w].end; ++t) {
      if (token_vocab.is_control(seq.tokens[t].id)) continue;
      MaskingUnit u;
      u.tokens = {t, t + 1};
      u.word_begin = w;
      u.word_end = w + 1;
      u.kind = UnitKind::kSingleToken;
      units.push_back(u);
    }
  }
  return SelectFromUnits(seq, token_vocab, std::move(units), config, rng);
}

MaskingPlan SelectWholeWord(const TokenizedSequence& seq,
                            const TokenVocab& token_vocab,
                            const SchemeConfig& config, Rng& rng) {
  auto units = SegmentUnits(seq, token_vocab, nullptr, rng);
  return SelectFromUnits(seq, token_vocab, std::move(units), config, rng);
}

MaskingPlan SelectPmi(const TokenizedSequence& seq,
                      const TokenVocab& token_vocab,
                      const MaskingVocab* masking_vocab,
                      const SchemeConfig& config, Rng& rng) {
  config.Validate();
  auto units = SegmentUnits(seq, token_vocab, masking_vocab, rng);
  return SelectFromUnits(seq, token_vocab, std::move(units), config, rng);
}

MaskingPlan SelectRandomSpan(const TokenizedSequence& seq,
                             const TokenVocab& token_vocab,
                             const SchemeConfig& config, Rng& rng) {
  MaskingPlan plan = StartPlan(seq, token_vocab, config);
  const TruncatedGeometric lengths(config.span_geometric_p,
                                   config.span_cap_words);
  const auto maskable = MaskableWords(seq, token_vocab);
  // Spans are drawn over maskable words and never straddle a control token.
  std::vector<size_t> words;
  for (size_t w = 0; w < maskable.size(); ++w) {
    if (maskable[w]) words.push_back(w);
  }
  const size_t num = words.size();
  std::vector<bool> taken(num, false);
  auto adjacent = [&](size_t i) { return words[i + 1] == words[i] + 1; };
  auto fits = [&](size_t start, size_t len) {
    for (size_t i = start; i < start + len; ++i) {
      if (taken[i]) return false;
      if (i + 1 < start + len && !adjacent(i)) return false;
    }
    return true;
  };
  size_t selected = 0;
  while (selected < plan.target) {
    size_t len = std::min<size_t>(lengths.Sample(rng), num);
    bool found = false;
    size_t start = 0;
    for (int attempt = 0; attempt < config.span_max_retries; ++attempt) {
      start = rng.UniformInt(num - len + 1);
      if (fits(start, len)) {
        found = true;
        break;
      }
    }
    if (!found) {
      // Shorten: grow a span of at most len words around a random free word.
      std::vector<size_t> free_words;
      for (size_t i = 0; i < num; ++i) {
        if (!taken[i]) free_words.push_back(i);
      }
      const size_t seed_word = free_words[rng.UniformInt(free_words.size())];
      size_t b = seed_word;
      size_t e = seed_word + 1;
      while (e - b < len && e < num && !taken[e] && adjacent(e - 1)) ++e;
      while (e - b < len && b > 0 && !taken[b - 1] && adjacent(b - 1)) --b;
      start = b;
      len = e - b;
    }
    for (size_t i = start; i < start + len; ++i) taken[i] = true;
    MaskingUnit u =
        WordRangeUnit(seq, words[start], words[start + len - 1] + 1, UnitKind::kSpan);
    selected += u.tokens.size();
    plan.units.push_back(SelectedUnit{u, DrawAction(config, rng)});
  }
  FinishPlan(seq, plan);
  return plan;
}

MaskingPlan SelectUnits(Scheme scheme, const TokenizedSequence& seq,
                        const TokenVocab& token_vocab,
                        const MaskingVocab* masking_vocab,
                        const SchemeConfig& config, Rng& rng) {
  switch (scheme) {
    case Scheme::kRandomToken:
      return SelectRandomToken(seq, token_vocab, config, rng);
    case Scheme::kWholeWord:
      return SelectWholeWord(seq, token_vocab, config, rng);
    case Scheme::kRandomSpan:
      return SelectRandomSpan(seq, token_vocab, config, rng);
    case Scheme::kPmi:
      if (!masking_vocab) {
        throw InvalidArgumentError("pmi scheme requires a masking vocabulary");
      }
      return SelectPmi(seq, token_vocab, masking_vocab, config, rng);
  }
  throw InvalidArgumentError("unknown scheme");
}

MaskedSequence ApplyPlan(const TokenizedSequence& seq, const MaskingPlan& plan,
                         const TokenVocab& token_vocab, Rng& rng) {
  if (plan.sequence_length != seq.size()) {
    throw InvalidArgumentError("plan length " +
                               std::to_string(plan.sequence_length) +
                               " does not match sequence length " +
                               std::to_string(seq.size()));
  }
  MaskedSequence out;
  out.masked_ids = seq.ids();
  out.labels.assign(seq.size(), kIgnoreLabel);
  std::vector<int8_t> action_at(seq.size(), -1);
  const auto& replacements = token_vocab.replacement_ids();
  for (const auto& su : plan.units) {
    const auto& r = su.unit.tokens;
    if (r.begin >= r.end || r.end > seq.size()) {
      throw InvalidArgumentError("plan unit outside the sequence");
    }
    for (size_t t = r.begin; t < r.end; ++t) {
      if (action_at[t] >= 0) {
        throw InvalidArgumentError("plan units overlap at position " +
                                   std::to_string(t));
      }
      action_at[t] = static_cast<int8_t>(su.action);
      out.labels[t] = seq.tokens[t].id;
      switch (su.action) {
        case MaskAction::kMask:
          out.masked_ids[t] = token_vocab.mask_id();
          break;
        case MaskAction::kRandom:
          if (replacements.empty()) {
            throw InvalidArgumentError("vocabulary has no non-special tokens");
          }
          out.masked_ids[t] = replacements[rng.UniformInt(replacements.size())];
          break;
        case MaskAction::kKeep:
          break;
      }
    }
  }
  for (const size_t p : plan.positions) {
    if (p >= seq.size() || action_at[p] < 0) {
      throw InvalidArgumentError("plan positions inconsistent with its units");
    }
    out.actions.push_back(static_cast<MaskAction>(action_at[p]));
  }
  return out;
}

}  // namespace pmimask
