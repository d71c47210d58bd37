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

#ifndef PMIMASK_TOKENIZER_H_
#define PMIMASK_TOKENIZER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pmimask/string_util.h"

namespace pmimask {

using TokenId = int32_t;

struct Token {
  TokenId id = 0;
  bool is_continuation = false;

  friend bool operator==(const Token&, const Token&) = default;
};

// Half-open token index range [begin, end).
struct TokenRange {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

// Subword tokens grouped into whole words. word_spans partitions
// [0, tokens.size()); words[i] is the lowercased surface of span i.
struct TokenizedSequence {
  std::vector<Token> tokens;
  std::vector<TokenRange> word_spans;
  std::vector<std::string> words;

  size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::vector<TokenId> ids() const;
};

// Word boundary rules shared by counting and tokenization. Input is
// lowercased (ASCII), split on whitespace, and every ASCII punctuation
// character becomes a word of its own unless listed in
// `word_internal_punctuation` (e.g. "-" keeps "editor-in-chief" whole).
struct PreTokenizerOptions {
  bool split_punctuation = true;
  std::string word_internal_punctuation;
};

class PreTokenizer {
 public:
  PreTokenizer() : PreTokenizer(PreTokenizerOptions{}) {}
  explicit PreTokenizer(const PreTokenizerOptions& options);

  // Calls fn(std::string_view word) for every word in order. The view is only
  // valid for the duration of the call.
  template <typename Fn>
  void ForEachWord(std::string_view text, Fn&& fn) const {
    std::string word;
    for (const char ch : text) {
      const auto c = static_cast<unsigned char>(ch);
      switch (classes_[c]) {
        case kSpace:
          if (!word.empty()) {
            fn(std::string_view(word));
            word.clear();
          }
          break;
        case kPunct:
          if (!word.empty()) {
            fn(std::string_view(word));
            word.clear();
          }
          fn(std::string_view(&ch, 1));
          break;
        default:
          word.push_back(lower_[c]);
          break;
      }
    }
    if (!word.empty()) fn(std::string_view(word));
  }

  std::vector<std::string> Split(std::string_view text) const;

 private:
  enum CharClass : uint8_t { kWord = 0, kSpace = 1, kPunct = 2 };
  CharClass classes_[256];
  char lower_[256];
};

// WordPiece vocabulary: one entry per line, line index = id. Entries starting
// with "##" are continuation pieces. Bracketed entries such as "[CLS]" are
// special; "[UNK]" and "[MASK]" must be present.
class TokenVocab {
 public:
  static constexpr std::string_view kContinuationPrefix = "##";
  static constexpr std::string_view kUnkToken = "[UNK]";
  static constexpr std::string_view kMaskToken = "[MASK]";
  static constexpr size_t kDefaultMaxInputCharsPerWord = 100;

  static TokenVocab Load(const std::string& path);
  static TokenVocab FromEntries(std::vector<std::string> entries);

  size_t size() const { return entries_.size(); }
  const std::string& piece(TokenId id) const { return entries_.at(id); }
  const std::vector<std::string>& entries() const { return entries_; }
  bool is_continuation(TokenId id) const { return continuation_[id]; }
  bool is_special(TokenId id) const { return special_[id]; }
  // Special tokens other than [UNK] (e.g. [CLS], [SEP], [PAD]). They are
  // never maskable and do not count towards the masking budget.
  bool is_control(TokenId id) const { return special_[id] && id != unk_id_; }
  TokenId unk_id() const { return unk_id_; }
  TokenId mask_id() const { return mask_id_; }
  // Ids eligible as random replacements: every non-special entry.
  const std::vector<TokenId>& replacement_ids() const { return replacement_ids_; }

  std::optional<TokenId> Find(std::string_view entry) const;

  // Greedy longest-match-first segmentation of a single lowercase word.
  // Returns a single [UNK] token if any position cannot be matched.
  std::vector<Token> TokenizeWord(std::string_view word) const;

  TokenizedSequence TokenizeText(std::string_view text,
                                 const PreTokenizer& pretokenizer) const;
  TokenizedSequence TokenizeText(std::string_view text) const {
    return TokenizeText(text, PreTokenizer());
  }

  // Rebuilds word structure from raw ids: a word starts at every
  // non-continuation token and each control token is a word of its own.
  // Throws InvalidArgumentError on ids outside [0, size()).
  TokenizedSequence FromIds(std::span<const TokenId> ids) const;

  void set_max_input_chars_per_word(size_t n) { max_input_chars_per_word_ = n; }

 private:
  TokenVocab() = default;
  static bool IsSpecialEntry(std::string_view entry);

  std::vector<std::string> entries_;
  std::vector<bool> continuation_;
  std::vector<bool> special_;
  std::vector<TokenId> replacement_ids_;
  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> heads_;
  // Keyed by the piece with the continuation prefix stripped.
  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>>
      continuations_;
  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> all_;
  size_t max_piece_bytes_ = 0;
  size_t max_input_chars_per_word_ = kDefaultMaxInputCharsPerWord;
  TokenId unk_id_ = -1;
  TokenId mask_id_ = -1;
};

}  // namespace pmimask

#endif  // PMIMASK_TOKENIZER_H_
