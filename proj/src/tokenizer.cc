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

#include "pmimask/tokenizer.h"

#include <fstream>
#include <string>

#include "pmimask/error.h"

namespace pmimask {

namespace {

bool IsUtf8Continuation(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

size_t CountCodePoints(std::string_view s) {
  size_t n = 0;
  for (const char c : s) n += !IsUtf8Continuation(c);
  return n;
}

}  // namespace

std::vector<TokenId> TokenizedSequence::ids() const {
  std::vector<TokenId> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.id);
  return out;
}

PreTokenizer::PreTokenizer(const PreTokenizerOptions& options) {
  for (int c = 0; c < 256; ++c) {
    classes_[c] = kWord;
    lower_[c] = (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                       : static_cast<char>(c);
  }
  for (const char c : std::string_view(" \t\n\r\f\v")) {
    classes_[static_cast<unsigned char>(c)] = kSpace;
  }
  if (options.split_punctuation) {
    for (int c = 33; c < 127; ++c) {
      const bool punct = (c <= 47) || (c >= 58 && c <= 64) ||
                         (c >= 91 && c <= 96) || (c >= 123);
      if (punct) classes_[c] = kPunct;
    }
    for (const char c : options.word_internal_punctuation) {
      classes_[static_cast<unsigned char>(c)] = kWord;
    }
  }
}

std::vector<std::string> PreTokenizer::Split(std::string_view text) const {
  std::vector<std::string> words;
  ForEachWord(text, [&](std::string_view w) { words.emplace_back(w); });
  return words;
}

bool TokenVocab::IsSpecialEntry(std::string_view entry) {
  return entry.size() >= 3 && entry.front() == '[' && entry.back() == ']';
}

TokenVocab TokenVocab::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open token vocabulary: " + path);
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    entries.push_back(std::move(line));
  }
  try {
    return FromEntries(std::move(entries));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

TokenVocab TokenVocab::FromEntries(std::vector<std::string> entries) {
  if (entries.empty()) throw FormatError("token vocabulary is empty");
  TokenVocab v;
  v.entries_ = std::move(entries);
  const size_t n = v.entries_.size();
  v.continuation_.assign(n, false);
  v.special_.assign(n, false);
  for (size_t i = 0; i < n; ++i) {
    const std::string& e = v.entries_[i];
    const auto id = static_cast<TokenId>(i);
    if (e.empty()) {
      throw FormatError("empty entry at line " + std::to_string(i + 1));
    }
    if (!v.all_.emplace(e, id).second) {
      throw FormatError("duplicate entry '" + e + "' at line " +
                        std::to_string(i + 1));
    }
    if (IsSpecialEntry(e)) {
      v.special_[i] = true;
      if (e == kUnkToken) v.unk_id_ = id;
      if (e == kMaskToken) v.mask_id_ = id;
      continue;
    }
    v.replacement_ids_.push_back(id);
    if (e.size() > kContinuationPrefix.size() &&
        e.starts_with(kContinuationPrefix)) {
      v.continuation_[i] = true;
      const std::string_view piece =
          std::string_view(e).substr(kContinuationPrefix.size());
      v.continuations_.emplace(std::string(piece), id);
      v.max_piece_bytes_ = std::max(v.max_piece_bytes_, piece.size());
    } else {
      v.heads_.emplace(e, id);
      v.max_piece_bytes_ = std::max(v.max_piece_bytes_, e.size());
    }
  }
  if (v.unk_id_ < 0) throw FormatError("missing special token [UNK]");
  if (v.mask_id_ < 0) throw FormatError("missing special token [MASK]");
  return v;
}

std::optional<TokenId> TokenVocab::Find(std::string_view entry) const {
  const auto it = all_.find(entry);
  if (it == all_.end()) return std::nullopt;
  return it->second;
}

std::vector<Token> TokenVocab::TokenizeWord(std::string_view word) const {
  const std::vector<Token> unknown{Token{unk_id_, false}};
  if (word.empty() || CountCodePoints(word) > max_input_chars_per_word_) {
    return unknown;
  }
  std::vector<Token> out;
  size_t start = 0;
  while (start < word.size()) {
    const auto& table = start == 0 ? heads_ : continuations_;
    size_t end = std::min(word.size(), start + max_piece_bytes_);
    std::optional<TokenId> match;
    for (; end > start; --end) {
      if (end < word.size() && IsUtf8Continuation(word[end])) continue;
      const auto it = table.find(word.substr(start, end - start));
      if (it != table.end()) {
        match = it->second;
        break;
      }
    }
    if (!match) return unknown;
    out.push_back(Token{*match, start != 0});
    start = end;
  }
  return out;
}

TokenizedSequence TokenVocab::TokenizeText(
    std::string_view text, const PreTokenizer& pretokenizer) const {
  TokenizedSequence seq;
  pretokenizer.ForEachWord(text, [&](std::string_view word) {
    const size_t begin = seq.tokens.size();
    for (const Token& t : TokenizeWord(word)) seq.tokens.push_back(t);
    seq.word_spans.push_back({begin, seq.tokens.size()});
    seq.words.emplace_back(word);
  });
  return seq;
}

TokenizedSequence TokenVocab::FromIds(std::span<const TokenId> ids) const {
  TokenizedSequence seq;
  seq.tokens.reserve(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    const TokenId id = ids[i];
    if (id < 0 || static_cast<size_t>(id) >= entries_.size()) {
      throw InvalidArgumentError("token id " + std::to_string(id) +
                                 " out of range at position " +
                                 std::to_string(i));
    }
    const bool cont = continuation_[id];
    const bool starts_word = !cont || seq.word_spans.empty() ||
                             is_control(seq.tokens.back().id);
    if (starts_word || is_control(id)) {
      seq.word_spans.push_back({i, i});
      seq.words.emplace_back();
    }
    seq.tokens.push_back(Token{id, cont});
    seq.word_spans.back().end = i + 1;
    const std::string& e = entries_[id];
    seq.words.back() += cont ? std::string_view(e).substr(
                                   kContinuationPrefix.size())
                             : std::string_view(e);
  }
  return seq;
}

}  // namespace pmimask
