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

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pmimask/error.h"
#include "pmimask/rng.h"
#include "testing/synthetic_corpus.h"

namespace pmimask {
namespace {

using ::pmimask::testing::MakeTokenVocab;
using ::pmimask::testing::WriteTempFile;

std::vector<std::string> Pieces(const TokenVocab& v,
                                const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(v.piece(t.id));
  return out;
}

TEST(PreTokenizerTest, LowercasesAndSplitsPunctuation) {
  PreTokenizer p;
  EXPECT_EQ(p.Split("Hello, World!  it's\tfine"),
            (std::vector<std::string>{"hello", ",", "world", "!", "it", "'",
                                      "s", "fine"}));
  EXPECT_TRUE(p.Split("  \n\t ").empty());
}

TEST(PreTokenizerTest, WordInternalPunctuationIsKept) {
  PreTokenizerOptions options;
  options.word_internal_punctuation = "-'";
  PreTokenizer p(options);
  EXPECT_EQ(p.Split("state-of-the-art isn't."),
            (std::vector<std::string>{"state-of-the-art", "isn't", "."}));
}

TEST(PreTokenizerTest, NoPunctuationSplitting) {
  PreTokenizerOptions options;
  options.split_punctuation = false;
  EXPECT_EQ(PreTokenizer(options).Split("a,b c."),
            (std::vector<std::string>{"a,b", "c."}));
}

TEST(PreTokenizerTest, NonAsciiBytesStayInWords) {
  EXPECT_EQ(PreTokenizer().Split("Café über"),
            (std::vector<std::string>{"café", "über"}));
}

TEST(TokenVocabTest, GreedyLongestMatch) {
  const auto v = MakeTokenVocab({"un", "##aff", "##able", "una", "##ff", "a",
                                 "##a", "##b"});
  EXPECT_EQ(Pieces(v, v.TokenizeWord("unaffable")),
            (std::vector<std::string>{"una", "##ff", "##able"}));
  const auto tokens = v.TokenizeWord("unaffable");
  EXPECT_FALSE(tokens[0].is_continuation);
  EXPECT_TRUE(tokens[1].is_continuation);
  EXPECT_EQ(Pieces(v, v.TokenizeWord("aab")),
            (std::vector<std::string>{"a", "##a", "##b"}));
}

TEST(TokenVocabTest, UnmatchableWordIsUnknown) {
  const auto v = MakeTokenVocab({"a", "##b"});
  const auto t = v.TokenizeWord("abc");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].id, v.unk_id());
  EXPECT_EQ(v.TokenizeWord("b")[0].id, v.unk_id());
}

TEST(TokenVocabTest, OverlongWordIsUnknown) {
  auto v = MakeTokenVocab({"a", "##a"});
  EXPECT_EQ(v.TokenizeWord(std::string(100, 'a')).size(), 100u);
  EXPECT_EQ(v.TokenizeWord(std::string(101, 'a'))[0].id, v.unk_id());
  v.set_max_input_chars_per_word(3);
  EXPECT_EQ(v.TokenizeWord("aaaa")[0].id, v.unk_id());
}

TEST(TokenVocabTest, RespectsUtf8Boundaries) {
  // "é" is two bytes; a one-byte prefix of it must never match.
  const std::string e_acute = "\xc3\xa9";
  const auto v = MakeTokenVocab({"caf", "##" + e_acute, "\xc3"});
  const auto t = v.TokenizeWord("caf" + e_acute);
  EXPECT_EQ(Pieces(v, t), (std::vector<std::string>{"caf", "##" + e_acute}));
}

TEST(TokenVocabTest, SpecialsAndReplacements) {
  const auto v = MakeTokenVocab({"a", "##b"});
  EXPECT_EQ(v.size(), 7u);
  EXPECT_EQ(v.piece(v.unk_id()), "[UNK]");
  EXPECT_EQ(v.piece(v.mask_id()), "[MASK]");
  EXPECT_TRUE(v.is_special(v.unk_id()));
  EXPECT_FALSE(v.is_control(v.unk_id()));
  EXPECT_TRUE(v.is_control(*v.Find("[CLS]")));
  EXPECT_TRUE(v.is_control(v.mask_id()));
  EXPECT_EQ(v.replacement_ids(), (std::vector<TokenId>{5, 6}));
  EXPECT_TRUE(v.is_continuation(6));
  EXPECT_FALSE(v.Find("zzz").has_value());
}

TEST(TokenVocabTest, RejectsMalformedVocabularies) {
  EXPECT_THROW(TokenVocab::FromEntries({}), FormatError);
  EXPECT_THROW(TokenVocab::FromEntries({"[UNK]", "[MASK]", "a", "a"}),
               FormatError);
  EXPECT_THROW(TokenVocab::FromEntries({"[UNK]", "[MASK]", ""}), FormatError);
  EXPECT_THROW(TokenVocab::FromEntries({"[MASK]", "a"}), FormatError);
  EXPECT_THROW(TokenVocab::FromEntries({"[UNK]", "a"}), FormatError);
  EXPECT_THROW(TokenVocab::Load("/nonexistent/vocab.txt"), IoError);
}

TEST(TokenVocabTest, LoadsFromFile) {
  const auto path = WriteTempFile("vocab_crlf.txt", "[UNK]\r\n[MASK]\r\nhi\r\n");
  const auto v = TokenVocab::Load(path);
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(*v.Find("hi"), 2);
}

TEST(TokenVocabTest, TokenizeTextTracksWordSpans) {
  const auto v = MakeTokenVocab({"new", "york", "##er", ",", "hi"});
  const auto seq = v.TokenizeText("New Yorker, hi zz");
  EXPECT_EQ(seq.words,
            (std::vector<std::string>{"new", "yorker", ",", "hi", "zz"}));
  ASSERT_EQ(seq.word_spans.size(), 5u);
  EXPECT_EQ(seq.word_spans[1], (TokenRange{1, 3}));
  EXPECT_EQ(seq.word_spans[4], (TokenRange{5, 6}));
  EXPECT_EQ(seq.tokens[5].id, v.unk_id());
  EXPECT_EQ(seq.size(), 6u);
}

TEST(TokenVocabTest, FromIdsRebuildsWords) {
  const auto v = MakeTokenVocab({"new", "york", "##er", "hi"});
  const TokenId cls = *v.Find("[CLS]");
  const TokenId sep = *v.Find("[SEP]");
  const TokenId er = *v.Find("##er");
  const std::vector<TokenId> ids = {cls, *v.Find("new"), *v.Find("york"), er,
                                    sep, er, v.unk_id()};
  const auto seq = v.FromIds(ids);
  EXPECT_EQ(seq.words, (std::vector<std::string>{"[CLS]", "new", "yorker",
                                                 "[SEP]", "er", "[UNK]"}));
  EXPECT_EQ(seq.word_spans[2], (TokenRange{2, 4}));
  EXPECT_EQ(seq.ids(), ids);
  const std::vector<TokenId> bad = {0, 99};
  EXPECT_THROW(v.FromIds(bad), InvalidArgumentError);
}

// Property: for text over vocabulary words, FromIds(TokenizeText(x).ids())
// reproduces the same word structure.
TEST(TokenVocabTest, FromIdsRoundTripProperty) {
  const auto v = MakeTokenVocab({"ab", "a", "b", "##a", "##b", "##ab", "c"});
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int words = 1 + static_cast<int>(rng.UniformInt(12));
    for (int w = 0; w < words; ++w) {
      if (w) text.push_back(' ');
      const int len = 1 + static_cast<int>(rng.UniformInt(5));
      for (int i = 0; i < len; ++i) text.push_back("abc"[rng.UniformInt(3)]);
    }
    const auto seq = v.TokenizeText(text);
    const auto ids = seq.ids();
    const auto back = v.FromIds(ids);
    ASSERT_EQ(back.word_spans, seq.word_spans) << text;
    for (size_t w = 0; w < seq.words.size(); ++w) {
      const bool unk = seq.tokens[seq.word_spans[w].begin].id == v.unk_id();
      EXPECT_EQ(back.words[w], unk ? "[UNK]" : seq.words[w]);
    }
  }
}

}  // namespace
}  // namespace pmimask
