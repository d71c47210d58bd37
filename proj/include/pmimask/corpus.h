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

#ifndef PMIMASK_CORPUS_H_
#define PMIMASK_CORPUS_H_

#include <string>
#include <string_view>
#include <vector>

namespace pmimask {

// Plain-text corpus held in memory. Documents are separated by blank lines
// (lines containing only whitespace) and never span two files. Each
// non-blank line is one masking sequence.
class Corpus {
 public:
  static Corpus Load(const std::vector<std::string>& paths);
  static Corpus FromText(std::string text);

  Corpus(Corpus&&) = default;
  Corpus& operator=(Corpus&&) = default;
  Corpus(const Corpus&) = delete;
  Corpus& operator=(const Corpus&) = delete;

  const std::vector<std::string_view>& documents() const { return documents_; }
  const std::vector<std::string_view>& lines() const { return lines_; }
  size_t bytes() const;

 private:
  Corpus() = default;
  void Index();

  std::vector<std::string> buffers_;
  std::vector<std::string_view> documents_;
  std::vector<std::string_view> lines_;
};

std::string ReadFileOrThrow(const std::string& path);

// Blank-line separated documents; leading/trailing blank lines are dropped.
std::vector<std::string_view> SplitDocuments(std::string_view text);
std::vector<std::string_view> SplitNonBlankLines(std::string_view text);

}  // namespace pmimask

#endif  // PMIMASK_CORPUS_H_
