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

#include "pmimask/corpus.h"

#include <fstream>
#include <sstream>

#include "pmimask/error.h"

namespace pmimask {

namespace {

bool IsBlank(std::string_view line) {
  for (const char c : line) {
    if (c != ' ' && c != '\t' && c != '\r' && c != '\f' && c != '\v') {
      return false;
    }
  }
  return true;
}

// Calls fn(line) for each line of text, without the trailing newline.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    fn(text.substr(pos, end - pos));
    pos = end + 1;
  }
}

}  // namespace

std::string ReadFileOrThrow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string data;
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size > 0) {
    data.resize(static_cast<size_t>(size));
    in.seekg(0);
    in.read(data.data(), size);
  }
  if (!in && !in.eof()) throw IoError("read failed: " + path);
  return data;
}

std::vector<std::string_view> SplitDocuments(std::string_view text) {
  std::vector<std::string_view> docs;
  const char* doc_begin = nullptr;
  const char* doc_end = nullptr;
  ForEachLine(text, [&](std::string_view line) {
    if (IsBlank(line)) {
      if (doc_begin) docs.emplace_back(doc_begin, doc_end - doc_begin);
      doc_begin = nullptr;
      return;
    }
    if (!doc_begin) doc_begin = line.data();
    doc_end = line.data() + line.size();
  });
  if (doc_begin) docs.emplace_back(doc_begin, doc_end - doc_begin);
  return docs;
}

std::vector<std::string_view> SplitNonBlankLines(std::string_view text) {
  std::vector<std::string_view> lines;
  ForEachLine(text, [&](std::string_view line) {
    if (!IsBlank(line)) lines.push_back(line);
  });
  return lines;
}

Corpus Corpus::Load(const std::vector<std::string>& paths) {
  Corpus corpus;
  corpus.buffers_.reserve(paths.size());
  for (const auto& p : paths) corpus.buffers_.push_back(ReadFileOrThrow(p));
  corpus.Index();
  return corpus;
}

Corpus Corpus::FromText(std::string text) {
  Corpus corpus;
  corpus.buffers_.push_back(std::move(text));
  corpus.Index();
  return corpus;
}

void Corpus::Index() {
  for (const auto& buf : buffers_) {
    for (auto d : SplitDocuments(buf)) documents_.push_back(d);
    for (auto l : SplitNonBlankLines(buf)) lines_.push_back(l);
  }
}

size_t Corpus::bytes() const {
  size_t n = 0;
  for (const auto& b : buffers_) n += b.size();
  return n;
}

}  // namespace pmimask
