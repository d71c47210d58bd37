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

#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "pmimask/error.h"
#include "pmimask/ngram_stats.h"

// Binary counts layout, all integers little-endian:
//   char[8]  magic "PMICNT01"
//   u32      max_n
//   u64      min_count
//   u64      total[max_n]
//   u64      num_words, then per word: u32 byte length, bytes
//   per n in 1..max_n: u64 num_entries, then per entry: u32 ids[n], u64 count

namespace pmimask {

namespace {

constexpr char kBinaryMagic[8] = {'P', 'M', 'I', 'C', 'N', 'T', '0', '1'};
constexpr std::string_view kTextMagic = "# pmimask-counts v1";

template <typename T>
void PutLE(std::ostream& out, T value) {
  char buf[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>((static_cast<uint64_t>(value) >> (8 * i)) & 0xff);
  }
  out.write(buf, sizeof(T));
}

template <typename T>
T GetLE(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw FormatError("truncated binary counts file");
  }
  uint64_t v = 0;
  for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

void WriteText(const NgramCounts& counts, std::ostream& out) {
  fmt::memory_buffer buf;
  auto flush = [&] {
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  };
  fmt::format_to(std::back_inserter(buf), "{}\n# max_n\t{}\n# min_count\t{}\n",
                 kTextMagic, counts.max_n(), counts.min_count());
  for (int n = 1; n <= counts.max_n(); ++n) {
    fmt::format_to(std::back_inserter(buf), "# total\t{}\t{}\n", n,
                   counts.total(n));
  }
  const auto& words = counts.words();
  for (int n = 1; n <= counts.max_n(); ++n) {
    for (const auto& e : counts.entries(n)) {
      fmt::format_to(std::back_inserter(buf), "{}\t", n);
      for (int j = 0; j < n; ++j) {
        if (j) buf.push_back(' ');
        const auto& w = words[e.key.ids[j]];
        buf.append(w.data(), w.data() + w.size());
      }
      fmt::format_to(std::back_inserter(buf), "\t{}\n", e.count);
      if (buf.size() > (1 << 20)) flush();
    }
  }
  flush();
}

void WriteBinary(const NgramCounts& counts, std::ostream& out) {
  out.write(kBinaryMagic, sizeof(kBinaryMagic));
  PutLE<uint32_t>(out, static_cast<uint32_t>(counts.max_n()));
  PutLE<uint64_t>(out, counts.min_count());
  for (int n = 1; n <= counts.max_n(); ++n) PutLE<uint64_t>(out, counts.total(n));
  PutLE<uint64_t>(out, counts.words().size());
  for (const auto& w : counts.words()) {
    PutLE<uint32_t>(out, static_cast<uint32_t>(w.size()));
    out.write(w.data(), static_cast<std::streamsize>(w.size()));
  }
  for (int n = 1; n <= counts.max_n(); ++n) {
    PutLE<uint64_t>(out, counts.entries(n).size());
    for (const auto& e : counts.entries(n)) {
      for (int j = 0; j < n; ++j) PutLE<uint32_t>(out, e.key.ids[j]);
      PutLE<uint64_t>(out, e.count);
    }
  }
}

NgramCounts ReadBinary(std::istream& in) {
  const auto max_n = static_cast<int>(GetLE<uint32_t>(in));
  if (max_n < 1 || max_n > kMaxNgramOrder) throw FormatError("bad max_n");
  const auto min_count = GetLE<uint64_t>(in);
  std::vector<uint64_t> totals(max_n);
  for (auto& t : totals) t = GetLE<uint64_t>(in);
  const auto num_words = GetLE<uint64_t>(in);
  std::vector<std::string> words;
  words.reserve(num_words);
  for (uint64_t i = 0; i < num_words; ++i) {
    const auto len = GetLE<uint32_t>(in);
    std::string w(len, '\0');
    if (!in.read(w.data(), len)) throw FormatError("truncated word table");
    words.push_back(std::move(w));
  }
  NgramCountsBuilder builder(max_n, std::move(words));
  builder.set_min_count(min_count);
  for (int n = 1; n <= max_n; ++n) {
    builder.set_total(n, totals[n - 1]);
    const auto num_entries = GetLE<uint64_t>(in);
    auto& entries = builder.entries(n);
    entries.resize(num_entries);
    for (auto& e : entries) {
      for (int j = 0; j < n; ++j) e.key.ids[j] = GetLE<uint32_t>(in);
      e.count = GetLE<uint64_t>(in);
    }
  }
  return std::move(builder).Build();
}

uint64_t ParseUint(std::string_view s, size_t line_no) {
  if (s.empty()) throw FormatError(fmt::format("line {}: empty number", line_no));
  uint64_t v = 0;
  for (const char c : s) {
    if (c < '0' || c > '9') {
      throw FormatError(fmt::format("line {}: bad number '{}'", line_no, s));
    }
    v = v * 10 + static_cast<uint64_t>(c - '0');
  }
  return v;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (true) {
    const size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

NgramCounts ReadText(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  int max_n = -1;
  uint64_t min_count = 1;
  std::vector<uint64_t> totals(kMaxNgramOrder, 0);
  struct Record {
    int n;
    std::vector<std::string> words;
    uint64_t count;
  };
  std::vector<std::vector<Record>> records(kMaxNgramOrder);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = SplitTabs(line);
    if (line[0] == '#') {
      if (line_no == 1) {
        if (line != kTextMagic) throw FormatError("not a counts file");
        continue;
      }
      if (f.size() == 2 && f[0] == "# max_n") {
        max_n = static_cast<int>(ParseUint(f[1], line_no));
      } else if (f.size() == 2 && f[0] == "# min_count") {
        min_count = ParseUint(f[1], line_no);
      } else if (f.size() == 3 && f[0] == "# total") {
        const auto n = ParseUint(f[1], line_no);
        if (n < 1 || n > kMaxNgramOrder) {
          throw FormatError(fmt::format("line {}: bad total length", line_no));
        }
        totals[n - 1] = ParseUint(f[2], line_no);
      }
      continue;
    }
    if (f.size() != 3) {
      throw FormatError(fmt::format("line {}: expected 3 fields", line_no));
    }
    const auto n = static_cast<int>(ParseUint(f[0], line_no));
    if (n < 1 || n > max_n) {
      throw FormatError(fmt::format("line {}: bad n-gram length", line_no));
    }
    Record r{n, {}, ParseUint(f[2], line_no)};
    size_t pos = 0;
    const std::string_view ws = f[1];
    while (pos <= ws.size()) {
      size_t sp = ws.find(' ', pos);
      if (sp == std::string_view::npos) sp = ws.size();
      r.words.emplace_back(ws.substr(pos, sp - pos));
      pos = sp + 1;
    }
    if (static_cast<int>(r.words.size()) != n) {
      throw FormatError(fmt::format("line {}: expected {} words", line_no, n));
    }
    records[n - 1].push_back(std::move(r));
  }
  if (max_n < 1 || max_n > kMaxNgramOrder) {
    throw FormatError("counts file lacks a valid max_n header");
  }
  std::vector<std::string> words;
  for (const auto& r : records[0]) words.push_back(r.words[0]);
  std::sort(words.begin(), words.end());
  NgramCountsBuilder builder(max_n, words);
  builder.set_min_count(min_count);
  for (int n = 1; n <= max_n; ++n) {
    builder.set_total(n, totals[n - 1]);
    auto& entries = builder.entries(n);
    for (const auto& r : records[n - 1]) {
      NgramEntry e;
      for (int j = 0; j < n; ++j) {
        const auto it = std::lower_bound(words.begin(), words.end(), r.words[j]);
        if (it == words.end() || *it != r.words[j]) {
          throw FormatError("n-gram word '" + r.words[j] +
                            "' has no unigram record");
        }
        e.key.ids[j] = static_cast<WordId>(it - words.begin());
      }
      e.count = r.count;
      entries.push_back(e);
    }
    std::sort(entries.begin(), entries.end(),
              [](const NgramEntry& a, const NgramEntry& b) { return a.key < b.key; });
  }
  return std::move(builder).Build();
}

}  // namespace

void WriteCounts(const NgramCounts& counts, std::ostream& out,
                 CountsFormat format) {
  if (format == CountsFormat::kBinary) {
    WriteBinary(counts, out);
  } else {
    WriteText(counts, out);
  }
}

void WriteCountsFile(const NgramCounts& counts, const std::string& path,
                     CountsFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  WriteCounts(counts, out, format);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

NgramCounts ReadCounts(std::istream& in) {
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  std::istringstream stream(std::move(data));
  char head[sizeof(kBinaryMagic)] = {};
  stream.read(head, sizeof(head));
  if (stream.gcount() == sizeof(head) &&
      std::memcmp(head, kBinaryMagic, sizeof(head)) == 0) {
    return ReadBinary(stream);
  }
  stream.clear();
  stream.seekg(0);
  return ReadText(stream);
}

NgramCounts ReadCountsFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return ReadCounts(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace pmimask
