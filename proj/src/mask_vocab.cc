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

#include "pmimask/mask_vocab.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "pmimask/collocation.h"
#include "pmimask/error.h"
#include "pmimask/parallel.h"

namespace pmimask {

namespace {

std::string JoinWords(std::span<const std::string> words) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

std::vector<std::string> SplitSpaces(std::string_view s) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t sp = s.find(' ', pos);
    if (sp == std::string_view::npos) sp = s.size();
    out.emplace_back(s.substr(pos, sp - pos));
    pos = sp + 1;
  }
  return out;
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

uint64_t ParseUintField(std::string_view s, size_t line_no) {
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

double ParseDoubleField(std::string_view s, size_t line_no) {
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw FormatError(fmt::format("line {}: bad number '{}'", line_no, s));
  }
  return v;
}

bool Before(const RankedList& la, const RankedEntry& a, const RankedList& lb,
            const RankedEntry& b) {
  // rank_a / |A| < rank_b / |B|, exactly.
  const auto qa = static_cast<unsigned __int128>(a.rank) * lb.entries.size();
  const auto qb = static_cast<unsigned __int128>(b.rank) * la.entries.size();
  if (qa != qb) return qa < qb;
  if (a.score != b.score) return a.score > b.score;
  if (la.n != lb.n) return la.n < lb.n;
  return a.ngram < b.ngram;
}

}  // namespace

std::string_view MeasureName(RankingMeasure measure) {
  switch (measure) {
    case RankingMeasure::kPmiN:
      return "pmi";
    case RankingMeasure::kNaivePmiN:
      return "naive-pmi";
    case RankingMeasure::kFrequency:
      return "frequency";
  }
  return "?";
}

RankingMeasure ParseMeasure(std::string_view name) {
  if (name == "pmi") return RankingMeasure::kPmiN;
  if (name == "naive-pmi") return RankingMeasure::kNaivePmiN;
  if (name == "frequency") return RankingMeasure::kFrequency;
  throw InvalidArgumentError("unknown ranking measure '" + std::string(name) +
                             "'");
}

RankedLists RankCandidates(const NgramCounts& counts, RankingMeasure measure,
                           int threads) {
  const CollocationScorer scorer(counts);
  RankedLists lists;
  for (int n = 2; n <= counts.max_n(); ++n) {
    RankedList& list = lists[n];
    list.n = n;
    list.measure = measure;
    const auto& entries = counts.entries(n);
    std::vector<double> scores(entries.size());
    constexpr size_t kChunk = 1 << 14;
    const size_t chunks = (entries.size() + kChunk - 1) / kChunk;
    ParallelFor(chunks, threads, [&](size_t c) {
      const size_t end = std::min(entries.size(), (c + 1) * kChunk);
      for (size_t i = c * kChunk; i < end; ++i) {
        const auto& e = entries[i];
        if (measure == RankingMeasure::kFrequency) {
          scores[i] = static_cast<double>(e.count);
          continue;
        }
        const auto r = scorer.Score(std::span(e.key.ids).first(n));
        scores[i] = measure == RankingMeasure::kPmiN ? r.pmi_n : r.naive_pmi;
      }
    });
    // Entries are already in lexicographic order, so a stable sort on
    // (score, count) yields the full tie-break.
    std::vector<size_t> order(entries.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return entries[a].count > entries[b].count;
    });
    list.entries.reserve(order.size());
    for (size_t r = 0; r < order.size(); ++r) {
      const auto& e = entries[order[r]];
      list.entries.push_back(
          RankedEntry{counts.ToWords(e.key, n), e.count, scores[order[r]], r + 1});
    }
  }
  return lists;
}

MaskingVocab::MaskingVocab(std::vector<MaskingVocabEntry> entries,
                           VocabProvenance provenance)
    : entries_(std::move(entries)), provenance_(std::move(provenance)) {
  index_.reserve(entries_.size());
  for (size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.n() < 2 || e.n() > kMaxNgramOrder) {
      throw InvalidArgumentError("masking vocabulary entries need 2 <= n <= 5");
    }
    std::string key = JoinWords(e.ngram);
    if (!index_.emplace(key, i).second) {
      throw InvalidArgumentError("duplicate masking vocabulary entry '" + key +
                                 "'");
    }
    max_n_ = std::max(max_n_, e.n());
    std::string prefix = e.ngram[0];
    prefixes_.insert(prefix);
    for (int j = 1; j + 1 < e.n(); ++j) {
      prefix.push_back(' ');
      prefix += e.ngram[j];
      prefixes_.insert(prefix);
    }
  }
}

std::optional<size_t> MaskingVocab::Find(
    std::span<const std::string> ngram) const {
  return FindJoined(JoinWords(ngram));
}

std::optional<size_t> MaskingVocab::FindJoined(std::string_view joined) const {
  const auto it = index_.find(joined);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool MaskingVocab::IsPrefix(std::string_view joined) const {
  return prefixes_.find(joined) != prefixes_.end();
}

void MaskingVocab::Write(std::ostream& out) const {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf),
                 "# pmimask-masking-vocab v1\n# corpus\t{}\n# measure\t{}\n"
                 "# min_count\t{}\n# size\t{}\n",
                 provenance_.corpus_id, provenance_.measure,
                 provenance_.min_count, entries_.size());
  for (const auto& e : entries_) {
    fmt::format_to(std::back_inserter(buf), "{}\t{}\t{}\t{}\t{}\n",
                   JoinWords(e.ngram), e.n(), e.count, e.score, e.global_rank);
    if (buf.size() > (1 << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void MaskingVocab::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  Write(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

MaskingVocab MaskingVocab::Read(std::istream& in) {
  std::vector<MaskingVocabEntry> entries;
  VocabProvenance prov;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = SplitTabs(line);
    if (f.size() == 2 && f[0].starts_with("# ")) {
      if (f[0] == "# corpus") prov.corpus_id = std::string(f[1]);
      if (f[0] == "# measure") prov.measure = std::string(f[1]);
      if (f[0] == "# min_count") prov.min_count = ParseUintField(f[1], line_no);
      continue;
    }
    if (f.size() == 1 && line.starts_with("# pmimask-masking-vocab")) continue;
    if (f.size() != 5) {
      throw FormatError(fmt::format("line {}: expected 5 fields", line_no));
    }
    MaskingVocabEntry e;
    e.ngram = SplitSpaces(f[0]);
    if (ParseUintField(f[1], line_no) != e.ngram.size()) {
      throw FormatError(fmt::format("line {}: length mismatch", line_no));
    }
    e.count = ParseUintField(f[2], line_no);
    e.score = ParseDoubleField(f[3], line_no);
    e.global_rank = ParseUintField(f[4], line_no);
    entries.push_back(std::move(e));
  }
  try {
    return MaskingVocab(std::move(entries), std::move(prov));
  } catch (const InvalidArgumentError& e) {
    throw FormatError(e.what());
  }
}

MaskingVocab MaskingVocab::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Read(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::vector<CandidateRef> IntegratedOrder(const RankedLists& lists) {
  std::vector<CandidateRef> order;
  for (const auto& [n, list] : lists) {
    for (size_t i = 0; i < list.entries.size(); ++i) order.push_back({n, i});
  }
  std::sort(order.begin(), order.end(),
            [&](const CandidateRef& a, const CandidateRef& b) {
              const auto& la = lists.at(a.n);
              const auto& lb = lists.at(b.n);
              return Before(la, la.entries[a.index], lb, lb.entries[b.index]);
            });
  return order;
}

MaskingVocab IntegrateRankings(const RankedLists& lists, uint64_t size,
                               VocabProvenance provenance) {
  const auto order = IntegratedOrder(lists);
  const size_t m = std::min<uint64_t>(size, order.size());
  std::vector<MaskingVocabEntry> entries;
  entries.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    const auto& e = lists.at(order[i].n).entries[order[i].index];
    entries.push_back(MaskingVocabEntry{e.ngram, e.count, e.score, i + 1});
  }
  if (provenance.measure.empty() && !lists.empty()) {
    provenance.measure = std::string(MeasureName(lists.begin()->second.measure));
  }
  return MaskingVocab(std::move(entries), std::move(provenance));
}

std::vector<Occurrence> FindOccurrences(const MaskingVocab& vocab,
                                        std::span<const std::string> words,
                                        std::span<const uint8_t> eligible) {
  std::vector<Occurrence> out;
  if (vocab.empty()) return out;
  const size_t max_n = static_cast<size_t>(vocab.max_n());
  auto ok = [&](size_t i) { return eligible.empty() || eligible[i]; };
  std::string key;
  for (size_t i = 0; i < words.size(); ++i) {
    if (!ok(i)) continue;
    key = words[i];
    if (!vocab.IsPrefix(key)) continue;
    for (size_t n = 2; n <= max_n && i + n <= words.size(); ++n) {
      if (!ok(i + n - 1)) break;
      key.push_back(' ');
      key += words[i + n - 1];
      if (const auto idx = vocab.FindJoined(key)) {
        out.push_back({i, i + n, *idx});
      }
      if (!vocab.IsPrefix(key)) break;
    }
  }
  return out;
}

double Coverage(const MaskingVocab& vocab,
                const std::vector<std::vector<std::string>>& documents) {
  uint64_t covered = 0;
  uint64_t total = 0;
  std::vector<char> mark;
  for (const auto& doc : documents) {
    total += doc.size();
    mark.assign(doc.size(), 0);
    for (const auto& occ : FindOccurrences(vocab, doc)) {
      for (size_t i = occ.begin; i < occ.end; ++i) mark[i] = 1;
    }
    for (const char m : mark) covered += m;
  }
  return total == 0 ? 0.0
                    : static_cast<double>(covered) / static_cast<double>(total);
}

std::vector<LabeledNgram> ReadLabeledSet(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<LabeledNgram> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 2 || (f[1] != "0" && f[1] != "1") || f[0].empty()) {
      throw FormatError(
          fmt::format("{}: line {}: expected 'ngram<TAB>0|1'", path, line_no));
    }
    out.push_back({SplitSpaces(f[0]), f[1] == "1"});
  }
  return out;
}

double HarmonicBalance(double r, double c) {
  return r + c == 0.0 ? 0.0 : 2.0 * r * c / (r + c);
}

CalibrationReport CalibrateSize(const RankedLists& lists,
                                std::span<const LabeledNgram> labeled,
                                uint64_t step) {
  if (labeled.empty()) throw InvalidArgumentError("labeled set is empty");
  if (step == 0) throw InvalidArgumentError("calibration step must be > 0");
  CalibrationReport report;
  report.step = step;
  std::unordered_map<std::string, uint64_t> rank_of;
  for (const auto& l : labeled) {
    rank_of.emplace(JoinWords(l.ngram), 0);
    (l.is_collocation ? report.positives : report.negatives)++;
  }
  if (report.positives == 0 || report.negatives == 0) {
    throw InvalidArgumentError(
        "labeled set needs at least one positive and one negative example");
  }
  const auto order = IntegratedOrder(lists);
  report.total_candidates = order.size();
  for (size_t i = 0; i < order.size(); ++i) {
    const auto& e = lists.at(order[i].n).entries[order[i].index];
    const auto it = rank_of.find(JoinWords(e.ngram));
    if (it != rank_of.end()) it->second = i + 1;
  }
  std::vector<uint64_t> sizes;
  for (uint64_t m = step; m < order.size(); m += step) sizes.push_back(m);
  sizes.push_back(order.size());
  for (const uint64_t m : sizes) {
    CalibrationPoint p;
    p.size = m;
    for (const auto& l : labeled) {
      const uint64_t rank = rank_of.at(JoinWords(l.ngram));
      const bool inside = rank != 0 && rank <= m;
      if (l.is_collocation && inside) ++p.positives_in;
      if (!l.is_collocation && !inside) ++p.negatives_out;
    }
    p.r = static_cast<double>(p.positives_in) / static_cast<double>(report.positives);
    p.c = static_cast<double>(p.negatives_out) / static_cast<double>(report.negatives);
    p.f = HarmonicBalance(p.r, p.c);
    if (report.grid.empty() || p.f > report.chosen_f) {
      report.chosen_size = p.size;
      report.chosen_f = p.f;
    }
    report.grid.push_back(p);
  }
  return report;
}

void WriteCalibrationReport(const CalibrationReport& report, std::ostream& out) {
  fmt::memory_buffer buf;
  auto kv = [&](std::string_view k, auto v) {
    fmt::format_to(std::back_inserter(buf), "{}\t{}\n", k, v);
  };
  kv("step", report.step);
  kv("total_candidates", report.total_candidates);
  kv("positives", report.positives);
  kv("negatives", report.negatives);
  for (const auto& p : report.grid) {
    fmt::format_to(std::back_inserter(buf), "grid\t{}\t{}\t{}\t{}\n", p.size,
                   p.r, p.c, p.f);
  }
  kv("chosen_size", report.chosen_size);
  kv("chosen_f", report.chosen_f);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace pmimask
