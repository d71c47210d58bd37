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

#include "commands.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "pmimask/collocation.h"
#include "pmimask/corpus.h"
#include "pmimask/engine.h"
#include "pmimask/error.h"
#include "pmimask/mask_vocab.h"
#include "pmimask/ngram_stats.h"
#include "pmimask/parallel.h"

namespace pmimask::cli {

namespace {

struct PipelineConfig {
  std::vector<std::string> corpus;
  std::string counts;
  std::string token_vocab;
  std::string masking_vocab;
  std::string labels;
  std::string out;
  std::string format = "auto";
  std::string measure = "pmi";
  std::string scheme = "pmi";
  std::string corpus_id;
  std::string word_internal_punct;
  int max_n = kMaxNgramOrder;
  uint64_t min_count_count = 1;
  uint64_t min_count = 11;
  uint64_t vocab_size = 800000;
  uint64_t step = 50000;
  int shards = 1;
  int threads = 0;
  uint64_t seed = 0;
  SchemeConfig scheme_config;
};

int Threads(const PipelineConfig& c) {
  return c.threads > 0 ? c.threads : DefaultThreadCount();
}

PreTokenizerOptions PretokenizerOptions(const PipelineConfig& c) {
  PreTokenizerOptions o;
  o.word_internal_punctuation = c.word_internal_punct;
  return o;
}

// Writes to a sibling temporary file and renames it into place once the
// stream has been flushed without error.
template <typename Fn>
void WriteAtomically(const std::string& path, Fn&& write) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    write(out);
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw IoError("write failed: " + path);
    }
  }
  std::filesystem::rename(tmp, path);
}

template <typename Fn>
void WriteOutput(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("write to standard output failed");
    return;
  }
  WriteAtomically(path, write);
}

void Stat(std::string_view key, const auto& value) {
  fmt::print("{}\t{}\n", key, value);
}

void RequireFile(const std::string& path, std::string_view what) {
  if (path.empty()) throw InvalidArgumentError(std::string(what) + " is required");
  if (!std::filesystem::exists(path)) {
    throw IoError(std::string(what) + " not found: " + path);
  }
}

void RequireFiles(const std::vector<std::string>& paths, std::string_view what) {
  if (paths.empty()) throw InvalidArgumentError(std::string(what) + " is required");
  for (const auto& p : paths) RequireFile(p, what);
}

CountsFormat FormatFor(const PipelineConfig& c) {
  if (c.format == "binary") return CountsFormat::kBinary;
  if (c.format == "text") return CountsFormat::kText;
  return c.out.ends_with(".bin") ? CountsFormat::kBinary : CountsFormat::kText;
}

NgramCounts LoadPrunedCounts(const PipelineConfig& c) {
  RequireFile(c.counts, "--counts");
  NgramCounts counts = ReadCountsFile(c.counts);
  if (c.min_count > counts.min_count()) counts = Prune(std::move(counts), c.min_count);
  return counts;
}

int CmdCount(const PipelineConfig& c) {
  RequireFiles(c.corpus, "--corpus");
  if (c.out.empty()) throw InvalidArgumentError("--out is required");
  if (c.shards < 1) throw InvalidArgumentError("--shards must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const Corpus corpus = Corpus::Load(c.corpus);
  CountOptions options;
  options.max_n = c.max_n;
  options.min_count = c.min_count_count;
  options.shards = c.shards;
  options.threads = Threads(c);
  options.pretokenizer = PretokenizerOptions(c);
  const NgramCounts counts = CountCorpus(corpus.documents(), options);
  WriteAtomically(c.out, [&](std::ostream& out) {
    WriteCounts(counts, out, FormatFor(c));
  });
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  Stat("documents", corpus.documents().size());
  Stat("bytes", corpus.bytes());
  for (int n = 1; n <= counts.max_n(); ++n) {
    Stat(fmt::format("total_{}", n), counts.total(n));
    Stat(fmt::format("entries_{}", n), counts.entries(n).size());
  }
  Stat("seconds", fmt::format("{:.3f}", elapsed.count()));
  return 0;
}

int CmdScore(const PipelineConfig& c) {
  const NgramCounts counts = LoadPrunedCounts(c);
  const CollocationScorer scorer(counts);
  WriteOutput(c.out, [&](std::ostream& out) {
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf),
                   "# n\tngram\tcount\tnaive_pmi\tpmi_n\targmin_segmentation\n");
    for (int n = 2; n <= counts.max_n(); ++n) {
      for (const auto& e : counts.entries(n)) {
        const auto r = scorer.Score(std::span(e.key.ids).first(n));
        const auto words = counts.ToWords(e.key, n);
        fmt::format_to(std::back_inserter(buf), "{}\t{}\t{}\t{}\t{}\t{}\n", n,
                       counts.Join(e.key, n), e.count, r.naive_pmi, r.pmi_n,
                       r.argmin.Render(words));
        if (buf.size() > (1 << 20)) {
          out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
          buf.clear();
        }
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  });
  return 0;
}

int CmdBuildVocab(const PipelineConfig& c) {
  if (c.out.empty()) throw InvalidArgumentError("--out is required");
  const RankingMeasure measure = ParseMeasure(c.measure);
  const NgramCounts counts = LoadPrunedCounts(c);
  const RankedLists lists = RankCandidates(counts, measure, Threads(c));
  size_t candidates = 0;
  for (const auto& [n, list] : lists) candidates += list.entries.size();
  if (c.vocab_size > candidates) {
    fmt::print(stderr,
               "warning: --vocab-size {} exceeds {} candidates; keeping all\n",
               c.vocab_size, candidates);
  }
  VocabProvenance prov;
  prov.corpus_id = c.corpus_id.empty()
                       ? std::filesystem::path(c.counts).filename().string()
                       : c.corpus_id;
  prov.measure = std::string(MeasureName(measure));
  prov.min_count = std::max(c.min_count, counts.min_count());
  const MaskingVocab vocab = IntegrateRankings(lists, c.vocab_size, prov);
  WriteAtomically(c.out, [&](std::ostream& out) { vocab.Write(out); });
  Stat("candidates", candidates);
  Stat("entries", vocab.size());
  std::map<int, size_t> per_length;
  for (const auto& e : vocab.entries()) ++per_length[e.n()];
  for (const auto& [n, k] : per_length) Stat(fmt::format("entries_{}", n), k);
  return 0;
}

int CmdCalibrate(const PipelineConfig& c) {
  RequireFile(c.labels, "--labels");
  const NgramCounts counts = LoadPrunedCounts(c);
  const RankedLists lists =
      RankCandidates(counts, ParseMeasure(c.measure), Threads(c));
  const auto labeled = ReadLabeledSet(c.labels);
  const CalibrationReport report = CalibrateSize(lists, labeled, c.step);
  WriteOutput(c.out, [&](std::ostream& out) { WriteCalibrationReport(report, out); });
  return 0;
}

MaskingEngine LoadEngine(const PipelineConfig& c) {
  RequireFile(c.token_vocab, "--token-vocab");
  const Scheme scheme = ParseScheme(c.scheme);
  std::optional<std::string> mv;
  if (!c.masking_vocab.empty()) {
    RequireFile(c.masking_vocab, "--masking-vocab");
    mv = c.masking_vocab;
  } else if (scheme == Scheme::kPmi) {
    throw InvalidArgumentError("--scheme pmi requires --masking-vocab");
  }
  return MaskingEngine::Load(c.token_vocab, mv, scheme, c.scheme_config,
                             PretokenizerOptions(c));
}

// Masks every non-blank corpus line in order, handing records to `sink` in
// sequence-index order.
template <typename Sink>
void MaskCorpus(const MaskingEngine& engine, const Corpus& corpus,
                const PipelineConfig& c, Sink&& sink) {
  const auto& lines = corpus.lines();
  constexpr size_t kBatch = 4096;
  std::vector<MaskedRecord> records;
  for (size_t first = 0; first < lines.size(); first += kBatch) {
    const size_t n = std::min(kBatch, lines.size() - first);
    records.assign(n, MaskedRecord{});
    ParallelFor(n, Threads(c), [&](size_t i) {
      const auto ids = engine.EncodeText(lines[first + i]);
      records[i] = engine.MaskIds(ids, c.seed, first + i);
    });
    for (const auto& r : records) sink(r);
  }
}

int CmdMask(const PipelineConfig& c) {
  RequireFiles(c.corpus, "--corpus");
  if (c.out.empty()) throw InvalidArgumentError("--out is required");
  const MaskingEngine engine = LoadEngine(c);
  const Corpus corpus = Corpus::Load(c.corpus);
  const auto start = std::chrono::steady_clock::now();
  uint64_t tokens = 0;
  uint64_t sequences = 0;
  WriteAtomically(c.out, [&](std::ostream& out) {
    out << engine.HeaderJson(c.seed) << '\n';
    MaskCorpus(engine, corpus, c, [&](const MaskedRecord& r) {
      out << RecordToJson(r) << '\n';
      tokens += r.input_ids.size();
      ++sequences;
    });
  });
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  Stat("sequences", sequences);
  Stat("tokens", tokens);
  Stat("seconds", fmt::format("{:.3f}", elapsed.count()));
  Stat("tokens_per_second",
       fmt::format("{:.0f}", tokens / std::max(1e-9, elapsed.count())));
  return 0;
}

int CmdAnalyze(const PipelineConfig& c) {
  RequireFiles(c.corpus, "--corpus");
  const MaskingEngine engine = LoadEngine(c);
  const Corpus corpus = Corpus::Load(c.corpus);
  uint64_t sequences = 0, tokens = 0, maskable = 0, selected = 0, units = 0;
  std::map<size_t, uint64_t> unit_words, unit_tokens;
  std::map<char, uint64_t> actions;
  std::vector<std::vector<std::string>> words;
  MaskCorpus(engine, corpus, c, [&](const MaskedRecord& r) {
    ++sequences;
    tokens += r.input_ids.size();
    maskable += r.maskable_tokens;
    selected += r.positions.size();
    for (const auto& u : r.units) {
      ++units;
      ++unit_words[u.words];
      ++unit_tokens[u.token_end - u.token_begin];
      ++actions[ActionCode(u.action)];
    }
    words.push_back(engine.token_vocab().FromIds(r.input_ids).words);
  });
  const double coverage = engine.Coverage(words);
  WriteOutput(c.out, [&](std::ostream& out) {
    auto kv = [&](std::string_view k, const auto& v) {
      fmt::print(out, "{}\t{}\n", k, v);
    };
    kv("scheme", SchemeName(engine.scheme()));
    kv("seed", c.seed);
    kv("sequences", sequences);
    kv("tokens", tokens);
    kv("maskable_tokens", maskable);
    kv("selected_tokens", selected);
    kv("selected_fraction",
       maskable ? static_cast<double>(selected) / static_cast<double>(maskable)
                : 0.0);
    kv("units", units);
    for (const auto& [k, v] : unit_words) {
      fmt::print(out, "unit_words\t{}\t{}\n", k, v);
    }
    for (const auto& [k, v] : unit_tokens) {
      fmt::print(out, "unit_tokens\t{}\t{}\n", k, v);
    }
    const double total_units = std::max<double>(1.0, static_cast<double>(units));
    kv("action_mask", actions['M'] / total_units);
    kv("action_random", actions['R'] / total_units);
    kv("action_keep", actions['K'] / total_units);
    kv("coverage", coverage);
  });
  return 0;
}

void AddSchemeOptions(CLI::App* cmd, PipelineConfig& c) {
  cmd->add_option("--token-vocab", c.token_vocab, "WordPiece vocabulary file")
      ->required();
  cmd->add_option("--masking-vocab", c.masking_vocab,
                  "masking vocabulary (required for --scheme pmi)");
  cmd->add_option("--scheme", c.scheme, "random-token|whole-word|random-span|pmi")
      ->check(CLI::IsMember({"random-token", "whole-word", "random-span", "pmi"}));
  cmd->add_option("--budget", c.scheme_config.budget, "fraction of tokens to select");
  cmd->add_option("--mask-prob", c.scheme_config.mask_prob);
  cmd->add_option("--random-prob", c.scheme_config.random_prob);
  cmd->add_option("--keep-prob", c.scheme_config.keep_prob);
  cmd->add_option("--span-p", c.scheme_config.span_geometric_p,
                  "geometric parameter of span lengths");
  cmd->add_option("--span-cap", c.scheme_config.span_cap_words,
                  "maximum span length in words");
  cmd->add_option("--seed", c.seed, "global seed");
}

// A config file belongs to the top-level app, so --config may appear after
// the subcommand but is parsed as if given first.
std::vector<std::string> HoistConfig(int argc, char** argv) {
  std::vector<std::string> front, rest;
  for (int i = 1; i < argc; ++i) {
    const std::string_view a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      front.emplace_back(a);
      front.emplace_back(argv[++i]);
    } else if (a.starts_with("--config=")) {
      front.emplace_back(a);
    } else {
      rest.emplace_back(a);
    }
  }
  front.insert(front.end(), rest.begin(), rest.end());
  // CLI11 consumes the vector from the back.
  return {front.rbegin(), front.rend()};
}

}  // namespace

int Run(int argc, char** argv) {
  CLI::App app{"pmimask: collocation extraction and MLM masking plans"};
  app.set_config("--config", "",
                 "TOML/INI config file with one [section] per subcommand; "
                 "flags override it");
  app.require_subcommand(1);
  PipelineConfig c;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    cmd->add_option("--word-internal-punct", c.word_internal_punct,
                    "punctuation characters kept inside words");
  };

  auto* count = app.add_subcommand("count", "count word n-grams");
  count->add_option("--corpus", c.corpus, "corpus text files")->required();
  count->add_option("--out", c.out, "counts file")->required();
  count->add_option("--max-n", c.max_n)->check(CLI::Range(1, kMaxNgramOrder));
  count->add_option("--min-count", c.min_count_count,
                    "drop n >= 2 entries below this count (1 = exact)");
  count->add_option("--shards", c.shards)->check(CLI::PositiveNumber);
  count->add_option("--format", c.format)->check(CLI::IsMember({"auto", "text", "binary"}));
  common(count);

  auto* score = app.add_subcommand("score", "dump collocation scores");
  score->add_option("--counts", c.counts)->required();
  score->add_option("--min-count", c.min_count);
  score->add_option("--out", c.out, "output file (default stdout)");
  common(score);

  auto* build = app.add_subcommand("build-vocab", "build a masking vocabulary");
  build->add_option("--counts", c.counts)->required();
  build->add_option("--measure", c.measure)
      ->check(CLI::IsMember({"pmi", "naive-pmi", "frequency"}));
  build->add_option("--min-count", c.min_count);
  build->add_option("--vocab-size", c.vocab_size);
  build->add_option("--corpus-id", c.corpus_id);
  build->add_option("--out", c.out)->required();
  common(build);

  auto* calibrate = app.add_subcommand("calibrate", "choose a vocabulary size");
  calibrate->add_option("--counts", c.counts)->required();
  calibrate->add_option("--labels", c.labels, "ngram<TAB>0|1 file")->required();
  calibrate->add_option("--measure", c.measure)
      ->check(CLI::IsMember({"pmi", "naive-pmi", "frequency"}));
  calibrate->add_option("--min-count", c.min_count);
  calibrate->add_option("--step", c.step)->check(CLI::PositiveNumber);
  calibrate->add_option("--out", c.out);
  common(calibrate);

  auto* mask = app.add_subcommand("mask", "write masked sequences");
  mask->add_option("--corpus", c.corpus)->required();
  mask->add_option("--out", c.out)->required();
  AddSchemeOptions(mask, c);
  common(mask);

  auto* analyze = app.add_subcommand("analyze", "masking statistics");
  analyze->add_option("--corpus", c.corpus)->required();
  analyze->add_option("--out", c.out);
  AddSchemeOptions(analyze, c);
  common(analyze);

  try {
    app.parse(HoistConfig(argc, argv));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (*count) return CmdCount(c);
    if (*score) return CmdScore(c);
    if (*build) return CmdBuildVocab(c);
    if (*calibrate) return CmdCalibrate(c);
    if (*mask) return CmdMask(c);
    if (*analyze) return CmdAnalyze(c);
  } catch (const std::exception& e) {
    fmt::print(stderr, "pmimask: error: {}\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace pmimask::cli
