// Copyright 2026 The dialseg Authors
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

// Experiment orchestration: segmenter variants, baselines, configuration,
// corpus-level runs and parameter sweeps.

#ifndef DIALSEG_HARNESS_HPP_
#define DIALSEG_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpus.hpp"
#include "eval.hpp"
#include "features.hpp"
#include "preprocess.hpp"
#include "segmentation.hpp"
#include "tiling.hpp"

namespace dialseg {

inline constexpr std::string_view kVersion = "0.1.0";

// A segmenter named the way result tables name rows: "BC", "BC+SD",
// "BC+VI+Co+SD", "OG", "Random". Tokens are case-insensitive: bc, vi, sd,
// si, q, co, s (stemming), og, random.
struct Variant {
  enum class Kind { kTiling, kOgTextTiling, kRandom };
  Kind kind = Kind::kTiling;
  LexicalMethod method = LexicalMethod::kBlockComparison;
  bool speaker_depth = false;
  bool speaker_intro = false;
  bool questions = false;
  bool coref = false;
  bool stemming = false;

  std::string Label() const;  // canonical, e.g. "BC+VI+Co+SD"
  std::string Slug() const;   // file-system friendly, e.g. "bc+vi+co+sd"
};

Variant ParseVariant(std::string_view text);

struct PipelineConfig {
  TilingConfig tiling;
  FeatureConfig features;
  PreprocessOptions preprocess;
};

// Overrides method, features and stemming of `base` with the variant's.
// The variant described by the pipeline's own method/feature/stemming settings.
Variant VariantFromPipeline(const PipelineConfig& pipeline);

PipelineConfig ConfigureVariant(const PipelineConfig& base, const Variant& variant);

// Tiling core plus enabled dialogue features. `annotated_chains` is used when
// coreference is enabled with an annotation-file source; the heuristic
// source derives chains from the transcript.
Segmentation SegmentDialogue(const Transcript& transcript,
                             const PipelineConfig& config,
                             const std::vector<CorefChain>& annotated_chains = {});

// Fixed w-token pseudo-sentences that ignore utterance boundaries, cosine
// block similarity, no dialogue features; boundaries re-anchored to the
// nearest utterance gap.
Segmentation RunOgTextTiling(const Transcript& transcript,
                             const TilingConfig& config,
                             const PreprocessOptions& preprocess);

// Draws b uniformly from {0, ..., n-1}, then marks each gap independently
// with probability b / n. Deterministic for a given generator state.
Segmentation RandomBaseline(std::size_t n, std::mt19937_64& rng);

// Seed of one document's generator, independent of processing order.
std::uint64_t DocumentSeed(std::uint64_t seed, std::string_view doc_id,
                           std::size_t iteration);

struct ExperimentConfig {
  std::vector<std::string> corpus_paths;
  CorpusFormat format = CorpusFormat::kNativeJsonl;
  std::string include_docs;  // ECMAScript regex on doc_id; empty = all
  std::vector<std::string> variants;  // empty = method/features/stemming
                                      // settings as one variant
  PipelineConfig pipeline;
  std::string stoplist_path;  // empty = built-in list
  EvalOptions eval;
  std::uint64_t seed = 42;
  std::size_t best_of = 1;
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::string output_dir;

  // Applies one setting given as text, using the CLI flag names ("k",
  // "threshold-sigma", "features", ...). Throws Error(kConfig).
  void Set(std::string_view key, std::string_view value);
  // Applies every key of a JSON object file.
  void LoadJsonFile(const std::string& path);
  void LoadJson(const std::string& text, const std::string& source_name);
  std::string ToJson() const;
  void Validate() const;
};

// Keys accepted by ExperimentConfig::Set.
const std::vector<std::string>& ConfigKeys();

// Loads all corpus paths, applies the doc filter, rejects duplicate doc ids.
std::vector<Transcript> LoadExperimentCorpus(const ExperimentConfig& config);

struct VariantRun {
  Variant variant;
  std::vector<BoundaryRecord> predictions;  // sorted by doc_id
  std::vector<EvalReport> reports;          // sorted by doc_id
  EvalReport summary;
  std::size_t chosen_iteration = 0;         // random baseline best-of
  bool has_summary = false;
};

// Segments every document with one variant. Documents with fewer than two
// utterances are skipped with a warning.
std::vector<BoundaryRecord> SegmentCorpus(
    const std::vector<Transcript>& corpus, const Variant& variant,
    const ExperimentConfig& config, std::size_t iteration = 0);

// Segments and evaluates; random variants honour best_of.
VariantRun RunVariant(const std::vector<Transcript>& corpus,
                      const Variant& variant, const ExperimentConfig& config);

std::vector<BoundaryRecord> GoldRecords(const std::vector<Transcript>& corpus);

// Rows = variants; columns F1, Fk per tolerance, Pk; values x100, 2 decimals.
std::string FormatReportTsv(const std::vector<VariantRun>& runs,
                            const EvalOptions& eval);
std::string FormatReportPretty(const std::vector<VariantRun>& runs,
                               const EvalOptions& eval);
std::string FormatPerDocumentTsv(const VariantRun& run, const EvalOptions& eval);

// How much question suppression moved boundaries: a variant with Q against
// the same variant without it.
struct QuestionEffect {
  std::string label;
  std::string compared_to;
  std::size_t changed_documents = 0;
  std::size_t changed_boundaries = 0;  // symmetric difference, summed
};

std::vector<QuestionEffect> QuestionEffects(const std::vector<Transcript>& corpus,
                                            const std::vector<VariantRun>& runs,
                                            const ExperimentConfig& config);

struct ExperimentResult {
  std::vector<VariantRun> runs;
  std::vector<QuestionEffect> question_effects;
  std::string report_tsv;
  std::string report_pretty;
  std::string manifest_json;
};

// Runs every configured variant. When config.output_dir is set, writes
//   <out>/gold.jsonl, <out>/<variant>/boundaries.jsonl,
//   <out>/<variant>/per_document.tsv, <out>/report.tsv, <out>/report.txt,
//   <out>/manifest.json
// Variants with Q get a note in report.txt saying how many boundaries Q moved.
ExperimentResult RunExperiment(const ExperimentConfig& config);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

// Parses "key=v1,v2,v3".
SweepAxis ParseSweepAxis(std::string_view text);

struct SweepResult {
  std::vector<std::pair<std::vector<std::string>, ExperimentResult>> points;
  std::string index_tsv;
};

// Cartesian product of the axes; point i is written to <out>/sweep_<iii>/ and
// <out>/sweep_index.tsv links each point to its manifest.
SweepResult RunSweep(const ExperimentConfig& config,
                     const std::vector<SweepAxis>& axes);

// FNV-1a 64-bit, used for corpus content hashes in manifests.
std::uint64_t Fnv1a64(std::string_view data);

// Runs fn(i) for i in [0, count) on up to `threads` workers; rethrows the
// first exception.
void ParallelFor(std::size_t count, std::size_t threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace dialseg

#endif  // DIALSEG_HARNESS_HPP_
