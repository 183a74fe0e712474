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

// Dialogue features that reshape the depth series before boundary selection.
//
// Composition order, fixed: speaker-depth blend, speaker-introduction boost,
// coreference smoothing, question suppression.

#ifndef DIALSEG_FEATURES_HPP_
#define DIALSEG_FEATURES_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "preprocess.hpp"
#include "tiling.hpp"

namespace dialseg {

enum class CorefSource { kHeuristic, kAnnotationFile };

struct FeatureConfig {
  bool speaker_depth = false;
  double lexical_weight = 2.0;
  double speaker_weight = 1.0;

  bool speaker_intro = false;
  double boost = 1.5;

  bool questions = false;

  bool coref = false;
  CorefSource coref_source = CorefSource::kHeuristic;
  std::string coref_file;
  double coref_scale = 0.5;
  std::size_t coref_window = 5;  // utterances searched for an antecedent

  bool any() const { return speaker_depth || speaker_intro || questions || coref; }
  void Validate() const;
};

struct CorefChain {
  std::string chain_id;
  std::vector<std::size_t> mentions;  // utterance indices, ascending
};

// Utterance gap -> index into a span-gap series. Utterance gap g has a series
// position only when some span starts at utterance g.
class SpanGapMap {
 public:
  SpanGapMap(const std::vector<Span>& spans, std::size_t utterance_count);

  std::optional<std::size_t> ForUtteranceGap(std::size_t gap) const;
  std::size_t utterance_count() const { return utterance_count_; }

 private:
  std::size_t utterance_count_;
  std::vector<std::optional<std::size_t>> index_;
};

// Multiplies the depth at the gap preceding each speaker's first turn by
// `factor`. A gap is boosted at most once per call.
ScoreSeries SpeakerIntroBoost(const ScoreSeries& depth,
                              const SpeakerTable& speakers,
                              const SpanGapMap& gaps, double factor);

// Per speaker: similarity 1 - |p_left - p_right| of the speaker's share of
// turns in the blocks around each gap, smoothed, turned into depth scores.
// Returns the mean over speakers (all zeros when there are none).
ScoreSeries SpeakerDepthScores(const std::vector<Span>& spans, std::size_t k,
                               std::size_t smoothing_window,
                               std::size_t smoothing_rounds);

// (lexical_weight * L + speaker_weight * S) / (lexical_weight + speaker_weight)
// on min-max normalised inputs.
ScoreSeries CombineDepth(const ScoreSeries& lexical_depth,
                         const ScoreSeries& speaker_depth,
                         double lexical_weight = 2.0,
                         double speaker_weight = 1.0);

// Zeroes the depth at the gap right after every question.
ScoreSeries QuestionSuppress(const ScoreSeries& depth,
                             const std::vector<TokenizedUtterance>& utterances,
                             const SpanGapMap& gaps);

// Gaps strictly inside a chain (after its first mention, up to its last) get
// the window-3 mean of the original series over the chain's gaps, times
// `scale`. Gaps covered by several chains are rewritten once.
ScoreSeries CorefSmooth(const ScoreSeries& depth,
                        const std::vector<CorefChain>& chains,
                        const SpanGapMap& gaps, double scale = 0.5);

// Recency heuristic: a third-person pronoun links to the most recent
// capitalised non-stop-word mention within the last `window` utterances.
// Returns chains with at least two distinct utterances.
std::vector<CorefChain> HeuristicChains(const std::vector<Utterance>& utterances,
                                        const StopList& stop_list,
                                        std::size_t window = 5);

// JSONL sidecar of {doc_id, chain_id, mentions: [utterance indices]}.
std::map<std::string, std::vector<CorefChain>> LoadCorefAnnotations(
    const std::string& path);

// Applies the enabled features to the tiling result and returns the series
// used for boundary selection. `chains` is only read when coref is enabled.
ScoreSeries ApplyFeatures(const TilingResult& tiling,
                          const Transcript& transcript,
                          const TilingConfig& tiling_config,
                          const FeatureConfig& features,
                          const std::vector<CorefChain>& chains);

}  // namespace dialseg

#endif  // DIALSEG_FEATURES_HPP_
