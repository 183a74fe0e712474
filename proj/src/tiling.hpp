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

// TextTiling core: lexical cohesion scores between adjacent blocks of spans,
// smoothing, valley depth, and boundary selection.
//
// A ScoreSeries over m scoring units holds m-1 values; values[j] belongs to
// unit gap j+1, the gap between unit j and unit j+1.

#ifndef DIALSEG_TILING_HPP_
#define DIALSEG_TILING_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "preprocess.hpp"
#include "segmentation.hpp"

namespace dialseg {

enum class SeriesKind { kLexical, kSmoothed, kDepth, kCombined };

struct ScoreSeries {
  std::vector<double> values;
  SeriesKind kind = SeriesKind::kLexical;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const ScoreSeries&) const = default;
};

enum class LexicalMethod { kBlockComparison, kVocabIntroduction, kCombined };
enum class Similarity { kJaccard, kCosine };

LexicalMethod ParseLexicalMethod(std::string_view tag);
std::string_view LexicalMethodName(LexicalMethod method);
Similarity ParseSimilarity(std::string_view tag);
std::string_view SimilarityName(Similarity similarity);

inline constexpr std::size_t kUnboundedMemory =
    std::numeric_limits<std::size_t>::max();

struct TilingConfig {
  std::size_t w = 12;
  std::size_t k = 6;
  std::size_t memory = 20;  // utterances; kUnboundedMemory = never forget
  std::size_t smoothing_window = 3;
  std::size_t smoothing_rounds = 1;
  double threshold_sigma = 0.5;  // +inf keeps every depth peak
  LexicalMethod method = LexicalMethod::kBlockComparison;
  Similarity similarity = Similarity::kJaccard;

  // Throws Error(kConfig) when an invariant is violated.
  void Validate() const;
};

// Interns content tokens of one document as dense ids.
class Vocabulary {
 public:
  std::uint32_t Intern(const std::string& token);
  std::size_t size() const { return ids_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
};

using TokenBag = std::vector<std::uint32_t>;

// Content-token bag of every span.
std::vector<TokenBag> SpanBags(const std::vector<TokenizedUtterance>& utterances,
                               const std::vector<Span>& spans,
                               Vocabulary& vocabulary);

// Gap i compares units [max(0, i-k), i-1] against [i, min(m-1, i+k-1)].
// Jaccard: shared types over union of types. Cosine: term-frequency cosine.
// A block without content tokens scores 0.
ScoreSeries BlockComparisonScores(const std::vector<TokenBag>& units,
                                  std::size_t k,
                                  Similarity similarity = Similarity::kJaccard);

struct NoveltyCount {
  std::size_t fresh = 0;  // occurrences of types absent from recent memory
  std::size_t total = 0;
};

// Per-utterance novelty. An occurrence is fresh when its type appears neither
// earlier in the same utterance nor in any of the `memory` preceding
// utterances.
std::vector<NoveltyCount> UtteranceNovelty(
    const std::vector<TokenizedUtterance>& utterances, std::size_t memory);

// Gap i looks at units [max(0, i-k), min(m-1, i+k-1)] and scores
// 1 - fresh/total, so that low values mark shifts as with block comparison.
// An interval without content tokens scores 1.
ScoreSeries VocabIntroductionScores(const std::vector<NoveltyCount>& units,
                                    std::size_t k);
ScoreSeries VocabIntroductionScores(
    const std::vector<TokenizedUtterance>& utterances,
    const std::vector<Span>& spans, std::size_t k, std::size_t memory);

// `rounds` passes of a centred moving average; edge windows are truncated.
ScoreSeries Smooth(const ScoreSeries& series, std::size_t window,
                   std::size_t rounds);

// dp(i) = ((hl(i) - s(i)) + (hr(i) - s(i))) / 2 where hl/hr are the peaks
// reached by climbing left/right while values do not decrease.
ScoreSeries DepthScores(const ScoreSeries& series);

// Rescales to [0, 1]; a constant series maps to all zeros.
ScoreSeries MinMaxNormalize(const ScoreSeries& series);

// Indices into `depth` of strict interior local maxima (a plateau counts once,
// at its leftmost index) with dp >= mean - threshold_sigma * stddev.
std::vector<std::size_t> SelectPeaks(const ScoreSeries& depth,
                                     double threshold_sigma);

// Maps selected span gaps to utterance gaps (first utterance of the right
// span).
Segmentation SelectBoundaries(const ScoreSeries& depth,
                              const std::vector<Span>& spans,
                              std::size_t utterance_count,
                              double threshold_sigma);

// Everything the dialogue features need from the lexical stage.
struct TilingResult {
  std::vector<TokenizedUtterance> utterances;
  std::vector<Span> spans;
  ScoreSeries lexical;  // raw lexical scores of the configured method
  ScoreSeries depth;    // depth scores used for selection
};

TilingResult TileDocument(const Transcript& transcript,
                          const TilingConfig& config,
                          const PreprocessOptions& preprocess);

// Tiling core without dialogue features.
Segmentation SegmentTiling(const Transcript& transcript,
                           const TilingConfig& config,
                           const PreprocessOptions& preprocess);

}  // namespace dialseg

#endif  // DIALSEG_TILING_HPP_
