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

#include "tiling.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "error.hpp"

namespace dialseg {
namespace {

struct BlockRange {
  std::size_t first;
  std::size_t last;  // inclusive
};

// Left and right blocks around unit gap `gap` (1-based).
std::pair<BlockRange, BlockRange> Blocks(std::size_t gap, std::size_t units,
                                         std::size_t k) {
  const std::size_t left_first = gap > k ? gap - k : 0;
  const std::size_t right_last = std::min(units - 1, gap + k - 1);
  return {{left_first, gap - 1}, {gap, right_last}};
}

double Jaccard(const std::vector<TokenBag>& units, BlockRange left,
               BlockRange right) {
  std::unordered_set<std::uint32_t> lt;
  std::unordered_set<std::uint32_t> rt;
  for (auto u = left.first; u <= left.last; ++u) lt.insert(units[u].begin(), units[u].end());
  for (auto u = right.first; u <= right.last; ++u) rt.insert(units[u].begin(), units[u].end());
  if (lt.empty() || rt.empty()) return 0.0;
  std::size_t shared = 0;
  for (auto t : lt) shared += rt.count(t);
  const std::size_t uni = lt.size() + rt.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(uni);
}

double Cosine(const std::vector<TokenBag>& units, BlockRange left,
              BlockRange right) {
  std::unordered_map<std::uint32_t, double> lf;
  std::unordered_map<std::uint32_t, double> rf;
  for (auto u = left.first; u <= left.last; ++u) {
    for (auto t : units[u]) lf[t] += 1.0;
  }
  for (auto u = right.first; u <= right.last; ++u) {
    for (auto t : units[u]) rf[t] += 1.0;
  }
  if (lf.empty() || rf.empty()) return 0.0;
  double dot = 0.0;
  double ln = 0.0;
  double rn = 0.0;
  for (const auto& [t, c] : lf) {
    ln += c * c;
    if (auto it = rf.find(t); it != rf.end()) dot += c * it->second;
  }
  for (const auto& [t, c] : rf) rn += c * c;
  return dot / std::sqrt(ln * rn);
}

}  // namespace

LexicalMethod ParseLexicalMethod(std::string_view tag) {
  if (tag == "bc" || tag == "block-comparison") return LexicalMethod::kBlockComparison;
  if (tag == "vi" || tag == "vocab-introduction") return LexicalMethod::kVocabIntroduction;
  if (tag == "bc+vi" || tag == "combined") return LexicalMethod::kCombined;
  Fail(ErrorCode::kConfig, "unknown method '" + std::string(tag) +
                               "' (expected bc, vi or bc+vi)");
}

std::string_view LexicalMethodName(LexicalMethod method) {
  switch (method) {
    case LexicalMethod::kBlockComparison: return "bc";
    case LexicalMethod::kVocabIntroduction: return "vi";
    case LexicalMethod::kCombined: return "bc+vi";
  }
  return "bc";
}

Similarity ParseSimilarity(std::string_view tag) {
  if (tag == "jaccard") return Similarity::kJaccard;
  if (tag == "cosine") return Similarity::kCosine;
  Fail(ErrorCode::kConfig, "unknown similarity '" + std::string(tag) +
                               "' (expected jaccard or cosine)");
}

std::string_view SimilarityName(Similarity similarity) {
  return similarity == Similarity::kJaccard ? "jaccard" : "cosine";
}

void TilingConfig::Validate() const {
  if (w < 1) Fail(ErrorCode::kConfig, "w must be >= 1");
  if (k < 1) Fail(ErrorCode::kConfig, "k must be >= 1");
  if (smoothing_window < 1 || smoothing_window % 2 == 0) {
    Fail(ErrorCode::kConfig, "smoothing window must be odd and >= 1");
  }
  if (std::isnan(threshold_sigma)) {
    Fail(ErrorCode::kConfig, "threshold sigma must be a number");
  }
}

std::uint32_t Vocabulary::Intern(const std::string& token) {
  auto [it, inserted] =
      ids_.emplace(token, static_cast<std::uint32_t>(ids_.size()));
  return it->second;
}

std::vector<TokenBag> SpanBags(const std::vector<TokenizedUtterance>& utterances,
                               const std::vector<Span>& spans,
                               Vocabulary& vocabulary) {
  std::vector<TokenBag> bags;
  bags.reserve(spans.size());
  for (const auto& s : spans) {
    TokenBag bag;
    for (auto u = s.first; u <= s.last; ++u) {
      for (const auto& tok : utterances[u].content_tokens) {
        bag.push_back(vocabulary.Intern(tok));
      }
    }
    bags.push_back(std::move(bag));
  }
  return bags;
}

ScoreSeries BlockComparisonScores(const std::vector<TokenBag>& units,
                                  std::size_t k, Similarity similarity) {
  if (k < 1) Fail(ErrorCode::kInvalidArgument, "block size k must be >= 1");
  ScoreSeries out{{}, SeriesKind::kLexical};
  if (units.size() < 2) return out;
  out.values.reserve(units.size() - 1);
  for (std::size_t gap = 1; gap < units.size(); ++gap) {
    auto [left, right] = Blocks(gap, units.size(), k);
    out.values.push_back(similarity == Similarity::kJaccard
                             ? Jaccard(units, left, right)
                             : Cosine(units, left, right));
  }
  return out;
}

std::vector<NoveltyCount> UtteranceNovelty(
    const std::vector<TokenizedUtterance>& utterances, std::size_t memory) {
  std::unordered_map<std::string, std::size_t> last_seen;
  std::vector<NoveltyCount> out(utterances.size());
  for (std::size_t u = 0; u < utterances.size(); ++u) {
    for (const auto& tok : utterances[u].content_tokens) {
      auto it = last_seen.find(tok);
      bool fresh = true;
      if (it != last_seen.end()) {
        // Seen in this utterance, or within the memory window before it.
        const std::size_t age = u - it->second;
        fresh = age != 0 && (memory == kUnboundedMemory ? false : age > memory);
      }
      out[u].fresh += fresh ? 1 : 0;
      out[u].total += 1;
      last_seen[tok] = u;
    }
  }
  return out;
}

ScoreSeries VocabIntroductionScores(const std::vector<NoveltyCount>& units,
                                    std::size_t k) {
  if (k < 1) Fail(ErrorCode::kInvalidArgument, "block size k must be >= 1");
  ScoreSeries out{{}, SeriesKind::kLexical};
  if (units.size() < 2) return out;
  for (std::size_t gap = 1; gap < units.size(); ++gap) {
    auto [left, right] = Blocks(gap, units.size(), k);
    std::size_t fresh = 0;
    std::size_t total = 0;
    for (auto u = left.first; u <= right.last; ++u) {
      fresh += units[u].fresh;
      total += units[u].total;
    }
    out.values.push_back(total == 0 ? 1.0
                                    : 1.0 - static_cast<double>(fresh) /
                                                static_cast<double>(total));
  }
  return out;
}

ScoreSeries VocabIntroductionScores(
    const std::vector<TokenizedUtterance>& utterances,
    const std::vector<Span>& spans, std::size_t k, std::size_t memory) {
  const auto per_utt = UtteranceNovelty(utterances, memory);
  std::vector<NoveltyCount> per_span;
  per_span.reserve(spans.size());
  for (const auto& s : spans) {
    NoveltyCount c;
    for (auto u = s.first; u <= s.last; ++u) {
      c.fresh += per_utt[u].fresh;
      c.total += per_utt[u].total;
    }
    per_span.push_back(c);
  }
  return VocabIntroductionScores(per_span, k);
}

ScoreSeries Smooth(const ScoreSeries& series, std::size_t window,
                   std::size_t rounds) {
  if (window < 1 || window % 2 == 0) {
    Fail(ErrorCode::kInvalidArgument, "smoothing window must be odd and >= 1");
  }
  ScoreSeries out{series.values, SeriesKind::kSmoothed};
  const std::size_t half = window / 2;
  const std::size_t n = out.values.size();
  std::vector<double> next(n);
  for (std::size_t r = 0; r < rounds && window > 1; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i > half ? i - half : 0;
      const std::size_t hi = std::min(n - 1, i + half);
      double sum = 0.0;
      for (auto j = lo; j <= hi; ++j) sum += out.values[j];
      next[i] = sum / static_cast<double>(hi - lo + 1);
    }
    out.values.swap(next);
  }
  return out;
}

ScoreSeries DepthScores(const ScoreSeries& series) {
  const auto& s = series.values;
  ScoreSeries out{std::vector<double>(s.size(), 0.0), SeriesKind::kDepth};
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t l = i;
    while (l > 0 && s[l - 1] >= s[l]) --l;
    std::size_t r = i;
    while (r + 1 < s.size() && s[r + 1] >= s[r]) ++r;
    out.values[i] = ((s[l] - s[i]) + (s[r] - s[i])) / 2.0;
  }
  return out;
}

ScoreSeries MinMaxNormalize(const ScoreSeries& series) {
  ScoreSeries out{series.values, series.kind};
  if (out.values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (auto& v : out.values) v = range > 0.0 ? (v - min) / range : 0.0;
  return out;
}

std::vector<std::size_t> SelectPeaks(const ScoreSeries& depth,
                                     double threshold_sigma) {
  const auto& d = depth.values;
  const std::size_t n = d.size();
  std::vector<std::size_t> peaks;
  if (n < 3) return peaks;

  double cutoff = -std::numeric_limits<double>::infinity();
  if (!(std::isinf(threshold_sigma) && threshold_sigma > 0)) {
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : d) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    cutoff = (sd == 0.0 || threshold_sigma == 0.0)
                 ? mean
                 : mean - threshold_sigma * sd;
  }

  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && d[j + 1] == d[i]) ++j;
    const bool rises = i > 0 && d[i - 1] < d[i];
    const bool falls = j + 1 < n && d[j + 1] < d[i];
    if (rises && falls && d[i] >= cutoff) peaks.push_back(i);
    i = j + 1;
  }
  return peaks;
}

Segmentation SelectBoundaries(const ScoreSeries& depth,
                              const std::vector<Span>& spans,
                              std::size_t utterance_count,
                              double threshold_sigma) {
  if (spans.size() < 2) return Segmentation{utterance_count, {}};
  if (depth.size() + 1 != spans.size()) {
    Fail(ErrorCode::kInternal, "depth series length does not match span count");
  }
  std::vector<std::size_t> gaps;
  for (auto p : SelectPeaks(depth, threshold_sigma)) {
    gaps.push_back(spans[p + 1].first);
  }
  return Segmentation::Make(utterance_count, std::move(gaps));
}

TilingResult TileDocument(const Transcript& transcript,
                          const TilingConfig& config,
                          const PreprocessOptions& preprocess) {
  config.Validate();
  TilingResult r;
  r.utterances = TokenizeAll(transcript, preprocess);
  r.spans = BuildSpans(r.utterances, config.w);

  auto depth_of = [&](const ScoreSeries& lexical) {
    return DepthScores(
        Smooth(lexical, config.smoothing_window, config.smoothing_rounds));
  };

  Vocabulary vocab;
  const auto bags = SpanBags(r.utterances, r.spans, vocab);
  switch (config.method) {
    case LexicalMethod::kBlockComparison:
      r.lexical = BlockComparisonScores(bags, config.k, config.similarity);
      r.depth = depth_of(r.lexical);
      break;
    case LexicalMethod::kVocabIntroduction:
      r.lexical = VocabIntroductionScores(r.utterances, r.spans, config.k,
                                          config.memory);
      r.depth = depth_of(r.lexical);
      break;
    case LexicalMethod::kCombined: {
      r.lexical = BlockComparisonScores(bags, config.k, config.similarity);
      const auto bc = MinMaxNormalize(depth_of(r.lexical));
      const auto vi = MinMaxNormalize(depth_of(VocabIntroductionScores(
          r.utterances, r.spans, config.k, config.memory)));
      r.depth = ScoreSeries{std::vector<double>(bc.size()), SeriesKind::kCombined};
      for (std::size_t i = 0; i < bc.size(); ++i) {
        r.depth.values[i] = (bc[i] + vi[i]) / 2.0;
      }
      break;
    }
  }
  return r;
}

Segmentation SegmentTiling(const Transcript& transcript,
                           const TilingConfig& config,
                           const PreprocessOptions& preprocess) {
  const auto r = TileDocument(transcript, config, preprocess);
  return SelectBoundaries(r.depth, r.spans, transcript.size(),
                          config.threshold_sigma);
}

}  // namespace dialseg
