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

#include "features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_set>

#include "error.hpp"
#include "json.hpp"

namespace dialseg {
namespace {

const std::unordered_set<std::string>& Pronouns() {
  static const std::unordered_set<std::string> words = {
      "he",   "him",  "his",   "himself", "she",    "her",       "hers",
      "herself", "they", "them", "their", "theirs", "themselves"};
  return words;
}

// Capitalised words that open turns far more often than they name anything.
const std::unordered_set<std::string>& NonReferring() {
  static const std::unordered_set<std::string> words = {
      "oh",    "okay", "ok",     "yeah",  "yes",    "hey",  "well",
      "um",    "uh",   "hi",     "hello", "wow",    "please", "thanks",
      "right", "look", "listen", "sorry", "alright", "huh", "hmm"};
  return words;
}

struct RawWord {
  std::string lower;
  bool capitalized;
};

std::vector<RawWord> CasedWords(std::string_view text) {
  std::vector<RawWord> out;
  std::string cur;
  bool cap = false;
  auto flush = [&] {
    if (!cur.empty()) out.push_back({std::move(cur), cap});
    cur.clear();
  };
  for (unsigned char c : text) {
    const bool alnum = std::isalnum(c) != 0 || c >= 0x80;
    if (!alnum) {
      flush();
      continue;
    }
    if (cur.empty()) cap = c >= 'A' && c <= 'Z';
    cur.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
  }
  flush();
  return out;
}

void CheckSameLength(const ScoreSeries& a, const ScoreSeries& b) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kInternal, "series length mismatch: " +
                                   std::to_string(a.size()) + " vs " +
                                   std::to_string(b.size()));
  }
}

}  // namespace

void FeatureConfig::Validate() const {
  if (!(boost > 1.0)) Fail(ErrorCode::kConfig, "speaker boost factor must be > 1");
  if (!(lexical_weight > 0.0) || !(speaker_weight > 0.0)) {
    Fail(ErrorCode::kConfig, "speaker-depth weights must be > 0");
  }
  if (!(coref_scale >= 0.0) || !std::isfinite(coref_scale)) {
    Fail(ErrorCode::kConfig, "coref scale must be a finite value >= 0");
  }
  if (coref && coref_source == CorefSource::kAnnotationFile && coref_file.empty()) {
    Fail(ErrorCode::kConfig, "coref annotation source requires a file path");
  }
}

SpanGapMap::SpanGapMap(const std::vector<Span>& spans,
                       std::size_t utterance_count)
    : utterance_count_(utterance_count), index_(utterance_count) {
  for (std::size_t j = 1; j < spans.size(); ++j) {
    if (spans[j].first < utterance_count) index_[spans[j].first] = j - 1;
  }
}

std::optional<std::size_t> SpanGapMap::ForUtteranceGap(std::size_t gap) const {
  if (gap == 0 || gap >= utterance_count_) return std::nullopt;
  return index_[gap];
}

ScoreSeries SpeakerIntroBoost(const ScoreSeries& depth,
                              const SpeakerTable& speakers,
                              const SpanGapMap& gaps, double factor) {
  if (!(factor > 1.0)) Fail(ErrorCode::kInvalidArgument, "boost factor must be > 1");
  std::set<std::size_t> boosted;
  for (const auto& [speaker, first] : speakers.first_appearance) {
    if (auto idx = gaps.ForUtteranceGap(first)) boosted.insert(*idx);
  }
  ScoreSeries out = depth;
  for (auto idx : boosted) {
    if (idx < out.values.size()) out.values[idx] *= factor;
  }
  return out;
}

ScoreSeries SpeakerDepthScores(const std::vector<Span>& spans, std::size_t k,
                               std::size_t smoothing_window,
                               std::size_t smoothing_rounds) {
  if (k < 1) Fail(ErrorCode::kInvalidArgument, "block size k must be >= 1");
  const std::size_t m = spans.size();
  ScoreSeries out{std::vector<double>(m > 1 ? m - 1 : 0, 0.0), SeriesKind::kDepth};
  if (m < 2) return out;

  std::set<std::string> speakers;
  for (const auto& s : spans) {
    for (const auto& [name, _] : s.speaker_counts) speakers.insert(name);
  }
  if (speakers.empty()) return out;

  // Prefix sums of turns per speaker and of all attributed turns.
  std::vector<std::size_t> total_prefix(m + 1, 0);
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t turns = 0;
    for (const auto& [_, c] : spans[j].speaker_counts) turns += c;
    total_prefix[j + 1] = total_prefix[j] + turns;
  }
  auto share = [&](const std::vector<std::size_t>& prefix, std::size_t first,
                   std::size_t last) {
    const std::size_t total = total_prefix[last + 1] - total_prefix[first];
    if (total == 0) return 0.0;
    return static_cast<double>(prefix[last + 1] - prefix[first]) /
           static_cast<double>(total);
  };

  std::vector<std::size_t> prefix(m + 1);
  for (const auto& speaker : speakers) {
    prefix[0] = 0;
    for (std::size_t j = 0; j < m; ++j) {
      auto it = spans[j].speaker_counts.find(speaker);
      prefix[j + 1] = prefix[j] + (it == spans[j].speaker_counts.end() ? 0 : it->second);
    }
    ScoreSeries sim{std::vector<double>(m - 1), SeriesKind::kLexical};
    for (std::size_t gap = 1; gap < m; ++gap) {
      const std::size_t left_first = gap > k ? gap - k : 0;
      const std::size_t right_last = std::min(m - 1, gap + k - 1);
      sim.values[gap - 1] = 1.0 - std::abs(share(prefix, left_first, gap - 1) -
                                           share(prefix, gap, right_last));
    }
    const auto depth =
        DepthScores(Smooth(sim, smoothing_window, smoothing_rounds));
    for (std::size_t i = 0; i < depth.size(); ++i) out.values[i] += depth[i];
  }
  for (auto& v : out.values) v /= static_cast<double>(speakers.size());
  return out;
}

ScoreSeries CombineDepth(const ScoreSeries& lexical_depth,
                         const ScoreSeries& speaker_depth,
                         double lexical_weight, double speaker_weight) {
  CheckSameLength(lexical_depth, speaker_depth);
  const auto lex = MinMaxNormalize(lexical_depth);
  const auto spk = MinMaxNormalize(speaker_depth);
  ScoreSeries out{std::vector<double>(lex.size()), SeriesKind::kCombined};
  const double total = lexical_weight + speaker_weight;
  for (std::size_t i = 0; i < lex.size(); ++i) {
    out.values[i] = (lexical_weight * lex[i] + speaker_weight * spk[i]) / total;
  }
  return out;
}

ScoreSeries QuestionSuppress(const ScoreSeries& depth,
                             const std::vector<TokenizedUtterance>& utterances,
                             const SpanGapMap& gaps) {
  ScoreSeries out = depth;
  for (std::size_t u = 0; u < utterances.size(); ++u) {
    if (!utterances[u].ends_with_question) continue;
    if (auto idx = gaps.ForUtteranceGap(u + 1); idx && *idx < out.size()) {
      out.values[*idx] = 0.0;
    }
  }
  return out;
}

ScoreSeries CorefSmooth(const ScoreSeries& depth,
                        const std::vector<CorefChain>& chains,
                        const SpanGapMap& gaps, double scale) {
  ScoreSeries out = depth;
  std::vector<bool> done(depth.size(), false);
  for (const auto& chain : chains) {
    std::vector<std::size_t> mentions = chain.mentions;
    std::sort(mentions.begin(), mentions.end());
    mentions.erase(std::unique(mentions.begin(), mentions.end()), mentions.end());
    if (mentions.size() < 2) {
      Warn("coreference chain '" + chain.chain_id +
           "' has fewer than two mentions; skipped");
      continue;
    }
    if (mentions.back() >= gaps.utterance_count()) {
      Fail(ErrorCode::kInvalidArgument,
           "coreference chain '" + chain.chain_id + "' mentions utterance " +
               std::to_string(mentions.back()) + " beyond the document");
    }
    std::vector<std::size_t> range;
    for (auto g = mentions.front() + 1; g <= mentions.back(); ++g) {
      if (auto idx = gaps.ForUtteranceGap(g); idx && *idx < depth.size()) {
        range.push_back(*idx);
      }
    }
    if (range.empty()) continue;
    const std::size_t lo = range.front();
    const std::size_t hi = range.back();
    for (auto idx : range) {
      if (done[idx]) continue;
      const std::size_t a = std::max(lo, idx > 0 ? idx - 1 : 0);
      const std::size_t b = std::min(hi, idx + 1);
      double sum = 0.0;
      for (auto j = a; j <= b; ++j) sum += depth[j];
      out.values[idx] = scale * sum / static_cast<double>(b - a + 1);
      done[idx] = true;
    }
  }
  return out;
}

std::vector<CorefChain> HeuristicChains(const std::vector<Utterance>& utterances,
                                        const StopList& stop_list,
                                        std::size_t window) {
  struct Open {
    std::string entity;
    std::vector<std::size_t> mentions;
  };
  std::vector<Open> chains;
  std::map<std::string, std::size_t> active;  // entity -> chain index
  std::optional<std::size_t> latest;          // chain of the latest mention
  std::size_t latest_utterance = 0;

  auto last_of = [&](std::size_t c) { return chains[c].mentions.back(); };

  for (std::size_t u = 0; u < utterances.size(); ++u) {
    for (const auto& word : CasedWords(utterances[u].text)) {
      if (Pronouns().count(word.lower)) {
        if (latest && latest_utterance + window >= u) {
          chains[*latest].mentions.push_back(u);
        }
        continue;
      }
      if (!word.capitalized || word.lower.size() < 2 ||
          stop_list.Contains(word.lower) || NonReferring().count(word.lower)) {
        continue;
      }
      auto it = active.find(word.lower);
      if (it != active.end() && last_of(it->second) + window >= u) {
        chains[it->second].mentions.push_back(u);
        latest = it->second;
      } else {
        chains.push_back({word.lower, {u}});
        active[word.lower] = chains.size() - 1;
        latest = chains.size() - 1;
      }
      latest_utterance = u;
    }
  }

  std::vector<CorefChain> out;
  for (auto& c : chains) {
    std::sort(c.mentions.begin(), c.mentions.end());
    c.mentions.erase(std::unique(c.mentions.begin(), c.mentions.end()),
                     c.mentions.end());
    if (c.mentions.size() < 2) continue;
    out.push_back({"h" + std::to_string(out.size()) + ":" + c.entity,
                   std::move(c.mentions)});
  }
  return out;
}

std::map<std::string, std::vector<CorefChain>> LoadCorefAnnotations(
    const std::string& path) {
  using nlohmann::json;
  const std::string content = ReadFile(path);
  std::map<std::string, std::vector<CorefChain>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    const std::string line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = path + ":" + std::to_string(line_no) + ": ";
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorCode::kParse, where + "invalid JSON at byte " + std::to_string(e.byte));
    }
    if (!rec.is_object() || !rec.contains("doc_id") || !rec["doc_id"].is_string() ||
        !rec.contains("mentions") || !rec["mentions"].is_array()) {
      Fail(ErrorCode::kParse, where + "expected {doc_id, chain_id, mentions}");
    }
    CorefChain chain;
    if (auto id = rec.find("chain_id"); id != rec.end()) {
      chain.chain_id = id->is_string() ? id->get<std::string>() : id->dump();
    }
    for (const auto& m : rec["mentions"]) {
      if (!m.is_number_unsigned()) {
        Fail(ErrorCode::kParse, where + "mentions must be non-negative integers");
      }
      chain.mentions.push_back(m.get<std::size_t>());
    }
    std::sort(chain.mentions.begin(), chain.mentions.end());
    out[rec["doc_id"].get<std::string>()].push_back(std::move(chain));
  }
  return out;
}

ScoreSeries ApplyFeatures(const TilingResult& tiling,
                          const Transcript& transcript,
                          const TilingConfig& tiling_config,
                          const FeatureConfig& features,
                          const std::vector<CorefChain>& chains) {
  ScoreSeries series = tiling.depth;
  if (!features.any() || tiling.spans.size() < 2) return series;
  features.Validate();

  const SpanGapMap gaps(tiling.spans, transcript.size());
  if (features.speaker_depth) {
    series = CombineDepth(
        series,
        SpeakerDepthScores(tiling.spans, tiling_config.k,
                           tiling_config.smoothing_window,
                           tiling_config.smoothing_rounds),
        features.lexical_weight, features.speaker_weight);
  }
  if (features.speaker_intro) {
    series = SpeakerIntroBoost(series, BuildSpeakerTable(transcript), gaps,
                               features.boost);
  }
  if (features.coref) {
    series = CorefSmooth(series, chains, gaps, features.coref_scale);
  }
  if (features.questions) {
    series = QuestionSuppress(series, tiling.utterances, gaps);
  }
  return series;
}

}  // namespace dialseg
