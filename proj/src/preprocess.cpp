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

#include "preprocess.hpp"

#include <algorithm>
#include <fstream>

#include "error.hpp"
#include "stemmer.hpp"

namespace dialseg {
namespace {

// Contractions do not appear here: the tokenizer splits "don't" into "don"
// and "t", both of which are listed.
constexpr const char* kEnglishStopWords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your",
    "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she",
    "her", "hers", "herself", "it", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "whose", "this",
    "that", "these", "those", "am", "is", "are", "was", "were", "be", "been",
    "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a",
    "an", "the", "and", "but", "if", "or", "because", "as", "until", "while",
    "of", "at", "by", "for", "with", "about", "against", "between", "into",
    "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again",
    "further", "then", "once", "here", "there", "when", "where", "why", "how",
    "all", "any", "both", "each", "few", "more", "most", "other", "some",
    "such", "no", "nor", "not", "only", "own", "same", "so", "than", "too",
    "very", "can", "will", "just", "should", "now", "would", "could", "might",
    "must", "shall", "may", "us", "also", "upon", "yet", "though", "ever",
    "every", "via", "per", "s", "t", "d", "ll", "m", "o", "re", "ve", "y",
    "don", "ain", "aren", "couldn", "didn", "doesn", "hadn", "hasn", "haven",
    "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn", "wasn",
    "weren", "won", "wouldn", "let", "got", "get", "gets", "getting", "go",
    "goes", "going", "gonna", "wanna", "gotta", "said", "says", "say",
};

bool IsWordByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::shared_ptr<const StopList> StopList::Default() {
  static const auto list = std::make_shared<const StopList>(
      std::unordered_set<std::string>(std::begin(kEnglishStopWords),
                                      std::end(kEnglishStopWords)));
  return list;
}

std::shared_ptr<const StopList> StopList::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open stop list '" + path + "'");
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string word = line.substr(b, e - b + 1);
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
      return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    });
    words.insert(std::move(word));
  }
  return std::make_shared<const StopList>(std::move(words));
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (IsWordByte(c)) {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                         : static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool EndsWithQuestion(std::string_view text) {
  std::size_t end = text.size();
  while (end > 0) {
    const char c = text[end - 1];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '"' ||
        c == '\'' || c == ')' || c == ']' || c == '}') {
      --end;
      continue;
    }
    // UTF-8 closing quotes U+2019 and U+201D: E2 80 99 / E2 80 9D.
    if (end >= 3 && static_cast<unsigned char>(text[end - 3]) == 0xE2 &&
        static_cast<unsigned char>(text[end - 2]) == 0x80 &&
        (static_cast<unsigned char>(text[end - 1]) == 0x99 ||
         static_cast<unsigned char>(text[end - 1]) == 0x9D)) {
      end -= 3;
      continue;
    }
    break;
  }
  return end > 0 && text[end - 1] == '?';
}

TokenizedUtterance Tokenize(const Utterance& utterance,
                            const PreprocessOptions& options) {
  TokenizedUtterance out;
  out.utterance_index = utterance.index;
  out.speaker = utterance.speaker;
  out.tokens = SplitWords(utterance.text);
  out.ends_with_question = EndsWithQuestion(utterance.text);
  const StopList& stops =
      options.stop_list ? *options.stop_list : *StopList::Default();
  for (const auto& tok : out.tokens) {
    if (stops.Contains(tok)) continue;
    out.content_tokens.push_back(options.stemming ? PorterStem(tok) : tok);
  }
  return out;
}

std::vector<TokenizedUtterance> TokenizeAll(const Transcript& transcript,
                                            const PreprocessOptions& options) {
  std::vector<TokenizedUtterance> out;
  out.reserve(transcript.utterances.size());
  for (const auto& u : transcript.utterances) out.push_back(Tokenize(u, options));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> GroupByTokenCount(
    const std::vector<std::size_t>& token_counts, std::size_t w) {
  if (w == 0) Fail(ErrorCode::kInvalidArgument, "span size w must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  if (token_counts.empty()) return groups;

  const auto dist = [w](std::size_t count) {
    return count > w ? count - w : w - count;
  };
  std::size_t first = 0;
  std::size_t count = 0;
  for (std::size_t u = 0; u < token_counts.size(); ++u) {
    if (u > first && dist(count) <= dist(count + token_counts[u])) {
      groups.emplace_back(first, u - 1);
      first = u;
      count = 0;
    }
    count += token_counts[u];
  }
  groups.emplace_back(first, token_counts.size() - 1);
  return groups;
}

std::vector<Span> BuildSpans(const std::vector<TokenizedUtterance>& utterances,
                             std::size_t w) {
  std::vector<std::size_t> counts;
  counts.reserve(utterances.size());
  for (const auto& u : utterances) counts.push_back(u.tokens.size());

  std::vector<Span> spans;
  for (const auto& [first, last] : GroupByTokenCount(counts, w)) {
    Span s;
    s.span_index = spans.size();
    s.first = first;
    s.last = last;
    for (std::size_t u = first; u <= last; ++u) {
      s.token_count += counts[u];
      if (!utterances[u].speaker.empty()) ++s.speaker_counts[utterances[u].speaker];
    }
    spans.push_back(std::move(s));
  }
  return spans;
}

}  // namespace dialseg
