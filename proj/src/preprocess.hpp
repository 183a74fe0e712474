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

#ifndef DIALSEG_PREPROCESS_HPP_
#define DIALSEG_PREPROCESS_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpus.hpp"

namespace dialseg {

// Version tag of the built-in stop list; bump whenever its contents change.
inline constexpr std::string_view kStopListVersion = "en-1";

class StopList {
 public:
  // The built-in English list of function words.
  static std::shared_ptr<const StopList> Default();
  // One word per line; blank lines and lines starting with '#' are ignored.
  static std::shared_ptr<const StopList> FromFile(const std::string& path);

  explicit StopList(std::unordered_set<std::string> words)
      : words_(std::move(words)) {}

  bool Contains(std::string_view word) const {
    return words_.count(std::string(word)) != 0;
  }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

struct PreprocessOptions {
  bool stemming = false;
  std::shared_ptr<const StopList> stop_list = StopList::Default();
};

struct TokenizedUtterance {
  std::size_t utterance_index = 0;
  std::string speaker;
  std::vector<std::string> tokens;          // lowercased, original order
  std::vector<std::string> content_tokens;  // stop words removed, maybe stemmed
  bool ends_with_question = false;
};

// Lowercased maximal runs of ASCII alphanumerics; bytes >= 0x80 count as word
// characters so UTF-8 words stay intact. "don't" -> {"don", "t"}.
std::vector<std::string> SplitWords(std::string_view text);

// True when the text, after dropping trailing whitespace, quotes and closing
// brackets, ends with '?'.
bool EndsWithQuestion(std::string_view text);

TokenizedUtterance Tokenize(const Utterance& utterance,
                            const PreprocessOptions& options);
std::vector<TokenizedUtterance> TokenizeAll(const Transcript& transcript,
                                            const PreprocessOptions& options);

struct Span {
  std::size_t span_index = 0;
  std::size_t first = 0;  // inclusive utterance range
  std::size_t last = 0;
  std::size_t token_count = 0;
  std::map<std::string, std::size_t> speaker_counts;  // turns per speaker

  std::size_t utterance_count() const { return last - first + 1; }
  bool operator==(const Span&) const = default;
};

// Greedy left-to-right grouping: the current span is closed before adding
// utterance u whenever |count - w| <= |count + tokens(u) - w|. Span sizing
// counts all tokens, stop words included.
std::vector<Span> BuildSpans(const std::vector<TokenizedUtterance>& utterances,
                             std::size_t w);

// Same rule on bare token counts; used by BuildSpans and handy in tests.
std::vector<std::pair<std::size_t, std::size_t>> GroupByTokenCount(
    const std::vector<std::size_t>& token_counts, std::size_t w);

}  // namespace dialseg

#endif  // DIALSEG_PREPROCESS_HPP_
