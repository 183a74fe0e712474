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

// Dialogue data model and corpus loaders.
//
// Boundary convention used throughout the library: boundary (gap) g separates
// utterance g-1 from utterance g, so valid gaps of an n-utterance document are
// 1..n-1.

#ifndef DIALSEG_CORPUS_HPP_
#define DIALSEG_CORPUS_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dialseg {

struct Utterance {
  std::size_t index = 0;
  std::string speaker;  // empty for narration
  std::string text;
  bool is_note = false;

  bool operator==(const Utterance&) const = default;
};

// A stage direction kept out of the segmentable sequence. `position` is the
// index of the utterance it precedes (== utterance count for trailing notes).
struct Note {
  std::size_t position = 0;
  std::string text;
  std::string scene_id;

  bool operator==(const Note&) const = default;
};

struct SceneSpan {
  std::size_t first = 0;  // inclusive utterance range
  std::size_t last = 0;
  std::string scene_id;

  bool operator==(const SceneSpan&) const = default;
};

struct Transcript {
  std::string doc_id;
  std::vector<Utterance> utterances;
  std::vector<std::size_t> gold_boundaries;  // sorted, unique, within [1, n-1]
  std::vector<SceneSpan> scene_spans;
  std::vector<Note> notes;

  std::size_t size() const { return utterances.size(); }
  bool operator==(const Transcript&) const = default;
};

struct SpeakerTable {
  std::vector<std::string> speakers;  // order of first appearance
  std::map<std::string, std::size_t> first_appearance;
};

// Narration lines (empty speaker) are not part of the table.
SpeakerTable BuildSpeakerTable(const Transcript& transcript);

// One entry of a source document before notes are separated out.
struct RawEntry {
  std::string speaker;
  std::string text;
  bool is_note = false;
  std::string scene_id;
};

// Splits notes from speech turns and derives gold boundaries: a boundary at
// the gap preceding the first turn after each note, and at every scene change.
// Notes before the first or after the last turn produce no boundary; adjacent
// notes collapse into one. Turns whose text is blank are dropped.
// Throws Error(kEmptyDocument) when no speech turn remains.
Transcript DeriveGoldBoundaries(std::string doc_id,
                                const std::vector<RawEntry>& raw_entries);

enum class CorpusFormat { kNativeJsonl, kCharacterMiningJson };

CorpusFormat ParseCorpusFormat(std::string_view tag);
std::string_view CorpusFormatName(CorpusFormat format);

// Loads a file, or every *.json / *.jsonl file of a directory in name order.
std::vector<Transcript> LoadCorpus(const std::string& path, CorpusFormat format);

std::vector<Transcript> ParseNativeJsonl(std::string_view content,
                                         const std::string& source_name);

// Character Mining episode JSON (season -> episodes -> scenes -> utterances).
// One transcript per episode, doc_id = episode_id. An utterance entry is a
// note when it has no speakers and its only text is a bracketed direction or
// lives in `transcript_with_note`. A speech turn whose `transcript_with_note`
// carries text beyond `transcript` is treated as preceded by a note.
std::vector<Transcript> ParseCharacterMiningJson(std::string_view content,
                                                 const std::string& source_name);

// Native-jsonl serialization; reloading the output yields equal transcripts.
std::string ToNativeJsonl(const std::vector<Transcript>& transcripts);
void WriteNativeJsonl(const std::vector<Transcript>& transcripts,
                      const std::string& path);

std::string ReadFile(const std::string& path);

}  // namespace dialseg

#endif  // DIALSEG_CORPUS_HPP_
