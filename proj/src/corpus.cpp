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

#include "corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "error.hpp"
#include "json.hpp"

namespace dialseg {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view Trim(std::string_view s) {
  const auto* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& NativeKeys() {
  static const std::set<std::string> keys = {"doc_id", "index",   "speaker",
                                             "text",   "is_note", "scene_id"};
  return keys;
}

[[noreturn]] void ParseFail(const std::string& source, std::size_t line,
                            const std::string& what) {
  Fail(ErrorCode::kParse,
       source + ":" + std::to_string(line) + ": " + what);
}

std::string StringOrEmpty(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) return {};
  return it->get<std::string>();
}

bool IsBracketed(std::string_view text) {
  text = Trim(text);
  if (text.size() < 2) return false;
  return (text.front() == '(' && text.back() == ')') ||
         (text.front() == '[' && text.back() == ']');
}

void ParseCmEpisode(const json& episode, std::size_t ordinal,
                    const std::string& source,
                    std::vector<Transcript>& out) {
  std::string episode_id = StringOrEmpty(episode, "episode_id");
  if (episode_id.empty()) episode_id = "episode_" + std::to_string(ordinal);
  auto scenes = episode.find("scenes");
  if (scenes == episode.end() || !scenes->is_array()) {
    Fail(ErrorCode::kParse,
         source + ": episode '" + episode_id + "' has no scenes array");
  }

  std::vector<RawEntry> entries;
  std::size_t scene_ordinal = 0;
  for (const auto& scene : *scenes) {
    std::string scene_id = StringOrEmpty(scene, "scene_id");
    if (scene_id.empty()) {
      scene_id = episode_id + "_c" + std::to_string(scene_ordinal);
    }
    ++scene_ordinal;
    auto utts = scene.find("utterances");
    if (utts == scene.end() || !utts->is_array()) continue;
    for (const auto& u : *utts) {
      std::vector<std::string> speakers;
      if (auto sp = u.find("speakers"); sp != u.end() && sp->is_array()) {
        for (const auto& s : *sp) {
          if (s.is_string() && !s.get<std::string>().empty()) {
            speakers.push_back(s.get<std::string>());
          }
        }
      }
      const std::string transcript = StringOrEmpty(u, "transcript");
      const std::string with_note = StringOrEmpty(u, "transcript_with_note");

      if (speakers.empty()) {
        if (Trim(transcript).empty()) {
          if (!Trim(with_note).empty()) {
            entries.push_back({"", with_note, true, scene_id});
          }
        } else if (IsBracketed(transcript)) {
          entries.push_back({"", transcript, true, scene_id});
        } else {
          entries.push_back({"", transcript, false, scene_id});
        }
        continue;
      }

      if (!Trim(with_note).empty() && Trim(with_note) != Trim(transcript)) {
        entries.push_back({"", with_note, true, scene_id});
      }
      std::string speaker = speakers.front();
      for (std::size_t i = 1; i < speakers.size(); ++i) {
        speaker += " & " + speakers[i];
      }
      entries.push_back({std::move(speaker), transcript, false, scene_id});
    }
  }
  out.push_back(DeriveGoldBoundaries(episode_id, entries));
}

void ParseCmSeason(const json& season, const std::string& source,
                   std::vector<Transcript>& out) {
  if (season.contains("scenes")) {
    ParseCmEpisode(season, out.size(), source, out);
    return;
  }
  auto episodes = season.find("episodes");
  if (episodes == season.end() || !episodes->is_array()) {
    Fail(ErrorCode::kParse,
         source + ": expected a season object with an 'episodes' array");
  }
  for (const auto& episode : *episodes) {
    ParseCmEpisode(episode, out.size(), source, out);
  }
}

std::vector<Transcript> LoadFile(const std::string& path, CorpusFormat format) {
  const std::string content = ReadFile(path);
  switch (format) {
    case CorpusFormat::kNativeJsonl:
      return ParseNativeJsonl(content, path);
    case CorpusFormat::kCharacterMiningJson:
      return ParseCharacterMiningJson(content, path);
  }
  Fail(ErrorCode::kInternal, "unhandled corpus format");
}

}  // namespace

SpeakerTable BuildSpeakerTable(const Transcript& transcript) {
  SpeakerTable table;
  for (const auto& u : transcript.utterances) {
    if (u.speaker.empty()) continue;
    if (table.first_appearance.emplace(u.speaker, u.index).second) {
      table.speakers.push_back(u.speaker);
    }
  }
  return table;
}

Transcript DeriveGoldBoundaries(std::string doc_id,
                                const std::vector<RawEntry>& raw_entries) {
  Transcript t;
  t.doc_id = std::move(doc_id);
  std::set<std::size_t> gold;
  bool pending_note = false;

  for (const auto& e : raw_entries) {
    if (e.is_note) {
      t.notes.push_back({t.utterances.size(), e.text, e.scene_id});
      pending_note = true;
      continue;
    }
    if (Trim(e.text).empty()) continue;

    const std::size_t idx = t.utterances.size();
    if (idx > 0 && pending_note) gold.insert(idx);
    pending_note = false;

    if (t.scene_spans.empty() || t.scene_spans.back().scene_id != e.scene_id) {
      if (idx > 0) gold.insert(idx);
      t.scene_spans.push_back({idx, idx, e.scene_id});
    } else {
      t.scene_spans.back().last = idx;
    }
    t.utterances.push_back({idx, e.speaker, e.text, false});
  }

  if (t.utterances.empty()) {
    Fail(ErrorCode::kEmptyDocument,
         "document '" + t.doc_id + "' contains no speech turns");
  }
  t.gold_boundaries.assign(gold.begin(), gold.end());
  return t;
}

CorpusFormat ParseCorpusFormat(std::string_view tag) {
  if (tag == "native-jsonl" || tag == "native") return CorpusFormat::kNativeJsonl;
  if (tag == "character-mining-json" || tag == "character-mining") {
    return CorpusFormat::kCharacterMiningJson;
  }
  Fail(ErrorCode::kConfig, "unknown corpus format '" + std::string(tag) +
                               "' (expected native-jsonl or "
                               "character-mining-json)");
}

std::string_view CorpusFormatName(CorpusFormat format) {
  return format == CorpusFormat::kNativeJsonl ? "native-jsonl"
                                              : "character-mining-json";
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Transcript> LoadCorpus(const std::string& path,
                                   CorpusFormat format) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    Fail(ErrorCode::kIo, "corpus path '" + path + "' does not exist");
  }
  if (!fs::is_directory(path, ec)) return LoadFile(path, format);

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".json" || ext == ".jsonl") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  std::vector<Transcript> out;
  for (const auto& f : files) {
    auto docs = LoadFile(f, format);
    std::move(docs.begin(), docs.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<Transcript> ParseNativeJsonl(std::string_view content,
                                         const std::string& source_name) {
  std::vector<Transcript> out;
  std::set<std::string> seen_docs;
  std::string current_doc;
  std::vector<RawEntry> entries;
  bool have_doc = false;

  auto flush = [&] {
    if (!have_doc) return;
    try {
      out.push_back(DeriveGoldBoundaries(current_doc, entries));
    } catch (const Error& e) {
      Fail(e.code(), source_name + ": " + e.what());
    }
    entries.clear();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (Trim(line).empty()) continue;

    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      ParseFail(source_name, line_no,
                "invalid JSON at byte " + std::to_string(e.byte) + " of line");
    }
    if (!rec.is_object()) ParseFail(source_name, line_no, "record is not an object");
    for (const auto& [key, _] : rec.items()) {
      if (!NativeKeys().count(key)) {
        ParseFail(source_name, line_no, "unexpected key '" + key + "'");
      }
    }
    for (const auto& key : NativeKeys()) {
      if (!rec.contains(key)) {
        ParseFail(source_name, line_no, "missing key '" + key + "'");
      }
    }
    if (!rec["doc_id"].is_string() || !rec["speaker"].is_string() ||
        !rec["text"].is_string() || !rec["scene_id"].is_string()) {
      ParseFail(source_name, line_no,
                "doc_id, speaker, text and scene_id must be strings");
    }
    if (!rec["is_note"].is_boolean()) {
      ParseFail(source_name, line_no, "is_note must be a boolean");
    }
    if (!rec["index"].is_number_unsigned()) {
      ParseFail(source_name, line_no, "index must be a non-negative integer");
    }

    auto doc_id = rec["doc_id"].get<std::string>();
    if (!have_doc || doc_id != current_doc) {
      flush();
      if (!seen_docs.insert(doc_id).second) {
        ParseFail(source_name, line_no,
                  "doc_id '" + doc_id + "' reappears after another document");
      }
      current_doc = doc_id;
      have_doc = true;
    }
    const auto index = rec["index"].get<std::size_t>();
    if (index != entries.size()) {
      ParseFail(source_name, line_no,
                "expected index " + std::to_string(entries.size()) + ", got " +
                    std::to_string(index));
    }
    entries.push_back({rec["speaker"].get<std::string>(),
                       rec["text"].get<std::string>(),
                       rec["is_note"].get<bool>(),
                       rec["scene_id"].get<std::string>()});
  }
  flush();
  return out;
}

std::vector<Transcript> ParseCharacterMiningJson(
    std::string_view content, const std::string& source_name) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, source_name + ": invalid JSON at byte " +
                                std::to_string(e.byte));
  }
  std::vector<Transcript> out;
  if (root.is_array()) {
    for (const auto& season : root) ParseCmSeason(season, source_name, out);
  } else if (root.is_object()) {
    ParseCmSeason(root, source_name, out);
  } else {
    Fail(ErrorCode::kParse, source_name + ": unexpected top-level JSON value");
  }
  return out;
}

std::string ToNativeJsonl(const std::vector<Transcript>& transcripts) {
  std::string out;
  for (const auto& t : transcripts) {
    std::size_t ordinal = 0;
    std::size_t note_i = 0;
    std::size_t scene_i = 0;
    auto emit = [&](const std::string& speaker, const std::string& text,
                    bool is_note, const std::string& scene_id) {
      json rec = {{"doc_id", t.doc_id},   {"index", ordinal++},
                  {"speaker", speaker},   {"text", text},
                  {"is_note", is_note},   {"scene_id", scene_id}};
      out += rec.dump();
      out += '\n';
    };
    for (std::size_t u = 0; u <= t.utterances.size(); ++u) {
      while (note_i < t.notes.size() && t.notes[note_i].position == u) {
        const auto& n = t.notes[note_i++];
        emit("", n.text, true, n.scene_id);
      }
      if (u == t.utterances.size()) break;
      while (scene_i + 1 < t.scene_spans.size() &&
             t.scene_spans[scene_i].last < u) {
        ++scene_i;
      }
      const std::string scene =
          t.scene_spans.empty() ? std::string() : t.scene_spans[scene_i].scene_id;
      emit(t.utterances[u].speaker, t.utterances[u].text, false, scene);
    }
  }
  return out;
}

void WriteNativeJsonl(const std::vector<Transcript>& transcripts,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << ToNativeJsonl(transcripts);
}

}  // namespace dialseg
