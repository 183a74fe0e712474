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

#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "json.hpp"
#include "stemmer.hpp"

namespace dialseg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view TrimView(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitList(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  if (TrimView(s).empty()) return out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    auto item = TrimView(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (!item.empty()) out.emplace_back(item);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string Join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value,
                           std::string_view expected) {
  Fail(ErrorCode::kConfig, "invalid value '" + std::string(value) + "' for '" +
                               std::string(key) + "' (expected " +
                               std::string(expected) + ")");
}

std::size_t ParseCount(std::string_view key, std::string_view value) {
  const auto v = TrimView(value);
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
      })) {
    BadValue(key, value, "a non-negative integer");
  }
  try {
    return static_cast<std::size_t>(std::stoull(std::string(v)));
  } catch (const std::exception&) {
    BadValue(key, value, "a non-negative integer");
  }
}

double ParseReal(std::string_view key, std::string_view value) {
  const auto v = Lower(TrimView(value));
  if (v == "inf" || v == "+inf" || v == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || std::isnan(d)) BadValue(key, value, "a number");
    return d;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    BadValue(key, value, "a number");
  }
}

bool ParseSwitch(std::string_view key, std::string_view value) {
  const auto v = Lower(TrimView(value));
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  BadValue(key, value, "on or off");
}

std::string FormatReal(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string Hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
  return buf;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform integer in [0, bound) by rejection; independent of the standard
// library's distribution implementations.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  while (true) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << text;
}

std::vector<std::string> CorpusFiles(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> inner;
      for (const auto& e : fs::directory_iterator(p)) {
        const auto ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".json" || ext == ".jsonl")) {
          inner.push_back(e.path().string());
        }
      }
      std::sort(inner.begin(), inner.end());
      files.insert(files.end(), inner.begin(), inner.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

std::vector<Variant> EffectiveVariants(const ExperimentConfig& config) {
  std::vector<Variant> out;
  if (config.variants.empty()) {
    out.push_back(VariantFromPipeline(config.pipeline));
  } else {
    for (const auto& s : config.variants) out.push_back(ParseVariant(s));
  }
  return out;
}

std::string FeatureList(const FeatureConfig& f) {
  std::vector<std::string> items;
  if (f.speaker_depth) items.push_back("sd");
  if (f.speaker_intro) items.push_back("si");
  if (f.questions) items.push_back("q");
  if (f.coref) items.push_back("co");
  return Join(items, ",");
}

std::string FkHeader(std::size_t k) { return "Fk" + std::to_string(k); }

}  // namespace

std::string Variant::Label() const {
  switch (kind) {
    case Kind::kOgTextTiling: return "OG";
    case Kind::kRandom: return "Random";
    case Kind::kTiling: break;
  }
  std::vector<std::string> parts;
  if (method != LexicalMethod::kVocabIntroduction) parts.push_back("BC");
  if (method != LexicalMethod::kBlockComparison) parts.push_back("VI");
  if (coref) parts.push_back("Co");
  if (speaker_depth) parts.push_back("SD");
  if (speaker_intro) parts.push_back("SI");
  if (questions) parts.push_back("Q");
  if (stemming) parts.push_back("S");
  return Join(parts, "+");
}

std::string Variant::Slug() const { return Lower(Label()); }

Variant ParseVariant(std::string_view text) {
  const auto tokens = SplitList(Lower(text), '+');
  if (tokens.empty()) Fail(ErrorCode::kConfig, "empty segmenter variant");
  Variant v;
  if (tokens.size() == 1 && (tokens[0] == "og" || tokens[0] == "og-texttiling")) {
    v.kind = Variant::Kind::kOgTextTiling;
    return v;
  }
  if (tokens.size() == 1 && tokens[0] == "random") {
    v.kind = Variant::Kind::kRandom;
    return v;
  }
  bool bc = false;
  bool vi = false;
  for (const auto& t : tokens) {
    if (t == "bc") bc = true;
    else if (t == "vi") vi = true;
    else if (t == "sd") v.speaker_depth = true;
    else if (t == "si") v.speaker_intro = true;
    else if (t == "q") v.questions = true;
    else if (t == "co") v.coref = true;
    else if (t == "s") v.stemming = true;
    else {
      Fail(ErrorCode::kConfig, "unknown component '" + t + "' in variant '" +
                                   std::string(text) + "'");
    }
  }
  if (!bc && !vi) {
    Fail(ErrorCode::kConfig, "variant '" + std::string(text) +
                                 "' needs a lexical method (bc and/or vi)");
  }
  v.method = bc && vi ? LexicalMethod::kCombined
             : bc     ? LexicalMethod::kBlockComparison
                      : LexicalMethod::kVocabIntroduction;
  return v;
}

Variant VariantFromPipeline(const PipelineConfig& pipeline) {
  Variant v;
  v.method = pipeline.tiling.method;
  v.speaker_depth = pipeline.features.speaker_depth;
  v.speaker_intro = pipeline.features.speaker_intro;
  v.questions = pipeline.features.questions;
  v.coref = pipeline.features.coref;
  v.stemming = pipeline.preprocess.stemming;
  return v;
}

PipelineConfig ConfigureVariant(const PipelineConfig& base, const Variant& variant) {
  PipelineConfig c = base;
  c.tiling.method = variant.method;
  c.features.speaker_depth = variant.speaker_depth;
  c.features.speaker_intro = variant.speaker_intro;
  c.features.questions = variant.questions;
  c.features.coref = variant.coref;
  c.preprocess.stemming = variant.stemming;
  if (variant.kind == Variant::Kind::kOgTextTiling) {
    c.tiling.similarity = Similarity::kCosine;
    c.features = FeatureConfig{};
  }
  return c;
}

Segmentation SegmentDialogue(const Transcript& transcript,
                             const PipelineConfig& config,
                             const std::vector<CorefChain>& annotated_chains) {
  const auto tiling = TileDocument(transcript, config.tiling, config.preprocess);
  if (!config.features.any()) {
    return SelectBoundaries(tiling.depth, tiling.spans, transcript.size(),
                            config.tiling.threshold_sigma);
  }
  std::vector<CorefChain> heuristic;
  const std::vector<CorefChain>* chains = &annotated_chains;
  if (config.features.coref &&
      config.features.coref_source == CorefSource::kHeuristic) {
    const StopList& stops = config.preprocess.stop_list
                                ? *config.preprocess.stop_list
                                : *StopList::Default();
    heuristic = HeuristicChains(transcript.utterances, stops,
                                config.features.coref_window);
    chains = &heuristic;
  }
  const auto series =
      ApplyFeatures(tiling, transcript, config.tiling, config.features, *chains);
  return SelectBoundaries(series, tiling.spans, transcript.size(),
                          config.tiling.threshold_sigma);
}

Segmentation RunOgTextTiling(const Transcript& transcript,
                             const TilingConfig& config,
                             const PreprocessOptions& preprocess) {
  config.Validate();
  const std::size_t n = transcript.size();
  const auto utterances = TokenizeAll(transcript, preprocess);

  // Token stream with stop words kept in place so pseudo-sentences are sized
  // on all tokens; only content tokens enter the bags.
  Vocabulary vocab;
  std::vector<TokenBag> units;
  std::vector<std::size_t> offsets(n, 0);
  std::size_t position = 0;
  for (std::size_t u = 0; u < n; ++u) {
    offsets[u] = position;
    const StopList& stops =
        preprocess.stop_list ? *preprocess.stop_list : *StopList::Default();
    for (const auto& tok : utterances[u].tokens) {
      const std::size_t unit = position / config.w;
      if (units.size() <= unit) units.resize(unit + 1);
      if (!stops.Contains(tok)) {
        units[unit].push_back(vocab.Intern(preprocess.stemming ? PorterStem(tok) : tok));
      }
      ++position;
    }
  }
  if (units.size() < 2 || n < 2) return Segmentation{n, {}};

  const auto lexical = BlockComparisonScores(units, config.k, Similarity::kCosine);
  const auto depth = DepthScores(
      Smooth(lexical, config.smoothing_window, config.smoothing_rounds));
  std::vector<std::size_t> gaps;
  for (auto peak : SelectPeaks(depth, config.threshold_sigma)) {
    const std::size_t token_pos = (peak + 1) * config.w;
    std::size_t best = 1;
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    for (std::size_t g = 1; g < n; ++g) {
      const std::size_t d = offsets[g] > token_pos ? offsets[g] - token_pos
                                                   : token_pos - offsets[g];
      if (d < best_dist) {
        best = g;
        best_dist = d;
      }
    }
    gaps.push_back(best);
  }
  return Segmentation::Make(n, std::move(gaps));
}

Segmentation RandomBaseline(std::size_t n, std::mt19937_64& rng) {
  if (n < 2) Fail(ErrorCode::kInvalidArgument, "random baseline needs n >= 2");
  const std::uint64_t b = UniformBelow(rng, n);
  std::vector<std::size_t> gaps;
  for (std::size_t g = 1; g < n; ++g) {
    if (UniformBelow(rng, n) < b) gaps.push_back(g);
  }
  return Segmentation{n, std::move(gaps)};
}

std::uint64_t DocumentSeed(std::uint64_t seed, std::string_view doc_id,
                           std::size_t iteration) {
  return SplitMix64(seed ^ SplitMix64(Fnv1a64(doc_id) +
                                      0x9E3779B97F4A7C15ULL * iteration));
}

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void ParallelFor(std::size_t count, std::size_t threads,
                 const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = {
      "corpus",          "format",          "include-docs",
      "variants",        "method",          "features",
      "w",               "k",               "memory",
      "smoothing-window", "smoothing-rounds", "threshold-sigma",
      "similarity",      "stemming",        "stoplist",
      "boost",           "speaker-weights", "coref-source",
      "coref-scale",     "coref-window",    "fk",
      "beta",            "pk-window",       "seed",
      "best-of",         "threads",         "output"};
  return keys;
}

void ExperimentConfig::Set(std::string_view raw_key, std::string_view value) {
  std::string key = Lower(TrimView(raw_key));
  std::replace(key.begin(), key.end(), '_', '-');
  auto& tiling = pipeline.tiling;
  auto& features = pipeline.features;

  if (key == "corpus") {
    corpus_paths = SplitList(value);
  } else if (key == "format") {
    format = ParseCorpusFormat(TrimView(value));
  } else if (key == "include-docs") {
    include_docs = std::string(TrimView(value));
    try {
      std::regex check(include_docs);
    } catch (const std::regex_error&) {
      BadValue(key, value, "an ECMAScript regular expression");
    }
  } else if (key == "variants" || key == "variant") {
    variants = SplitList(value);
    for (const auto& v : variants) ParseVariant(v);
  } else if (key == "method") {
    tiling.method = ParseLexicalMethod(Lower(TrimView(value)));
  } else if (key == "features") {
    features.speaker_depth = features.speaker_intro = false;
    features.questions = features.coref = false;
    for (const auto& f : SplitList(Lower(value))) {
      if (f == "sd") features.speaker_depth = true;
      else if (f == "si") features.speaker_intro = true;
      else if (f == "q") features.questions = true;
      else if (f == "co") features.coref = true;
      else if (f == "none") continue;
      else BadValue(key, value, "a comma set of sd, si, q, co");
    }
  } else if (key == "w") {
    tiling.w = ParseCount(key, value);
  } else if (key == "k") {
    tiling.k = ParseCount(key, value);
  } else if (key == "memory") {
    const auto v = Lower(TrimView(value));
    tiling.memory = (v == "inf" || v == "unbounded") ? kUnboundedMemory
                                                     : ParseCount(key, value);
  } else if (key == "smoothing-window") {
    tiling.smoothing_window = ParseCount(key, value);
  } else if (key == "smoothing-rounds") {
    tiling.smoothing_rounds = ParseCount(key, value);
  } else if (key == "threshold-sigma") {
    tiling.threshold_sigma = ParseReal(key, value);
  } else if (key == "similarity") {
    tiling.similarity = ParseSimilarity(Lower(TrimView(value)));
  } else if (key == "stemming") {
    pipeline.preprocess.stemming = ParseSwitch(key, value);
  } else if (key == "stoplist") {
    stoplist_path = std::string(TrimView(value));
    pipeline.preprocess.stop_list = stoplist_path.empty() || stoplist_path == "default"
                                        ? StopList::Default()
                                        : StopList::FromFile(stoplist_path);
    if (stoplist_path == "default") stoplist_path.clear();
  } else if (key == "boost") {
    features.boost = ParseReal(key, value);
  } else if (key == "speaker-weights") {
    const auto parts = SplitList(value, ':');
    if (parts.size() != 2) BadValue(key, value, "LEXICAL:SPEAKER, e.g. 2:1");
    features.lexical_weight = ParseReal(key, parts[0]);
    features.speaker_weight = ParseReal(key, parts[1]);
  } else if (key == "coref-source") {
    const auto v = std::string(TrimView(value));
    if (v == "heuristic") {
      features.coref_source = CorefSource::kHeuristic;
      features.coref_file.clear();
    } else if (v.rfind("file:", 0) == 0 && v.size() > 5) {
      features.coref_source = CorefSource::kAnnotationFile;
      features.coref_file = v.substr(5);
    } else {
      BadValue(key, value, "heuristic or file:<path>");
    }
  } else if (key == "coref-scale") {
    features.coref_scale = ParseReal(key, value);
  } else if (key == "coref-window") {
    features.coref_window = ParseCount(key, value);
  } else if (key == "fk") {
    eval.fk_tolerances.clear();
    for (const auto& item : SplitList(value)) {
      eval.fk_tolerances.push_back(ParseCount(key, item));
    }
  } else if (key == "beta") {
    eval.beta = ParseReal(key, value);
  } else if (key == "pk-window") {
    const auto v = Lower(TrimView(value));
    if (v == "auto" || v.empty()) {
      eval.pk_window.reset();
    } else {
      eval.pk_window = ParseCount(key, value);
    }
  } else if (key == "seed") {
    seed = ParseCount(key, value);
  } else if (key == "best-of") {
    best_of = ParseCount(key, value);
  } else if (key == "threads") {
    threads = ParseCount(key, value);
  } else if (key == "output") {
    output_dir = std::string(TrimView(value));
  } else {
    Fail(ErrorCode::kConfig, "unknown setting '" + std::string(raw_key) + "'");
  }
}

void ExperimentConfig::LoadJson(const std::string& text,
                                const std::string& source_name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kParse, source_name + ": invalid JSON at byte " +
                                std::to_string(e.byte));
  }
  if (!root.is_object()) {
    Fail(ErrorCode::kParse, source_name + ": configuration must be a JSON object");
  }
  auto scalar = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "on" : "off";
    if (v.is_null()) return "";
    return v.dump();
  };
  for (const auto& [key, value] : root.items()) {
    if (value.is_array()) {
      std::vector<std::string> items;
      for (const auto& item : value) items.push_back(scalar(item));
      Set(key, Join(items, ","));
    } else if (value.is_object()) {
      Fail(ErrorCode::kConfig, source_name + ": setting '" + key +
                                   "' must not be an object");
    } else {
      Set(key, scalar(value));
    }
  }
}

void ExperimentConfig::LoadJsonFile(const std::string& path) {
  LoadJson(ReadFile(path), path);
}

namespace {

// Finite reals stay JSON numbers; infinity has no JSON spelling.
ordered_json RealJson(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace

std::string ExperimentConfig::ToJson() const {
  const auto& tiling = pipeline.tiling;
  const auto& features = pipeline.features;
  ordered_json j;
  j["corpus"] = corpus_paths;
  j["format"] = std::string(CorpusFormatName(format));
  j["include-docs"] = include_docs;
  j["variants"] = variants;
  j["method"] = std::string(LexicalMethodName(tiling.method));
  j["features"] = FeatureList(features);
  j["w"] = tiling.w;
  j["k"] = tiling.k;
  if (tiling.memory == kUnboundedMemory) {
    j["memory"] = "inf";
  } else {
    j["memory"] = tiling.memory;
  }
  j["smoothing-window"] = tiling.smoothing_window;
  j["smoothing-rounds"] = tiling.smoothing_rounds;
  j["threshold-sigma"] = RealJson(tiling.threshold_sigma);
  j["similarity"] = std::string(SimilarityName(tiling.similarity));
  j["stemming"] = pipeline.preprocess.stemming;
  j["stoplist"] = stoplist_path;
  j["boost"] = RealJson(features.boost);
  j["speaker-weights"] =
      FormatReal(features.lexical_weight) + ":" + FormatReal(features.speaker_weight);
  j["coref-source"] = features.coref_source == CorefSource::kHeuristic
                          ? std::string("heuristic")
                          : "file:" + features.coref_file;
  j["coref-scale"] = RealJson(features.coref_scale);
  j["coref-window"] = features.coref_window;
  j["fk"] = eval.fk_tolerances;
  j["beta"] = RealJson(eval.beta);
  if (eval.pk_window) {
    j["pk-window"] = *eval.pk_window;
  } else {
    j["pk-window"] = "auto";
  }
  j["seed"] = seed;
  j["best-of"] = best_of;
  j["threads"] = threads;
  j["output"] = output_dir;
  return j.dump(2);
}

void ExperimentConfig::Validate() const {
  pipeline.tiling.Validate();
  pipeline.features.Validate();
  eval.Validate();
  if (corpus_paths.empty()) Fail(ErrorCode::kConfig, "no corpus path configured");
  if (best_of < 1) Fail(ErrorCode::kConfig, "best-of must be >= 1");
  if (eval.fk_tolerances.empty()) {
    Fail(ErrorCode::kConfig, "at least one Fk tolerance is required");
  }
  for (const auto& v : EffectiveVariants(*this)) {
    if (v.coref) {
      FeatureConfig f = pipeline.features;
      f.coref = true;
      f.Validate();
    }
  }
}

std::vector<Transcript> LoadExperimentCorpus(const ExperimentConfig& config) {
  std::vector<Transcript> docs;
  std::vector<std::string> failures;
  std::optional<ErrorCode> code;
  for (const auto& p : config.corpus_paths) {
    try {
      auto loaded = LoadCorpus(p, config.format);
      std::move(loaded.begin(), loaded.end(), std::back_inserter(docs));
    } catch (const Error& e) {
      failures.push_back(e.what());
      // Mixed failure kinds report as a parse error.
      code = (!code || *code == e.code()) ? e.code() : ErrorCode::kParse;
    }
  }
  if (!failures.empty()) {
    Fail(*code, "corpus load failed:\n  " + Join(failures, "\n  "));
  }
  if (!config.include_docs.empty()) {
    const std::regex filter(config.include_docs);
    std::erase_if(docs, [&](const Transcript& t) {
      return !std::regex_search(t.doc_id, filter);
    });
  }
  std::set<std::string> ids;
  for (const auto& t : docs) {
    if (!ids.insert(t.doc_id).second) {
      Fail(ErrorCode::kConfig, "duplicate doc_id '" + t.doc_id + "' in corpus");
    }
  }
  return docs;
}

std::vector<BoundaryRecord> GoldRecords(const std::vector<Transcript>& corpus) {
  std::vector<BoundaryRecord> out;
  for (const auto& t : corpus) {
    if (t.size() < 2) continue;
    out.push_back({t.doc_id, Segmentation::Make(t.size(), t.gold_boundaries)});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  return out;
}

std::vector<BoundaryRecord> SegmentCorpus(const std::vector<Transcript>& corpus,
                                          const Variant& variant,
                                          const ExperimentConfig& config,
                                          std::size_t iteration) {
  const PipelineConfig pipeline = ConfigureVariant(config.pipeline, variant);
  std::map<std::string, std::vector<CorefChain>> annotations;
  if (variant.kind == Variant::Kind::kTiling && pipeline.features.coref &&
      pipeline.features.coref_source == CorefSource::kAnnotationFile) {
    annotations = LoadCorefAnnotations(pipeline.features.coref_file);
  }
  static const std::vector<CorefChain> kNoChains;

  std::vector<std::optional<BoundaryRecord>> results(corpus.size());
  ParallelFor(corpus.size(), config.threads, [&](std::size_t i) {
    const Transcript& doc = corpus[i];
    if (doc.size() < 2) return;
    Segmentation seg;
    switch (variant.kind) {
      case Variant::Kind::kTiling: {
        auto it = annotations.find(doc.doc_id);
        seg = SegmentDialogue(doc, pipeline,
                              it == annotations.end() ? kNoChains : it->second);
        break;
      }
      case Variant::Kind::kOgTextTiling:
        seg = RunOgTextTiling(doc, pipeline.tiling, pipeline.preprocess);
        break;
      case Variant::Kind::kRandom: {
        std::mt19937_64 rng(DocumentSeed(config.seed, doc.doc_id, iteration));
        seg = RandomBaseline(doc.size(), rng);
        break;
      }
    }
    results[i] = BoundaryRecord{doc.doc_id, std::move(seg)};
  });

  std::vector<BoundaryRecord> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (results[i]) {
      out.push_back(std::move(*results[i]));
    } else {
      Warn("document '" + corpus[i].doc_id +
           "' has fewer than two utterances; skipped");
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  return out;
}

VariantRun RunVariant(const std::vector<Transcript>& corpus,
                      const Variant& variant, const ExperimentConfig& config) {
  const auto gold = GoldRecords(corpus);
  const std::size_t iterations =
      variant.kind == Variant::Kind::kRandom ? config.best_of : 1;
  VariantRun best;
  best.variant = variant;
  double best_score = -1.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    VariantRun run;
    run.variant = variant;
    run.chosen_iteration = it;
    run.predictions = SegmentCorpus(corpus, variant, config, it);
    run.reports = EvaluateRecords(gold, run.predictions, config.eval);
    double score = 0.0;
    if (!run.reports.empty()) {
      run.summary = Aggregate(run.reports);
      run.has_summary = true;
      for (const auto& [k, v] : run.summary.fk) score += v;
    }
    if (score > best_score) {
      best_score = score;
      best = std::move(run);
    }
  }
  return best;
}

std::string FormatReportTsv(const std::vector<VariantRun>& runs,
                            const EvalOptions& eval) {
  std::string out = "variant\tdocuments\tF1";
  for (auto k : eval.fk_tolerances) out += "\t" + FkHeader(k);
  out += "\tPk\n";
  for (const auto& r : runs) {
    out += r.variant.Label() + "\t" + std::to_string(r.has_summary ? r.summary.documents : 0);
    if (!r.has_summary) {
      out += "\tNA";
      for (std::size_t i = 0; i < eval.fk_tolerances.size(); ++i) out += "\tNA";
      out += "\tNA\n";
      continue;
    }
    out += "\t" + Percent(r.summary.f1);
    for (auto k : eval.fk_tolerances) out += "\t" + Percent(r.summary.fk.at(k));
    out += "\t" + Percent(r.summary.pk) + "\n";
  }
  return out;
}

std::string FormatReportPretty(const std::vector<VariantRun>& runs,
                               const EvalOptions& eval) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"Variant", "F1 ^"};
  for (auto k : eval.fk_tolerances) header.push_back(FkHeader(k) + " ^");
  header.push_back("Pk v");
  header.push_back("Docs");
  rows.push_back(header);
  for (const auto& r : runs) {
    std::vector<std::string> row = {r.variant.Label()};
    if (r.has_summary) {
      row.push_back(Percent(r.summary.f1));
      for (auto k : eval.fk_tolerances) row.push_back(Percent(r.summary.fk.at(k)));
      row.push_back(Percent(r.summary.pk));
      row.push_back(std::to_string(r.summary.documents));
    } else {
      for (std::size_t i = 0; i < eval.fk_tolerances.size() + 2; ++i) row.push_back("NA");
      row.push_back("0");
    }
    rows.push_back(row);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  auto rule = [&] {
    for (std::size_t c = 0; c < width.size(); ++c) {
      out += std::string(width[c] + (c ? 2 : 0), '-');
    }
    out += '\n';
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const auto& cell = rows[r][c];
      if (c == 0) {
        out += cell + std::string(width[c] - cell.size(), ' ');
      } else {
        out += "  " + std::string(width[c] - cell.size(), ' ') + cell;
      }
    }
    out += '\n';
    if (r == 0) rule();
  }
  return out;
}

std::string FormatPerDocumentTsv(const VariantRun& run, const EvalOptions& eval) {
  std::string out = "doc_id\tpredicted\tgold\tF1";
  for (auto k : eval.fk_tolerances) out += "\t" + FkHeader(k);
  out += "\tPk\n";
  for (const auto& r : run.reports) {
    std::size_t predicted = 0;
    std::size_t gold = 0;
    if (!r.diagnostics.empty()) {
      const auto& d = r.diagnostics.front();
      predicted = d.matched.size() + d.unmatched_pred.size();
      gold = d.matched.size() + d.unmatched_gold.size();
    }
    out += r.doc_id + "\t" + std::to_string(predicted) + "\t" + std::to_string(gold) +
           "\t" + Percent(r.f1);
    for (auto k : eval.fk_tolerances) out += "\t" + Percent(r.fk.at(k));
    out += "\t" + Percent(r.pk) + "\n";
  }
  return out;
}

std::vector<QuestionEffect> QuestionEffects(const std::vector<Transcript>& corpus,
                                            const std::vector<VariantRun>& runs,
                                            const ExperimentConfig& config) {
  std::vector<QuestionEffect> effects;
  for (const auto& run : runs) {
    if (run.variant.kind != Variant::Kind::kTiling || !run.variant.questions) continue;
    Variant base = run.variant;
    base.questions = false;
    const auto label = base.Label();
    std::vector<BoundaryRecord> computed;
    const std::vector<BoundaryRecord>* reference = nullptr;
    for (const auto& other : runs) {
      if (other.variant.Label() == label) reference = &other.predictions;
    }
    if (!reference) {
      computed = SegmentCorpus(corpus, base, config);
      reference = &computed;
    }
    QuestionEffect e{run.variant.Label(), label, 0, 0};
    // Both lists are sorted by doc_id and cover the same documents.
    for (std::size_t i = 0; i < run.predictions.size() && i < reference->size(); ++i) {
      const auto& a = run.predictions[i].segmentation.boundaries;
      const auto& b = (*reference)[i].segmentation.boundaries;
      std::vector<std::size_t> diff;
      std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                    std::back_inserter(diff));
      e.changed_boundaries += diff.size();
      e.changed_documents += diff.empty() ? 0 : 1;
    }
    effects.push_back(std::move(e));
  }
  return effects;
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const auto corpus = LoadExperimentCorpus(config);

  ExperimentResult result;
  for (const auto& v : EffectiveVariants(config)) {
    result.runs.push_back(RunVariant(corpus, v, config));
  }
  result.report_tsv = FormatReportTsv(result.runs, config.eval);
  result.report_pretty = FormatReportPretty(result.runs, config.eval);
  result.question_effects = QuestionEffects(corpus, result.runs, config);
  for (const auto& e : result.question_effects) {
    result.report_pretty +=
        e.changed_boundaries == 0
            ? "note: " + e.label + ": Q changed no boundaries relative to " +
                  e.compared_to + "\n"
            : "note: " + e.label + ": Q changed " + std::to_string(e.changed_boundaries) +
                  " boundaries in " + std::to_string(e.changed_documents) +
                  " documents relative to " + e.compared_to + "\n";
  }

  ordered_json manifest;
  manifest["tool"] = "dialseg";
  manifest["version"] = std::string(kVersion);
  manifest["stop_list_version"] = config.stoplist_path.empty()
                                      ? std::string(kStopListVersion)
                                      : "file:" + config.stoplist_path;
  manifest["seed"] = config.seed;
  manifest["config"] = ordered_json::parse(config.ToJson());
  ordered_json files = ordered_json::array();
  for (const auto& f : CorpusFiles(config.corpus_paths)) {
    const auto content = ReadFile(f);
    files.push_back({{"path", f},
                     {"bytes", content.size()},
                     {"fnv1a64", Hex64(Fnv1a64(content))}});
  }
  manifest["corpus_files"] = files;
  manifest["documents"] = corpus.size();
  ordered_json variants = ordered_json::array();
  for (const auto& r : result.runs) {
    ordered_json v;
    v["label"] = r.variant.Label();
    v["boundaries"] = r.variant.Slug() + "/boundaries.jsonl";
    v["evaluated_documents"] = r.has_summary ? r.summary.documents : 0;
    if (r.variant.kind == Variant::Kind::kRandom) {
      v["best_of"] = config.best_of;
      v["chosen_iteration"] = r.chosen_iteration;
    }
    for (const auto& e : result.question_effects) {
      if (e.label != v["label"]) continue;
      v["question_suppression"] = {{"compared_to", e.compared_to},
                                   {"changed_documents", e.changed_documents},
                                   {"changed_boundaries", e.changed_boundaries}};
    }
    variants.push_back(v);
  }
  manifest["variants"] = variants;
  result.manifest_json = manifest.dump(2) + "\n";

  if (!config.output_dir.empty()) {
    const fs::path out(config.output_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) Fail(ErrorCode::kIo, "cannot create '" + out.string() + "': " + ec.message());
    WriteText(out / "gold.jsonl", ToBoundaryJsonl(GoldRecords(corpus)));
    for (const auto& r : result.runs) {
      const auto dir = out / r.variant.Slug();
      fs::create_directories(dir, ec);
      if (ec) Fail(ErrorCode::kIo, "cannot create '" + dir.string() + "'");
      WriteText(dir / "boundaries.jsonl", ToBoundaryJsonl(r.predictions));
      WriteText(dir / "per_document.tsv", FormatPerDocumentTsv(r, config.eval));
    }
    WriteText(out / "report.tsv", result.report_tsv);
    WriteText(out / "report.txt", result.report_pretty);
    WriteText(out / "manifest.json", result.manifest_json);
  }
  return result;
}

SweepAxis ParseSweepAxis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    Fail(ErrorCode::kConfig, "sweep axis '" + std::string(text) +
                                 "' must look like key=v1,v2");
  }
  SweepAxis axis{std::string(TrimView(text.substr(0, eq))),
                 SplitList(text.substr(eq + 1))};
  if (axis.values.empty()) {
    Fail(ErrorCode::kConfig, "sweep axis '" + axis.key + "' has no values");
  }
  return axis;
}

SweepResult RunSweep(const ExperimentConfig& config,
                     const std::vector<SweepAxis>& axes) {
  if (axes.empty()) Fail(ErrorCode::kConfig, "sweep needs at least one axis");
  std::vector<std::vector<std::string>> points = {{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::string>> next;
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }

  SweepResult result;
  std::string index = "point";
  for (const auto& a : axes) index += "\t" + a.key;
  index += "\tvariant\tF1";
  for (auto k : config.eval.fk_tolerances) index += "\t" + FkHeader(k);
  index += "\tPk\tmanifest\n";

  for (std::size_t i = 0; i < points.size(); ++i) {
    ExperimentConfig point = config;
    for (std::size_t a = 0; a < axes.size(); ++a) point.Set(axes[a].key, points[i][a]);
    char name[32];
    std::snprintf(name, sizeof(name), "sweep_%03zu", i);
    if (!config.output_dir.empty()) {
      point.output_dir = (fs::path(config.output_dir) / name).string();
    }
    auto res = RunExperiment(point);
    for (const auto& r : res.runs) {
      index += name;
      for (const auto& v : points[i]) index += "\t" + v;
      index += "\t" + r.variant.Label();
      if (r.has_summary) {
        index += "\t" + Percent(r.summary.f1);
        for (auto k : config.eval.fk_tolerances) index += "\t" + Percent(r.summary.fk.at(k));
        index += "\t" + Percent(r.summary.pk);
      } else {
        for (std::size_t c = 0; c < config.eval.fk_tolerances.size() + 2; ++c) index += "\tNA";
      }
      index += "\t" + std::string(name) + "/manifest.json\n";
    }
    result.points.emplace_back(points[i], std::move(res));
  }
  result.index_tsv = index;
  if (!config.output_dir.empty()) {
    WriteText(fs::path(config.output_dir) / "sweep_index.tsv", index);
  }
  return result;
}

}  // namespace dialseg
