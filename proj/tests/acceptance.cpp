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

// Acceptance runner. Prints one PASS/FAIL/SKIP line per criterion.
//
//   dialseg_acceptance               run all criteria
//   dialseg_acceptance --criterion 3 run one; exit 0 pass, 1 fail, 77 skip
//
// Criterion 5 needs the Character Mining JSON files of the public Friends
// corpus in $FRIENDS_CORPUS_DIR (friends_season_01.json ...).

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "eval.hpp"
#include "features.hpp"
#include "harness.hpp"
#include "oracles.hpp"
#include "test_util.hpp"
#include "tiling.hpp"

namespace fs = std::filesystem;
using dialseg::Segmentation;

namespace {

enum class Outcome { kPass, kFail, kSkip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

Segmentation RandomSeg(std::mt19937_64& rng, std::size_t n, std::size_t max_b) {
  std::vector<std::size_t> b;
  const std::size_t count = rng() % (std::min(max_b, n - 1) + 1);
  while (b.size() < count) {
    const std::size_t g = 1 + rng() % (n - 1);
    if (std::find(b.begin(), b.end(), g) == b.end()) b.push_back(g);
  }
  return Segmentation::Make(n, b);
}

// 1. Fk against exhaustive maximum matching, Pk against pair enumeration.
Verdict MetricOracles() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260101);
  std::size_t fk_bad = 0;
  std::size_t pk_bad = 0;
  std::size_t fk_checks = 0;
  for (int it = 0; it < 1000; ++it) {
    const std::size_t n = 2 + rng() % 29;  // n <= 30
    const auto g = RandomSeg(rng, n, 8);
    const auto p = RandomSeg(rng, n, 8);
    for (std::size_t k : {1, 2, 3}) {
      const auto m = oracle::MaxMatching(g.boundaries, p.boundaries, k);
      const double want = oracle::FScore(m, p.boundaries.size(), g.boundaries.size(), 0.5);
      ++fk_checks;
      if (dialseg::FkScore(g, p, k) != want) ++fk_bad;
    }
    const auto w = oracle::PkWindow(n, g.boundaries.size());
    if (dialseg::PkScore(g, p) != oracle::Pk(n, g.boundaries, p.boundaries, w)) ++pk_bad;
  }
  const double secs = Seconds(start);
  const bool ok = fk_bad == 0 && pk_bad == 0 && secs < 10.0;
  return {ok ? Outcome::kPass : Outcome::kFail,
          Fmt("1000 pairs; Fk mismatches %zu/%zu, Pk mismatches %zu/1000; %.2f s (limit 10 s)",
              fk_bad, fk_checks, pk_bad, secs)};
}

// 2. Identity values, ranges and monotonicity in k.
Verdict TrivialMetrics() {
  std::mt19937_64 rng(20260202);
  std::size_t identity_bad = 0;
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 2 + rng() % 99;
    const auto g = RandomSeg(rng, n, 12);
    if (dialseg::PkScore(g, g) != 0.0) ++identity_bad;
    if (dialseg::F1Score(g, g) != 1.0) ++identity_bad;
    for (std::size_t k = 0; k <= 5; ++k) {
      if (dialseg::FkScore(g, g, k) != 1.0) ++identity_bad;
    }
  }
  std::size_t range_bad = 0;
  std::size_t mono_bad = 0;
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 2 + rng() % 99;
    const auto g = RandomSeg(rng, n, 12);
    const auto p = RandomSeg(rng, n, 12);
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(dialseg::PkScore(g, p)) || !in01(dialseg::F1Score(g, p))) ++range_bad;
    double prev = -1.0;
    for (std::size_t k = 0; k <= 5; ++k) {
      const double fk = dialseg::FkScore(g, p, k);
      if (!in01(fk)) ++range_bad;
      if (fk < prev) ++mono_bad;
      prev = fk;
    }
  }
  const bool ok = identity_bad == 0 && range_bad == 0 && mono_bad == 0;
  return {ok ? Outcome::kPass : Outcome::kFail,
          Fmt("identity violations %zu (100 g), out-of-range %zu, non-monotone steps %zu "
              "(100 pairs, k=0..5)",
              identity_bad, range_bad, mono_bad)};
}

// 3. Two vocabulary-disjoint halves, BC with defaults.
Verdict SyntheticOracle() {
  int success = 0;
  int sole = 0;
  for (int draw = 0; draw < 50; ++draw) {
    std::mt19937_64 rng(1000 + draw);
    const auto doc = testutil::TwoTopicDocument(rng, 20, 5);
    const auto seg = dialseg::SegmentDialogue(doc, dialseg::PipelineConfig{});
    int near = 0;
    for (auto b : seg.boundaries) near += (b + 2 >= 20 && b <= 22) ? 1 : 0;
    if (near == 1) ++success;
    if (near == 1 && seg.boundaries.size() == 1) ++sole;
  }
  return {success >= 48 ? Outcome::kPass : Outcome::kFail,
          Fmt("%d/50 draws with exactly one boundary within +-2 of gap 20 (need 48); "
              "%d/50 with no other boundary at all",
              success, sole)};
}

std::vector<dialseg::Transcript> TestCorpus() {
  auto docs = dialseg::LoadCorpus(testutil::DataPath("episodes.jsonl"),
                                  dialseg::CorpusFormat::kNativeJsonl);
  auto cm = dialseg::LoadCorpus(testutil::DataPath("cm_season.json"),
                                dialseg::CorpusFormat::kCharacterMiningJson);
  docs.insert(docs.end(), cm.begin(), cm.end());
  for (int i = 0; i < 10; ++i) {
    std::mt19937_64 rng(500 + i);
    auto t = testutil::TwoTopicDocument(rng);
    t.doc_id += std::to_string(i);
    docs.push_back(t);
  }
  return docs;
}

// 4. Features disabled: bit-identical to the tiling core.
Verdict FeatureNoOp() {
  const auto docs = TestCorpus();
  std::size_t runs = 0;
  std::size_t differ = 0;
  for (const auto& doc : docs) {
    for (auto method : {dialseg::LexicalMethod::kBlockComparison,
                        dialseg::LexicalMethod::kVocabIntroduction,
                        dialseg::LexicalMethod::kCombined}) {
      for (bool stem : {false, true}) {
        dialseg::PipelineConfig p;
        p.tiling.method = method;
        p.preprocess.stemming = stem;
        const auto core = dialseg::SegmentTiling(doc, p.tiling, p.preprocess);
        const auto piped = dialseg::SegmentDialogue(doc, p);
        const auto tiling = dialseg::TileDocument(doc, p.tiling, p.preprocess);
        const auto series = dialseg::ApplyFeatures(tiling, doc, p.tiling, p.features, {});
        const bool same_series =
            series.values.size() == tiling.depth.values.size() &&
            std::memcmp(series.values.data(), tiling.depth.values.data(),
                        series.values.size() * sizeof(double)) == 0;
        ++runs;
        if (!(core == piped) || !same_series) ++differ;
      }
    }
  }
  // Whole-corpus path through the experiment harness as well.
  dialseg::ExperimentConfig cfg;
  cfg.Set("corpus", testutil::DataPath("episodes.jsonl"));
  const auto corpus = dialseg::LoadExperimentCorpus(cfg);
  const auto harness = dialseg::SegmentCorpus(corpus, dialseg::ParseVariant("bc"), cfg);
  for (std::size_t i = 0; i < harness.size(); ++i) {
    ++runs;
    if (!(harness[i].segmentation ==
          dialseg::SegmentTiling(corpus[i], cfg.pipeline.tiling, cfg.pipeline.preprocess))) {
      ++differ;
    }
  }
  return {differ == 0 ? Outcome::kPass : Outcome::kFail,
          Fmt("%zu documents x 3 methods x stemming on/off plus harness run: "
              "%zu/%zu comparisons differ",
              docs.size(), differ, runs)};
}

// 5. Ordering on the public Friends corpus (seasons 1, 5-10).
Verdict CorpusOrdering() {
  const char* dir = std::getenv("FRIENDS_CORPUS_DIR");
  if (!dir || !*dir) {
    return {Outcome::kSkip,
            "FRIENDS_CORPUS_DIR not set; needs the Character Mining season JSON files"};
  }
  dialseg::ExperimentConfig cfg;
  cfg.Set("corpus", dir);
  cfg.Set("format", "character-mining-json");
  cfg.Set("include-docs", "^s(01|05|06|07|08|09|10)_");
  cfg.Set("variants", "bc+sd,og,bc,random");
  cfg.Set("best-of", "10");
  const auto start = Clock::now();
  const auto corpus = dialseg::LoadExperimentCorpus(cfg);
  if (corpus.empty()) return {Outcome::kFail, "no episodes matched seasons 1 and 5-10"};
  std::vector<dialseg::EvalReport> s;
  for (const auto& v : cfg.variants) {
    const auto run = dialseg::RunVariant(corpus, dialseg::ParseVariant(v), cfg);
    if (!run.has_summary) return {Outcome::kFail, "variant " + v + " evaluated no document"};
    s.push_back(run.summary);
  }
  const auto& sd = s[0];
  const auto& og = s[1];
  const auto& bc = s[2];
  const auto& rnd = s[3];
  const bool a = sd.pk * 100 <= og.pk * 100 - 2.0;
  const bool b = sd.pk < bc.pk && sd.f1 > bc.f1 && sd.fk.at(1) > bc.fk.at(1) &&
                 sd.fk.at(2) > bc.fk.at(2);
  const bool c = sd.pk * 100 <= rnd.pk * 100 - 5.0;
  return {a && b && c ? Outcome::kPass : Outcome::kFail,
          Fmt("%zu episodes; Pk BC+SD %.2f vs OG %.2f (a:%s) | BC+SD vs BC: Pk %.2f/%.2f "
              "F1 %.2f/%.2f Fk1 %.2f/%.2f Fk2 %.2f/%.2f (b:%s) | Random Pk %.2f (c:%s); %.1f s",
              corpus.size(), sd.pk * 100, og.pk * 100, a ? "ok" : "no", sd.pk * 100,
              bc.pk * 100, sd.f1 * 100, bc.f1 * 100, sd.fk.at(1) * 100, bc.fk.at(1) * 100,
              sd.fk.at(2) * 100, bc.fk.at(2) * 100, b ? "ok" : "no", rnd.pk * 100,
              c ? "ok" : "no", Seconds(start))};
}

// 6. Random baseline mean boundary count.
Verdict RandomStatistics() {
  std::string detail;
  bool ok = true;
  for (std::size_t n : {10, 100, 500}) {
    double total = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
      std::mt19937_64 rng(dialseg::DocumentSeed(seed, "doc", 0));
      total += static_cast<double>(dialseg::RandomBaseline(n, rng).boundaries.size());
    }
    const double mean = total / 10000.0;
    const double expect = static_cast<double>((n - 1) * (n - 1)) / (2.0 * static_cast<double>(n));
    const double rel = std::abs(mean - expect) / expect;
    ok = ok && rel <= 0.02;
    detail += Fmt("%sn=%zu mean %.3f vs %.3f (%.2f%%)", detail.empty() ? "" : "; ", n, mean,
                  expect, rel * 100);
  }
  return {ok ? Outcome::kPass : Outcome::kFail, detail + " [limit 2%]"};
}

// A 400-utterance multi-party episode: ten scenes, names and pronouns so the
// coreference heuristic has real work.
dialseg::Transcript LongEpisode() {
  std::mt19937_64 rng(4242);
  const std::vector<std::string> cast = {"Maya", "Theo", "Priya", "Sam", "Lena", "Omar"};
  const std::vector<std::string> glue = {"I", "you", "the", "and", "it", "was", "that",
                                         "we", "so", "just", "really", "what"};
  const std::vector<std::string> pronouns = {"he", "she", "they", "him", "her"};
  std::vector<std::pair<std::string, std::string>> turns;
  for (int scene = 0; scene < 10; ++scene) {
    std::vector<std::string> topic;
    for (int i = 0; i < 15; ++i) topic.push_back(testutil::PseudoWord(rng));
    for (int u = 0; u < 40; ++u) {
      std::string text;
      const std::size_t len = 6 + rng() % 9;
      for (std::size_t t = 0; t < len; ++t) {
        const auto r = rng() % 10;
        const std::string& w = r < 4   ? topic[rng() % topic.size()]
                               : r < 8 ? glue[rng() % glue.size()]
                               : r < 9 ? cast[rng() % cast.size()]
                                       : pronouns[rng() % pronouns.size()];
        text += (t ? " " : "") + w;
      }
      turns.emplace_back(cast[(scene + rng() % 3) % cast.size()], text + (rng() % 4 ? "." : "?"));
    }
  }
  return testutil::MakeTranscript(turns, {}, "long");
}

// 7. Wall-clock time per episode.
Verdict Performance() {
  std::vector<dialseg::Transcript> episodes = {LongEpisode()};
  std::string source = "synthetic 400-utterance episode";
  if (const char* dir = std::getenv("FRIENDS_CORPUS_DIR"); dir && *dir) {
    auto real = dialseg::LoadCorpus(dir, dialseg::CorpusFormat::kCharacterMiningJson);
    if (!real.empty()) {
      auto longest = std::max_element(real.begin(), real.end(), [](const auto& a, const auto& b) {
        return a.size() < b.size();
      });
      episodes.push_back(*longest);
      source += Fmt(" + longest corpus episode (%zu utterances)", longest->size());
    }
  }
  double worst_sd = 0;
  double worst_co = 0;
  for (const auto& ep : episodes) {
    dialseg::PipelineConfig sd;
    sd.features.speaker_depth = true;
    auto t0 = Clock::now();
    dialseg::SegmentDialogue(ep, sd);
    worst_sd = std::max(worst_sd, Seconds(t0));

    auto co = dialseg::ConfigureVariant(sd, dialseg::ParseVariant("bc+vi+co+sd"));
    t0 = Clock::now();
    dialseg::SegmentDialogue(ep, co);
    worst_co = std::max(worst_co, Seconds(t0));
  }
  const bool ok = worst_sd < 2.0 && worst_co < 5.0;
  return {ok ? Outcome::kPass : Outcome::kFail,
          Fmt("%s: BC+SD %.4f s (limit 2 s), BC+VI+Co+SD heuristic %.4f s (limit 5 s)",
              source.c_str(), worst_sd, worst_co)};
}

std::vector<std::string> ListFiles(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root).string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// 8. CLI `experiment` runs with one config produce identical bytes. Each run
// writes to the same output path, which is moved aside before the next.
Verdict Determinism() {
  testutil::TempDir dir;
  dir.Write("config.json", R"({"corpus": [")" + testutil::DataPath("episodes.jsonl") + R"("],
  "variants": ["random", "og", "bc", "vi", "bc+sd", "bc+vi+co+sd", "bc+si+q+s"],
  "best-of": 5, "seed": 7})");
  const auto out = dir.file("out");
  auto run = [&](const char* threads, const std::string& keep) {
    const std::string cmd = std::string("\"") + DIALSEG_CLI_PATH + "\" -q experiment --config \"" +
                            dir.file("config.json") + "\" --threads " + threads + " --output \"" +
                            out + "\" --tsv > \"" + dir.file(keep + ".stdout") + "\"";
    if (std::system(cmd.c_str()) != 0) return false;
    fs::rename(out, dir.path() / keep);
    return true;
  };
  if (!run("4", "a") || !run("4", "b") || !run("1", "c")) {
    return {Outcome::kFail, "CLI experiment run failed"};
  }
  const auto files = ListFiles(dir.path() / "a");
  std::vector<std::string> mismatched;
  for (const char* other : {"b", "c"}) {
    if (ListFiles(dir.path() / other) != files) {
      mismatched.push_back(std::string(other) + ":file-set");
      continue;
    }
    for (const auto& f : files) {
      // The manifest records the thread count, so it only has to match run b.
      if (f == "manifest.json" && std::strcmp(other, "c") == 0) continue;
      if (testutil::Slurp(dir.path() / "a" / f) != testutil::Slurp(dir.path() / other / f)) {
        mismatched.push_back(std::string(other) + ":" + f);
      }
    }
    if (testutil::Slurp(dir.path() / "a.stdout") !=
        testutil::Slurp(dir.path() / (std::string(other) + ".stdout"))) {
      mismatched.push_back(std::string(other) + ":stdout");
    }
  }
  std::string list;
  for (const auto& m : mismatched) list += " " + m;
  return {mismatched.empty() ? Outcome::kPass : Outcome::kFail,
          Fmt("%zu output files + stdout: identical config twice, then threads 4 vs 1; "
              "%zu differ%s",
              files.size(), mismatched.size(), list.c_str())};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  dialseg::SetWarningSink([](std::string_view) {});

  const std::vector<Criterion> criteria = {
      {1, "metric-oracle equivalence", MetricOracles},
      {2, "trivial-metric suite", TrivialMetrics},
      {3, "TextTiling synthetic oracle", SyntheticOracle},
      {4, "feature no-op guarantee", FeatureNoOp},
      {5, "ordering on the Friends corpus", CorpusOrdering},
      {6, "random-baseline statistics", RandomStatistics},
      {7, "performance", Performance},
      {8, "determinism", Determinism},
  };
  bool any_fail = false;
  bool any_skip = false;
  bool found = false;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    found = true;
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::kPass   ? "PASS"
                      : v.outcome == Outcome::kFail ? "FAIL"
                                                    : "SKIP";
    std::printf("[%s] criterion %d (%s): %s\n", tag, c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
    any_fail = any_fail || v.outcome == Outcome::kFail;
    any_skip = any_skip || v.outcome == Outcome::kSkip;
  }
  if (!found) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  if (any_fail) return 1;
  if (only != 0 && any_skip) return 77;
  return 0;
}
