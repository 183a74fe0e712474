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

#include <random>

#include "doctest.h"
#include "error.hpp"
#include "eval.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using dialseg::Segmentation;

namespace {

Segmentation RandomSeg(std::mt19937_64& rng, std::size_t n, std::size_t max_b) {
  std::uniform_int_distribution<std::size_t> count(0, std::min(max_b, n - 1));
  std::uniform_int_distribution<std::size_t> gap(1, n - 1);
  std::vector<std::size_t> b;
  for (std::size_t c = count(rng); c > 0; --c) b.push_back(gap(rng));
  return Segmentation::Make(n, b);
}

}  // namespace

TEST_CASE("segmentation rejects gaps outside the document") {
  CHECK_THROWS_AS(Segmentation::Make(5, {0}), dialseg::Error);
  CHECK_THROWS_AS(Segmentation::Make(5, {5}), dialseg::Error);
  const auto s = Segmentation::Make(6, {4, 2, 4});
  CHECK(s.boundaries == std::vector<std::size_t>{2, 4});
  CHECK(s.segment_count() == 3);
}

TEST_CASE("default Pk window is half the mean gold segment length") {
  CHECK(dialseg::DefaultPkWindow(Segmentation::Make(20, {10})) == 5);
  CHECK(dialseg::DefaultPkWindow(Segmentation::Make(20, {})) == 10);
  // Tiny segments still use a window of two.
  CHECK(dialseg::DefaultPkWindow(Segmentation::Make(6, {1, 2, 3, 4, 5})) == 2);
  // Clamped to n - 1.
  CHECK(dialseg::DefaultPkWindow(Segmentation::Make(2, {})) == 1);
}

TEST_CASE("Pk hand-computed values") {
  // n = 10, window 2, gold {5}, pred {} -> pairs (3,5) and (4,6) straddle.
  const auto gold = Segmentation::Make(10, {5});
  const auto none = Segmentation::Make(10, {});
  CHECK(dialseg::PkScore(gold, none, 2) == doctest::Approx(2.0 / 8.0));
  CHECK(dialseg::PkScore(gold, gold, 2) == 0.0);
  // Off-by-one prediction: pairs (5,7) and (3,5) disagree.
  CHECK(dialseg::PkScore(gold, Segmentation::Make(10, {6}), 2) ==
        doctest::Approx(2.0 / 8.0));
  CHECK_THROWS_AS(dialseg::PkScore(Segmentation::Make(1, {}), Segmentation::Make(1, {})),
                  dialseg::Error);
  CHECK_THROWS_AS(dialseg::PkScore(gold, Segmentation::Make(9, {})), dialseg::Error);
}

TEST_CASE("Pk matches pair enumeration") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = 2 + rng() % 29;
    const auto g = RandomSeg(rng, n, 8);
    const auto p = RandomSeg(rng, n, 8);
    const auto w = oracle::PkWindow(n, g.boundaries.size());
    CHECK(dialseg::DefaultPkWindow(g) == w);
    CHECK(dialseg::PkScore(g, p) == oracle::Pk(n, g.boundaries, p.boundaries, w));
    const std::size_t explicit_w = 1 + rng() % (n - 1);
    CHECK(dialseg::PkScore(g, p, explicit_w) ==
          oracle::Pk(n, g.boundaries, p.boundaries, explicit_w));
  }
}

TEST_CASE("precision and recall conventions for empty sets") {
  auto pr = dialseg::PrecisionRecallFromCounts(0, 0, 0);
  CHECK(pr.precision == 1.0);
  CHECK(pr.recall == 1.0);
  pr = dialseg::PrecisionRecallFromCounts(0, 0, 3);
  CHECK(pr.precision == 0.0);
  CHECK(pr.recall == 0.0);
  pr = dialseg::PrecisionRecallFromCounts(0, 2, 0);
  CHECK(pr.precision == 0.0);
  CHECK(pr.recall == 0.0);
  CHECK(dialseg::FBeta({0.0, 0.0}, 0.5) == 0.0);
}

TEST_CASE("F-beta weights precision twice as heavily at beta 0.5") {
  // P = 1, R = 0.5: F0.5 = 1.25 * 0.5 / (0.25 + 0.5) = 5/6.
  CHECK(dialseg::FBeta({1.0, 0.5}, 0.5) == doctest::Approx(5.0 / 6.0));
  // P = 0.5, R = 1: F0.5 = 1.25 * 0.5 / (0.125 + 1) = 5/9.
  CHECK(dialseg::FBeta({0.5, 1.0}, 0.5) == doctest::Approx(5.0 / 9.0));
  CHECK(dialseg::FBeta({0.5, 1.0}, 1.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("F1 counts exact matches only") {
  const auto g = Segmentation::Make(20, {5, 10, 15});
  CHECK(dialseg::F1Score(g, Segmentation::Make(20, {5, 11})) == doctest::Approx(0.4));
  CHECK(dialseg::F1Score(g, g) == 1.0);
  CHECK(dialseg::F1Score(Segmentation::Make(20, {}), Segmentation::Make(20, {})) == 1.0);
}

TEST_CASE("tolerance matching is one-to-one") {
  // Two predictions near one gold boundary: only one may match.
  const auto m = dialseg::MatchWithinTolerance({10}, {9, 11}, 1);
  CHECK(m.size() == 1);
  // Greedy leftmost assignment must not block a later match.
  const auto m2 = dialseg::MatchWithinTolerance({4, 6}, {5, 7}, 1);
  CHECK(m2.size() == 2);
  const auto g = Segmentation::Make(20, {4, 6});
  CHECK(dialseg::FkScore(g, Segmentation::Make(20, {5, 7}), 1) == 1.0);
  CHECK(dialseg::FkScore(g, Segmentation::Make(20, {5, 7}), 0) == 0.0);
}

TEST_CASE("Fk matches exhaustive maximum matching") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = 2 + rng() % 29;
    const auto g = RandomSeg(rng, n, 8);
    const auto p = RandomSeg(rng, n, 8);
    for (std::size_t k : {0, 1, 2, 3}) {
      const auto m = oracle::MaxMatching(g.boundaries, p.boundaries, k);
      CHECK(dialseg::MatchWithinTolerance(g.boundaries, p.boundaries, k).size() == m);
      CHECK(dialseg::FkScore(g, p, k) ==
            oracle::FScore(m, p.boundaries.size(), g.boundaries.size(), 0.5));
    }
  }
}

TEST_CASE("metric properties on random pairs") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 2 + rng() % 60;
    const auto g = RandomSeg(rng, n, 10);
    const auto p = RandomSeg(rng, n, 10);
    CHECK(dialseg::PkScore(g, g) == 0.0);
    CHECK(dialseg::F1Score(g, g) == 1.0);
    double prev = -1.0;
    for (std::size_t k = 0; k <= 4; ++k) {
      CHECK(dialseg::FkScore(g, g, k) == 1.0);
      const double fk = dialseg::FkScore(g, p, k);
      CHECK(fk >= 0.0);
      CHECK(fk <= 1.0);
      CHECK(fk >= prev);
      prev = fk;
    }
    const double pk = dialseg::PkScore(g, p);
    CHECK(pk >= 0.0);
    CHECK(pk <= 1.0);
  }
}

TEST_CASE("evaluate and aggregate") {
  dialseg::EvalOptions opt;
  const auto g = Segmentation::Make(10, {5});
  const auto r1 = dialseg::Evaluate("a", g, Segmentation::Make(10, {5}), opt);
  const auto r2 = dialseg::Evaluate("b", g, Segmentation::Make(10, {}), opt);
  CHECK(r1.fk.at(1) == 1.0);
  CHECK(r2.fk.at(2) == 0.0);
  REQUIRE(r1.diagnostics.size() == 2);
  CHECK(r1.diagnostics[0].matched.size() == 1);
  CHECK(r2.diagnostics[0].unmatched_gold == std::vector<std::size_t>{5});
  const auto agg = dialseg::Aggregate({r1, r2});
  CHECK(agg.documents == 2);
  CHECK(agg.f1 == doctest::Approx(0.5));
  CHECK(agg.pk == doctest::Approx((r1.pk + r2.pk) / 2));
  CHECK_THROWS_AS(dialseg::Aggregate({}), dialseg::Error);

  opt.beta = 0.0;
  CHECK_THROWS_AS(opt.Validate(), dialseg::Error);
}

TEST_CASE("boundary files round-trip") {
  std::vector<dialseg::BoundaryRecord> recs = {
      {"ep1", Segmentation::Make(12, {3, 7})}, {"ep2", Segmentation::Make(4, {})}};
  const auto text = dialseg::ToBoundaryJsonl(recs);
  CHECK(text.find("{\"doc_id\":\"ep1\",\"n\":12,\"boundaries\":[3,7]}") != std::string::npos);
  CHECK(dialseg::ParseBoundaryJsonl(text, "mem") == recs);

  testutil::TempDir dir;
  dialseg::WriteBoundaryFile(recs, dir.file("b.jsonl"));
  CHECK(dialseg::LoadBoundaryFile(dir.file("b.jsonl")) == recs);

  CHECK_THROWS_AS(dialseg::ParseBoundaryJsonl("{\"doc_id\":\"x\",\"n\":3,\"boundaries\":[3]}\n", "m"),
                  dialseg::Error);
  CHECK_THROWS_AS(dialseg::ParseBoundaryJsonl("not json\n", "m"), dialseg::Error);
  CHECK_THROWS_AS(dialseg::LoadBoundaryFile(dir.file("missing.jsonl")), dialseg::Error);
}

TEST_CASE("evaluate records pairs documents by id") {
  testutil::WarningCapture warnings;
  const std::vector<dialseg::BoundaryRecord> gold = {
      {"a", Segmentation::Make(10, {5})}, {"b", Segmentation::Make(8, {4})}};
  const std::vector<dialseg::BoundaryRecord> pred = {{"a", Segmentation::Make(10, {5})}};
  const auto reports = dialseg::EvaluateRecords(gold, pred, {});
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].doc_id == "a");
  CHECK(warnings.messages.size() == 1);

  const std::vector<dialseg::BoundaryRecord> bad = {{"a", Segmentation::Make(9, {5})}};
  CHECK_THROWS_AS(dialseg::EvaluateRecords(gold, bad, {}), dialseg::Error);
}
