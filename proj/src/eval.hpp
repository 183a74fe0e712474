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

// Segmentation metrics: Pk, exact-match F1 and the tolerance-relaxed,
// precision-weighted Fk.

#ifndef DIALSEG_EVAL_HPP_
#define DIALSEG_EVAL_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segmentation.hpp"

namespace dialseg {

// max(2, round(n / (2 * gold segments))), clamped to n - 1.
std::size_t DefaultPkWindow(const Segmentation& gold);

// Fraction of position pairs (i, i + window) on which gold and prediction
// disagree about "same segment". Throws Error(kUndefinedMetric) for n < 2.
double PkScore(const Segmentation& gold, const Segmentation& pred,
               std::optional<std::size_t> window = std::nullopt);

// Precision/recall with the conventions used by every F measure here: an
// empty prediction has precision 1 iff gold is empty too, and symmetrically
// for recall.
struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};
PrecisionRecall PrecisionRecallFromCounts(std::size_t matched,
                                          std::size_t predicted,
                                          std::size_t gold);

// (1 + b^2) P R / (b^2 P + R); 0 when P + R = 0.
double FBeta(const PrecisionRecall& pr, double beta);

double F1Score(const Segmentation& gold, const Segmentation& pred);

// Maximum one-to-one matching of predictions to gold boundaries with
// |p - g| <= tolerance. Both inputs must be sorted. Returns (pred, gold) pairs.
std::vector<std::pair<std::size_t, std::size_t>> MatchWithinTolerance(
    const std::vector<std::size_t>& gold, const std::vector<std::size_t>& pred,
    std::size_t tolerance);

double FkScore(const Segmentation& gold, const Segmentation& pred,
               std::size_t tolerance, double beta = 0.5);

struct EvalOptions {
  std::vector<std::size_t> fk_tolerances = {1, 2};
  double beta = 0.5;
  std::optional<std::size_t> pk_window;

  void Validate() const;
};

struct MatchDiagnostics {
  std::size_t tolerance = 0;
  std::vector<std::pair<std::size_t, std::size_t>> matched;  // (pred, gold)
  std::vector<std::size_t> unmatched_pred;
  std::vector<std::size_t> unmatched_gold;
};

struct EvalReport {
  std::string doc_id;        // empty for corpus aggregates
  std::size_t documents = 1;
  double pk = 0.0;
  double f1 = 0.0;
  std::map<std::size_t, double> fk;  // tolerance -> score
  std::vector<MatchDiagnostics> diagnostics;
};

EvalReport Evaluate(const std::string& doc_id, const Segmentation& gold,
                    const Segmentation& pred, const EvalOptions& options);

// Unweighted mean over documents. Throws Error(kInvalidArgument) when empty.
EvalReport Aggregate(const std::vector<EvalReport>& reports);

// Boundary files: one JSON object per line, {doc_id, n, boundaries}.
struct BoundaryRecord {
  std::string doc_id;
  Segmentation segmentation;

  bool operator==(const BoundaryRecord&) const = default;
};

std::vector<BoundaryRecord> ParseBoundaryJsonl(const std::string& content,
                                               const std::string& source_name);
std::vector<BoundaryRecord> LoadBoundaryFile(const std::string& path);
std::string ToBoundaryJsonl(const std::vector<BoundaryRecord>& records);
void WriteBoundaryFile(const std::vector<BoundaryRecord>& records,
                       const std::string& path);

// Evaluates every predicted document against the gold document with the same
// doc_id. Documents missing on either side are skipped with a warning;
// differing utterance counts are an error.
std::vector<EvalReport> EvaluateRecords(const std::vector<BoundaryRecord>& gold,
                                        const std::vector<BoundaryRecord>& pred,
                                        const EvalOptions& options);

}  // namespace dialseg

#endif  // DIALSEG_EVAL_HPP_
