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

#include "eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "error.hpp"
#include "json.hpp"

namespace dialseg {
namespace {

void CheckComparable(const Segmentation& gold, const Segmentation& pred) {
  if (gold.n != pred.n) {
    Fail(ErrorCode::kInvalidArgument,
         "segmentations cover different lengths (" + std::to_string(gold.n) +
             " vs " + std::to_string(pred.n) + ")");
  }
}

// prefix[i] = number of boundaries g with g <= i.
std::vector<std::size_t> BoundaryPrefix(const Segmentation& s) {
  std::vector<std::size_t> prefix(s.n, 0);
  std::size_t b = 0;
  for (std::size_t i = 0; i < s.n; ++i) {
    while (b < s.boundaries.size() && s.boundaries[b] <= i) ++b;
    prefix[i] = b;
  }
  return prefix;
}

}  // namespace

std::size_t DefaultPkWindow(const Segmentation& gold) {
  if (gold.n < 2) Fail(ErrorCode::kUndefinedMetric, "Pk needs at least two utterances");
  const double half_mean =
      static_cast<double>(gold.n) / (2.0 * static_cast<double>(gold.segment_count()));
  const auto window = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(half_mean)));
  return std::min(window, gold.n - 1);
}

double PkScore(const Segmentation& gold, const Segmentation& pred,
               std::optional<std::size_t> window) {
  CheckComparable(gold, pred);
  if (gold.n < 2) Fail(ErrorCode::kUndefinedMetric, "Pk needs at least two utterances");
  std::size_t win = window ? *window : DefaultPkWindow(gold);
  if (win == 0) Fail(ErrorCode::kInvalidArgument, "Pk window must be >= 1");
  win = std::min(win, gold.n - 1);

  const auto gp = BoundaryPrefix(gold);
  const auto pp = BoundaryPrefix(pred);
  std::size_t disagreements = 0;
  const std::size_t pairs = gold.n - win;
  for (std::size_t i = 0; i < pairs; ++i) {
    const bool gold_same = gp[i + win] == gp[i];
    const bool pred_same = pp[i + win] == pp[i];
    if (gold_same != pred_same) ++disagreements;
  }
  return static_cast<double>(disagreements) / static_cast<double>(pairs);
}

PrecisionRecall PrecisionRecallFromCounts(std::size_t matched,
                                          std::size_t predicted,
                                          std::size_t gold) {
  PrecisionRecall pr;
  if (predicted == 0) {
    pr.precision = gold == 0 ? 1.0 : 0.0;
  } else {
    pr.precision = static_cast<double>(matched) / static_cast<double>(predicted);
  }
  if (gold == 0) {
    pr.recall = predicted == 0 ? 1.0 : 0.0;
  } else {
    pr.recall = static_cast<double>(matched) / static_cast<double>(gold);
  }
  return pr;
}

double FBeta(const PrecisionRecall& pr, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * pr.precision + pr.recall;
  if (pr.precision + pr.recall == 0.0 || denom == 0.0) return 0.0;
  return (1.0 + b2) * pr.precision * pr.recall / denom;
}

double F1Score(const Segmentation& gold, const Segmentation& pred) {
  CheckComparable(gold, pred);
  std::vector<std::size_t> common;
  std::set_intersection(gold.boundaries.begin(), gold.boundaries.end(),
                        pred.boundaries.begin(), pred.boundaries.end(),
                        std::back_inserter(common));
  return FBeta(PrecisionRecallFromCounts(common.size(), pred.boundaries.size(),
                                         gold.boundaries.size()),
               1.0);
}

// Greedy in sorted order: every prediction takes the leftmost gold boundary it
// can still reach. All eligibility intervals have the same width, so a gold
// boundary skipped as too far left is unreachable for every later prediction
// and the greedy choice never blocks a better matching.
std::vector<std::pair<std::size_t, std::size_t>> MatchWithinTolerance(
    const std::vector<std::size_t>& gold, const std::vector<std::size_t>& pred,
    std::size_t tolerance) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t j = 0;
  for (auto p : pred) {
    while (j < gold.size() && gold[j] + tolerance < p) ++j;
    if (j < gold.size() && gold[j] <= p + tolerance) {
      pairs.emplace_back(p, gold[j]);
      ++j;
    }
  }
  return pairs;
}

double FkScore(const Segmentation& gold, const Segmentation& pred,
               std::size_t tolerance, double beta) {
  CheckComparable(gold, pred);
  const auto matched =
      MatchWithinTolerance(gold.boundaries, pred.boundaries, tolerance).size();
  return FBeta(PrecisionRecallFromCounts(matched, pred.boundaries.size(),
                                         gold.boundaries.size()),
               beta);
}

void EvalOptions::Validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    Fail(ErrorCode::kConfig, "beta must be a finite value > 0");
  }
  if (pk_window && *pk_window == 0) Fail(ErrorCode::kConfig, "Pk window must be >= 1");
}

EvalReport Evaluate(const std::string& doc_id, const Segmentation& gold,
                    const Segmentation& pred, const EvalOptions& options) {
  EvalReport r;
  r.doc_id = doc_id;
  r.pk = PkScore(gold, pred, options.pk_window);
  r.f1 = F1Score(gold, pred);
  for (auto k : options.fk_tolerances) {
    MatchDiagnostics d;
    d.tolerance = k;
    d.matched = MatchWithinTolerance(gold.boundaries, pred.boundaries, k);
    std::set<std::size_t> mp;
    std::set<std::size_t> mg;
    for (const auto& [p, g] : d.matched) {
      mp.insert(p);
      mg.insert(g);
    }
    for (auto p : pred.boundaries) {
      if (!mp.count(p)) d.unmatched_pred.push_back(p);
    }
    for (auto g : gold.boundaries) {
      if (!mg.count(g)) d.unmatched_gold.push_back(g);
    }
    r.fk[k] = FBeta(PrecisionRecallFromCounts(d.matched.size(),
                                              pred.boundaries.size(),
                                              gold.boundaries.size()),
                    options.beta);
    r.diagnostics.push_back(std::move(d));
  }
  return r;
}

EvalReport Aggregate(const std::vector<EvalReport>& reports) {
  if (reports.empty()) Fail(ErrorCode::kInvalidArgument, "nothing to aggregate");
  EvalReport out;
  out.documents = 0;
  std::map<std::size_t, std::size_t> fk_counts;
  for (const auto& r : reports) {
    out.documents += r.documents;
    out.pk += r.pk;
    out.f1 += r.f1;
    for (const auto& [k, v] : r.fk) {
      out.fk[k] += v;
      ++fk_counts[k];
    }
  }
  const auto n = static_cast<double>(reports.size());
  out.pk /= n;
  out.f1 /= n;
  for (auto& [k, v] : out.fk) v /= static_cast<double>(fk_counts[k]);
  return out;
}

std::vector<BoundaryRecord> ParseBoundaryJsonl(const std::string& content,
                                               const std::string& source_name) {
  using nlohmann::json;
  std::vector<BoundaryRecord> out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    const std::string line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = source_name + ":" + std::to_string(line_no) + ": ";
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorCode::kParse, where + "invalid JSON at byte " + std::to_string(e.byte));
    }
    if (!rec.is_object() || !rec.contains("doc_id") || !rec["doc_id"].is_string() ||
        !rec.contains("n") || !rec["n"].is_number_unsigned() ||
        !rec.contains("boundaries") || !rec["boundaries"].is_array()) {
      Fail(ErrorCode::kParse, where + "expected {doc_id, n, boundaries}");
    }
    BoundaryRecord r;
    r.doc_id = rec["doc_id"].get<std::string>();
    if (!seen.insert(r.doc_id).second) {
      Fail(ErrorCode::kParse, where + "duplicate doc_id '" + r.doc_id + "'");
    }
    const auto n = rec["n"].get<std::size_t>();
    std::vector<std::size_t> b;
    for (const auto& g : rec["boundaries"]) {
      if (!g.is_number_unsigned()) {
        Fail(ErrorCode::kParse, where + "boundaries must be non-negative integers");
      }
      b.push_back(g.get<std::size_t>());
    }
    try {
      r.segmentation = Segmentation::Make(n, std::move(b));
    } catch (const Error& e) {
      Fail(ErrorCode::kParse, where + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BoundaryRecord> LoadBoundaryFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return ParseBoundaryJsonl(content, path);
}

std::string ToBoundaryJsonl(const std::vector<BoundaryRecord>& records) {
  using nlohmann::ordered_json;
  std::string out;
  for (const auto& r : records) {
    ordered_json rec;
    rec["doc_id"] = r.doc_id;
    rec["n"] = r.segmentation.n;
    rec["boundaries"] = r.segmentation.boundaries;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

void WriteBoundaryFile(const std::vector<BoundaryRecord>& records,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << ToBoundaryJsonl(records);
}

std::vector<EvalReport> EvaluateRecords(const std::vector<BoundaryRecord>& gold,
                                        const std::vector<BoundaryRecord>& pred,
                                        const EvalOptions& options) {
  options.Validate();
  std::map<std::string, const BoundaryRecord*> by_id;
  for (const auto& g : gold) by_id[g.doc_id] = &g;
  std::vector<EvalReport> reports;
  std::set<std::string> used;
  for (const auto& p : pred) {
    auto it = by_id.find(p.doc_id);
    if (it == by_id.end()) {
      Warn("no gold boundaries for document '" + p.doc_id + "'; skipped");
      continue;
    }
    used.insert(p.doc_id);
    const auto& g = it->second->segmentation;
    if (g.n != p.segmentation.n) {
      Fail(ErrorCode::kInvalidArgument,
           "document '" + p.doc_id + "': gold has " + std::to_string(g.n) +
               " utterances, prediction has " + std::to_string(p.segmentation.n));
    }
    if (g.n < 2) {
      Warn("document '" + p.doc_id + "' has fewer than two utterances; skipped");
      continue;
    }
    reports.push_back(Evaluate(p.doc_id, g, p.segmentation, options));
  }
  for (const auto& g : gold) {
    if (!used.count(g.doc_id)) {
      Warn("no prediction for document '" + g.doc_id + "'; skipped");
    }
  }
  return reports;
}

}  // namespace dialseg
