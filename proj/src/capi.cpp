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

#include "dialseg/dialseg.h"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <new>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "harness.hpp"

struct dialseg_config {
  dialseg::ExperimentConfig config;
};

struct dialseg_corpus {
  std::vector<dialseg::Transcript> docs;
};

struct dialseg_boundaries {
  std::vector<dialseg::BoundaryRecord> records;
};

struct dialseg_report {
  std::vector<dialseg::EvalReport> documents;
  dialseg::EvalReport summary;
  dialseg::EvalOptions options;
};

namespace {

thread_local std::string g_last_error;

std::mutex g_log_mutex;
dialseg_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

template <typename Fn>
dialseg_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DIALSEG_OK;
  } catch (const dialseg::Error& e) {
    g_last_error = e.what();
    return static_cast<dialseg_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DIALSEG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DIALSEG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return DIALSEG_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) dialseg::Fail(dialseg::ErrorCode::kInvalidArgument, what);
}

char* Dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
  return buf;
}

std::string Align(const std::string& tsv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(tsv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      auto tab = line.find('\t', pos);
      cells.push_back(line.substr(pos, tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    rows.push_back(std::move(cells));
  }
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      const auto& cell = rows[i][c];
      const std::string pad(width[c] - cell.size(), ' ');
      out += c == 0 ? cell + pad : "  " + pad + cell;
    }
    out += '\n';
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
      out += std::string(total, '-') + '\n';
    }
  }
  return out;
}

}  // namespace

extern "C" {

const char* dialseg_version(void) { return dialseg::kVersion.data(); }

const char* dialseg_status_name(dialseg_status status) {
  switch (status) {
    case DIALSEG_OK: return "ok";
    case DIALSEG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DIALSEG_ERR_CONFIG: return "configuration error";
    case DIALSEG_ERR_PARSE: return "parse error";
    case DIALSEG_ERR_IO: return "i/o error";
    case DIALSEG_ERR_EMPTY_DOCUMENT: return "empty document";
    case DIALSEG_ERR_UNDEFINED_METRIC: return "undefined metric";
    case DIALSEG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dialseg_last_error(void) { return g_last_error.c_str(); }

void dialseg_set_log_callback(dialseg_log_fn fn, void* user_data) {
  {
    std::lock_guard<std::mutex> lock(g_log_mutex);
    g_log_fn = fn;
    g_log_user = user_data;
  }
  if (!fn) {
    dialseg::SetWarningSink(nullptr);
    return;
  }
  dialseg::SetWarningSink([](std::string_view message) {
    std::lock_guard<std::mutex> lock(g_log_mutex);
    if (g_log_fn) g_log_fn(std::string(message).c_str(), g_log_user);
  });
}

void dialseg_string_free(char* text) { std::free(text); }

dialseg_status dialseg_config_create(dialseg_config** out) {
  return Guard([&] {
    Require(out != nullptr, "out must not be NULL");
    *out = new dialseg_config();
  });
}

void dialseg_config_destroy(dialseg_config* config) { delete config; }

dialseg_status dialseg_config_set(dialseg_config* config, const char* key,
                                  const char* value) {
  return Guard([&] {
    Require(config && key && value, "config, key and value must not be NULL");
    config->config.Set(key, value);
  });
}

dialseg_status dialseg_config_load_json(dialseg_config* config, const char* path) {
  return Guard([&] {
    Require(config && path, "config and path must not be NULL");
    config->config.LoadJsonFile(path);
  });
}

dialseg_status dialseg_config_to_json(const dialseg_config* config, char** out_json) {
  return Guard([&] {
    Require(config && out_json, "config and out_json must not be NULL");
    *out_json = Dup(config->config.ToJson());
  });
}

const char* dialseg_config_key(size_t index) {
  const auto& keys = dialseg::ConfigKeys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

dialseg_status dialseg_corpus_load(const dialseg_config* config,
                                   dialseg_corpus** out) {
  return Guard([&] {
    Require(config && out, "config and out must not be NULL");
    if (config->config.corpus_paths.empty()) {
      dialseg::Fail(dialseg::ErrorCode::kConfig, "no corpus path configured");
    }
    auto corpus = std::make_unique<dialseg_corpus>();
    corpus->docs = dialseg::LoadExperimentCorpus(config->config);
    *out = corpus.release();
  });
}

void dialseg_corpus_destroy(dialseg_corpus* corpus) { delete corpus; }

size_t dialseg_corpus_size(const dialseg_corpus* corpus) {
  return corpus ? corpus->docs.size() : 0;
}

dialseg_status dialseg_corpus_doc_info(const dialseg_corpus* corpus, size_t index,
                                       const char** doc_id, size_t* utterances,
                                       size_t* gold_boundaries) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus must not be NULL");
    Require(index < corpus->docs.size(), "document index out of range");
    const auto& t = corpus->docs[index];
    if (doc_id) *doc_id = t.doc_id.c_str();
    if (utterances) *utterances = t.size();
    if (gold_boundaries) *gold_boundaries = t.gold_boundaries.size();
  });
}

dialseg_status dialseg_corpus_write_native(const dialseg_corpus* corpus,
                                           const char* path) {
  return Guard([&] {
    Require(corpus && path, "corpus and path must not be NULL");
    dialseg::WriteNativeJsonl(corpus->docs, path);
  });
}

dialseg_status dialseg_segment(const dialseg_corpus* corpus,
                               const dialseg_config* config, const char* variant,
                               dialseg_boundaries** out) {
  return Guard([&] {
    Require(corpus && config && out, "corpus, config and out must not be NULL");
    const dialseg::Variant v =
        variant ? dialseg::ParseVariant(variant)
                : dialseg::VariantFromPipeline(config->config.pipeline);
    config->config.pipeline.tiling.Validate();
    config->config.pipeline.features.Validate();
    auto set = std::make_unique<dialseg_boundaries>();
    set->records = dialseg::SegmentCorpus(corpus->docs, v, config->config);
    *out = set.release();
  });
}

dialseg_status dialseg_boundaries_gold(const dialseg_corpus* corpus,
                                       dialseg_boundaries** out) {
  return Guard([&] {
    Require(corpus && out, "corpus and out must not be NULL");
    auto set = std::make_unique<dialseg_boundaries>();
    set->records = dialseg::GoldRecords(corpus->docs);
    *out = set.release();
  });
}

dialseg_status dialseg_boundaries_load(const char* path, dialseg_boundaries** out) {
  return Guard([&] {
    Require(path && out, "path and out must not be NULL");
    auto set = std::make_unique<dialseg_boundaries>();
    set->records = dialseg::LoadBoundaryFile(path);
    *out = set.release();
  });
}

dialseg_status dialseg_boundaries_write(const dialseg_boundaries* set,
                                        const char* path) {
  return Guard([&] {
    Require(set && path, "set and path must not be NULL");
    dialseg::WriteBoundaryFile(set->records, path);
  });
}

dialseg_status dialseg_boundaries_to_jsonl(const dialseg_boundaries* set,
                                           char** out_text) {
  return Guard([&] {
    Require(set && out_text, "set and out_text must not be NULL");
    *out_text = Dup(dialseg::ToBoundaryJsonl(set->records));
  });
}

void dialseg_boundaries_destroy(dialseg_boundaries* set) { delete set; }

size_t dialseg_boundaries_size(const dialseg_boundaries* set) {
  return set ? set->records.size() : 0;
}

dialseg_status dialseg_boundaries_get(const dialseg_boundaries* set, size_t index,
                                      const char** doc_id, size_t* utterances,
                                      const size_t** gaps, size_t* gap_count) {
  return Guard([&] {
    Require(set != nullptr, "set must not be NULL");
    Require(index < set->records.size(), "record index out of range");
    const auto& r = set->records[index];
    if (doc_id) *doc_id = r.doc_id.c_str();
    if (utterances) *utterances = r.segmentation.n;
    if (gaps) *gaps = r.segmentation.boundaries.data();
    if (gap_count) *gap_count = r.segmentation.boundaries.size();
  });
}

dialseg_status dialseg_evaluate(const dialseg_boundaries* gold,
                                const dialseg_boundaries* predicted,
                                const dialseg_config* config,
                                dialseg_report** out) {
  return Guard([&] {
    Require(gold && predicted && config && out,
            "gold, predicted, config and out must not be NULL");
    const auto& options = config->config.eval;
    options.Validate();
    auto report = std::make_unique<dialseg_report>();
    report->options = options;
    report->documents =
        dialseg::EvaluateRecords(gold->records, predicted->records, options);
    if (report->documents.empty()) {
      dialseg::Fail(dialseg::ErrorCode::kUndefinedMetric,
                    "no document could be evaluated");
    }
    report->summary = dialseg::Aggregate(report->documents);
    *out = report.release();
  });
}

void dialseg_report_destroy(dialseg_report* report) { delete report; }

size_t dialseg_report_documents(const dialseg_report* report) {
  return report ? report->documents.size() : 0;
}

dialseg_status dialseg_report_pk(const dialseg_report* report, double* out) {
  return Guard([&] {
    Require(report && out, "report and out must not be NULL");
    *out = report->summary.pk;
  });
}

dialseg_status dialseg_report_f1(const dialseg_report* report, double* out) {
  return Guard([&] {
    Require(report && out, "report and out must not be NULL");
    *out = report->summary.f1;
  });
}

dialseg_status dialseg_report_fk(const dialseg_report* report, size_t tolerance,
                                 double* out) {
  return Guard([&] {
    Require(report && out, "report and out must not be NULL");
    auto it = report->summary.fk.find(tolerance);
    Require(it != report->summary.fk.end(), "tolerance was not evaluated");
    *out = it->second;
  });
}

dialseg_status dialseg_report_format(const dialseg_report* report, int pretty,
                                     char** out_text) {
  return Guard([&] {
    Require(report && out_text, "report and out_text must not be NULL");
    dialseg::VariantRun run;
    run.reports = report->documents;
    std::string text = dialseg::FormatPerDocumentTsv(run, report->options);
    const auto& s = report->summary;
    text += "ALL\t\t\t" + Percent(s.f1);
    for (auto k : report->options.fk_tolerances) text += "\t" + Percent(s.fk.at(k));
    text += "\t" + Percent(s.pk) + "\n";
    *out_text = Dup(pretty ? Align(text) : text);
  });
}

dialseg_status dialseg_experiment_run(const dialseg_config* config,
                                      char** report_tsv, char** report_pretty) {
  return Guard([&] {
    Require(config != nullptr, "config must not be NULL");
    auto result = dialseg::RunExperiment(config->config);
    char* tsv = report_tsv ? Dup(result.report_tsv) : nullptr;
    char* pretty = nullptr;
    try {
      pretty = report_pretty ? Dup(result.report_pretty) : nullptr;
    } catch (...) {
      std::free(tsv);
      throw;
    }
    if (report_tsv) *report_tsv = tsv;
    if (report_pretty) *report_pretty = pretty;
  });
}

dialseg_status dialseg_sweep_run(const dialseg_config* config,
                                 const char* const* axes, size_t axis_count,
                                 char** index_tsv) {
  return Guard([&] {
    Require(config != nullptr, "config must not be NULL");
    Require(axes != nullptr || axis_count == 0, "axes must not be NULL");
    std::vector<dialseg::SweepAxis> parsed;
    for (size_t i = 0; i < axis_count; ++i) {
      Require(axes[i] != nullptr, "axis entries must not be NULL");
      parsed.push_back(dialseg::ParseSweepAxis(axes[i]));
    }
    auto result = dialseg::RunSweep(config->config, parsed);
    if (index_tsv) *index_tsv = Dup(result.index_tsv);
  });
}

}  // extern "C"
