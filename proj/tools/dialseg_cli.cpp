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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dialseg/dialseg.h"

namespace {

// Thrown after a C API call fails; carries the status as exit code.
struct ApiFailure {
  dialseg_status status;
};

void Check(dialseg_status status) {
  if (status != DIALSEG_OK) {
    std::cerr << "dialseg: " << dialseg_status_name(status) << ": "
              << dialseg_last_error() << "\n";
    throw ApiFailure{status};
  }
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ConfigPtr = std::unique_ptr<dialseg_config, Deleter<dialseg_config, dialseg_config_destroy>>;
using CorpusPtr = std::unique_ptr<dialseg_corpus, Deleter<dialseg_corpus, dialseg_corpus_destroy>>;
using BoundariesPtr =
    std::unique_ptr<dialseg_boundaries, Deleter<dialseg_boundaries, dialseg_boundaries_destroy>>;
using ReportPtr = std::unique_ptr<dialseg_report, Deleter<dialseg_report, dialseg_report_destroy>>;

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { dialseg_string_free(text); }
  std::string str() const { return text ? text : ""; }
};

// Settings shared by every subcommand that builds a configuration.
struct Settings {
  std::string config_file;
  std::vector<std::string> corpus;
  std::map<std::string, std::string> flags;
  std::vector<std::string> overrides;  // key=value
};

void AddSettings(CLI::App* cmd, Settings& s, bool with_corpus) {
  cmd->add_option("-c,--config", s.config_file, "JSON configuration file")
      ->check(CLI::ExistingFile);
  if (with_corpus) {
    cmd->add_option("--corpus", s.corpus, "Corpus file or directory (repeatable)");
  }
  for (std::size_t i = 0; const char* key = dialseg_config_key(i); ++i) {
    const std::string name(key);
    if (name == "corpus") continue;
    cmd->add_option("--" + name, s.flags[name], "Setting '" + name + "'");
  }
  cmd->add_option("--set", s.overrides, "Extra KEY=VALUE setting (repeatable)");
}

ConfigPtr BuildConfig(const Settings& s, CLI::App* cmd) {
  dialseg_config* raw = nullptr;
  Check(dialseg_config_create(&raw));
  ConfigPtr config(raw);
  if (!s.config_file.empty()) Check(dialseg_config_load_json(config.get(), s.config_file.c_str()));
  if (!s.corpus.empty()) {
    std::string joined;
    for (const auto& p : s.corpus) joined += (joined.empty() ? "" : ",") + p;
    Check(dialseg_config_set(config.get(), "corpus", joined.c_str()));
  }
  for (const auto& [key, value] : s.flags) {
    if (cmd->count("--" + key) > 0) Check(dialseg_config_set(config.get(), key.c_str(), value.c_str()));
  }
  for (const auto& kv : s.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "dialseg: --set expects KEY=VALUE, got '" << kv << "'\n";
      throw ApiFailure{DIALSEG_ERR_CONFIG};
    }
    Check(dialseg_config_set(config.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  return config;
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) {
    std::cerr << "dialseg: cannot write '" << path << "'\n";
    throw ApiFailure{DIALSEG_ERR_IO};
  }
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

// Segments the configured corpus; optionally writes gold and prints metrics.
void SegmentCommand(const Settings& s, CLI::App* cmd, const char* variant,
                    const std::string& out, const std::string& gold_out,
                    bool evaluate, bool tsv) {
  auto config = BuildConfig(s, cmd);
  dialseg_corpus* corpus_raw = nullptr;
  Check(dialseg_corpus_load(config.get(), &corpus_raw));
  CorpusPtr corpus(corpus_raw);

  dialseg_boundaries* pred_raw = nullptr;
  Check(dialseg_segment(corpus.get(), config.get(), variant, &pred_raw));
  BoundariesPtr pred(pred_raw);
  OwnedString jsonl;
  Check(dialseg_boundaries_to_jsonl(pred.get(), &jsonl.text));
  if (evaluate && (out.empty() || out == "-")) {
    std::cerr << "dialseg: --evaluate needs --out FILE so boundaries and metrics do not mix\n";
    throw ApiFailure{DIALSEG_ERR_INVALID_ARGUMENT};
  }
  Emit(jsonl.str(), out);

  if (gold_out.empty() && !evaluate) return;
  dialseg_boundaries* gold_raw = nullptr;
  Check(dialseg_boundaries_gold(corpus.get(), &gold_raw));
  BoundariesPtr gold(gold_raw);
  if (!gold_out.empty()) Check(dialseg_boundaries_write(gold.get(), gold_out.c_str()));
  if (evaluate) {
    dialseg_report* report_raw = nullptr;
    Check(dialseg_evaluate(gold.get(), pred.get(), config.get(), &report_raw));
    ReportPtr report(report_raw);
    OwnedString table;
    Check(dialseg_report_format(report.get(), tsv ? 0 : 1, &table.text));
    std::cout << table.str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic segmentation of multi-party dialogue transcripts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dialseg_version()));
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  Settings seg_settings;
  std::string seg_variant, seg_out, seg_gold;
  bool seg_eval = false, seg_tsv = false;
  auto* segment = app.add_subcommand("segment", "Segment a corpus into a boundary file");
  AddSettings(segment, seg_settings, true);
  segment->add_option("--variant", seg_variant,
                      "Segmenter, e.g. bc, bc+sd, bc+vi+co+sd (default: --method/--features)");
  segment->add_option("-o,--out", seg_out, "Boundary JSONL output (default stdout)");
  segment->add_option("--gold-out", seg_gold, "Also write gold boundaries here");
  segment->add_flag("--evaluate", seg_eval, "Print metrics against gold (needs --out)");
  segment->add_flag("--tsv", seg_tsv, "Metrics as TSV instead of a table");

  Settings base_settings;
  std::string base_kind, base_out, base_gold;
  bool base_eval = false, base_tsv = false;
  auto* baseline = app.add_subcommand("baseline", "Run the random or OG TextTiling baseline");
  baseline->add_option("kind", base_kind, "random | og")
      ->required()
      ->check(CLI::IsMember({"random", "og"}));
  AddSettings(baseline, base_settings, true);
  baseline->add_option("-o,--out", base_out, "Boundary JSONL output (default stdout)");
  baseline->add_option("--gold-out", base_gold, "Also write gold boundaries here");
  baseline->add_flag("--evaluate", base_eval, "Print metrics against gold (needs --out)");
  baseline->add_flag("--tsv", base_tsv, "Metrics as TSV instead of a table");

  Settings eval_settings;
  std::string gold_path, pred_path;
  bool eval_tsv = false;
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted boundaries against gold");
  evaluate->add_option("--gold", gold_path, "Gold boundary JSONL")->required();
  evaluate->add_option("--pred", pred_path, "Predicted boundary JSONL")->required();
  AddSettings(evaluate, eval_settings, false);
  evaluate->add_flag("--tsv", eval_tsv, "TSV instead of a table");

  Settings exp_settings;
  bool exp_tsv = false;
  auto* experiment = app.add_subcommand("experiment", "Run configured variants and report");
  AddSettings(experiment, exp_settings, true);
  experiment->add_flag("--tsv", exp_tsv, "Print the report as TSV");

  Settings sweep_settings;
  std::vector<std::string> axes;
  auto* sweep = app.add_subcommand("sweep", "Grid over settings; one experiment per point");
  AddSettings(sweep, sweep_settings, true);
  sweep->add_option("--axis", axes, "KEY=V1,V2,... (repeatable)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : DIALSEG_ERR_CONFIG;
  }

  if (quiet) {
    dialseg_set_log_callback([](const char*, void*) {}, nullptr);
  } else {
    dialseg_set_log_callback(
        [](const char* msg, void*) { std::fprintf(stderr, "warning: %s\n", msg); }, nullptr);
  }

  try {
    if (*segment) {
      SegmentCommand(seg_settings, segment, seg_variant.empty() ? nullptr : seg_variant.c_str(),
                     seg_out, seg_gold, seg_eval, seg_tsv);
    } else if (*baseline) {
      SegmentCommand(base_settings, baseline, base_kind.c_str(), base_out, base_gold, base_eval,
                     base_tsv);
    } else if (*evaluate) {
      auto config = BuildConfig(eval_settings, evaluate);
      dialseg_boundaries* gold_raw = nullptr;
      Check(dialseg_boundaries_load(gold_path.c_str(), &gold_raw));
      BoundariesPtr gold(gold_raw);
      dialseg_boundaries* pred_raw = nullptr;
      Check(dialseg_boundaries_load(pred_path.c_str(), &pred_raw));
      BoundariesPtr pred(pred_raw);
      dialseg_report* report_raw = nullptr;
      Check(dialseg_evaluate(gold.get(), pred.get(), config.get(), &report_raw));
      ReportPtr report(report_raw);
      OwnedString table;
      Check(dialseg_report_format(report.get(), eval_tsv ? 0 : 1, &table.text));
      std::cout << table.str();
    } else if (*experiment) {
      auto config = BuildConfig(exp_settings, experiment);
      OwnedString tsv, pretty;
      Check(dialseg_experiment_run(config.get(), &tsv.text, &pretty.text));
      std::cout << (exp_tsv ? tsv.str() : pretty.str());
    } else if (*sweep) {
      auto config = BuildConfig(sweep_settings, sweep);
      std::vector<const char*> raw;
      for (const auto& a : axes) raw.push_back(a.c_str());
      OwnedString index;
      Check(dialseg_sweep_run(config.get(), raw.data(), raw.size(), &index.text));
      std::cout << index.str();
    }
  } catch (const ApiFailure& f) {
    return static_cast<int>(f.status);
  }
  return 0;
}
