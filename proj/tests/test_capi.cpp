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

// Exercises the shared library strictly through its C header.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dialseg/dialseg.h"
#include "doctest.h"

namespace {

std::string Data(const char* name) { return std::string(DIALSEG_TEST_DATA) + "/" + name; }

std::string Take(char* s) {
  std::string out = s ? s : "";
  dialseg_string_free(s);
  return out;
}

struct Fixture {
  dialseg_config* config = nullptr;
  dialseg_corpus* corpus = nullptr;
  Fixture() {
    REQUIRE(dialseg_config_create(&config) == DIALSEG_OK);
    REQUIRE(dialseg_config_set(config, "corpus", Data("episodes.jsonl").c_str()) == DIALSEG_OK);
    REQUIRE(dialseg_corpus_load(config, &corpus) == DIALSEG_OK);
  }
  ~Fixture() {
    dialseg_corpus_destroy(corpus);
    dialseg_config_destroy(config);
  }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(dialseg_version()) == "0.1.0");
  CHECK(std::string(dialseg_status_name(DIALSEG_ERR_PARSE)) == "parse error");
  CHECK(dialseg_config_key(0) != nullptr);
  CHECK(dialseg_config_key(10000) == nullptr);
}

TEST_CASE("errors carry categories and messages") {
  dialseg_config* config = nullptr;
  REQUIRE(dialseg_config_create(&config) == DIALSEG_OK);
  CHECK(dialseg_config_set(config, "k", "zero") == DIALSEG_ERR_CONFIG);
  CHECK(std::string(dialseg_last_error()).find("'k'") != std::string::npos);
  CHECK(dialseg_config_set(config, nullptr, "1") == DIALSEG_ERR_INVALID_ARGUMENT);
  CHECK(dialseg_config_set(config, "k", "3") == DIALSEG_OK);
  CHECK(std::string(dialseg_last_error()).empty());
  CHECK(dialseg_config_load_json(config, "/nonexistent/config.json") == DIALSEG_ERR_IO);

  dialseg_corpus* corpus = nullptr;
  CHECK(dialseg_corpus_load(config, &corpus) == DIALSEG_ERR_CONFIG);
  CHECK(corpus == nullptr);
  dialseg_config_set(config, "corpus", "/nonexistent/corpus.jsonl");
  CHECK(dialseg_corpus_load(config, &corpus) == DIALSEG_ERR_IO);
  const auto bad = std::filesystem::temp_directory_path() / "dialseg_capi_bad.jsonl";
  std::ofstream(bad) << "{not json\n";
  dialseg_config_set(config, "corpus", bad.string().c_str());
  CHECK(dialseg_corpus_load(config, &corpus) == DIALSEG_ERR_PARSE);
  std::filesystem::remove(bad);
  CHECK(dialseg_config_create(nullptr) == DIALSEG_ERR_INVALID_ARGUMENT);
  dialseg_config_destroy(config);
  dialseg_corpus_destroy(nullptr);
  dialseg_boundaries_destroy(nullptr);
  dialseg_report_destroy(nullptr);
}

TEST_CASE("config serialises to JSON") {
  dialseg_config* config = nullptr;
  REQUIRE(dialseg_config_create(&config) == DIALSEG_OK);
  dialseg_config_set(config, "w", "15");
  char* json = nullptr;
  REQUIRE(dialseg_config_to_json(config, &json) == DIALSEG_OK);
  CHECK(Take(json).find("\"w\": 15") != std::string::npos);
  dialseg_config_destroy(config);
}

TEST_CASE("corpus inspection") {
  Fixture f;
  CHECK(dialseg_corpus_size(f.corpus) == 8);
  const char* id = nullptr;
  size_t n = 0;
  size_t gold = 0;
  REQUIRE(dialseg_corpus_doc_info(f.corpus, 0, &id, &n, &gold) == DIALSEG_OK);
  CHECK(std::string(id) == "synth_e01");
  CHECK(n > 20);
  CHECK(gold >= 2);
  CHECK(dialseg_corpus_doc_info(f.corpus, 99, &id, &n, &gold) == DIALSEG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("segment, evaluate and format") {
  Fixture f;
  dialseg_boundaries* pred = nullptr;
  REQUIRE(dialseg_segment(f.corpus, f.config, "bc+sd", &pred) == DIALSEG_OK);
  CHECK(dialseg_boundaries_size(pred) == 8);
  const char* id = nullptr;
  size_t n = 0;
  const size_t* gaps = nullptr;
  size_t count = 0;
  REQUIRE(dialseg_boundaries_get(pred, 0, &id, &n, &gaps, &count) == DIALSEG_OK);
  for (size_t i = 0; i < count; ++i) {
    CHECK(gaps[i] >= 1);
    CHECK(gaps[i] < n);
  }

  dialseg_boundaries* gold = nullptr;
  REQUIRE(dialseg_boundaries_gold(f.corpus, &gold) == DIALSEG_OK);
  dialseg_report* report = nullptr;
  REQUIRE(dialseg_evaluate(gold, pred, f.config, &report) == DIALSEG_OK);
  CHECK(dialseg_report_documents(report) == 8);
  double pk = -1, f1 = -1, fk1 = -1;
  CHECK(dialseg_report_pk(report, &pk) == DIALSEG_OK);
  CHECK(dialseg_report_f1(report, &f1) == DIALSEG_OK);
  CHECK(dialseg_report_fk(report, 1, &fk1) == DIALSEG_OK);
  CHECK(dialseg_report_fk(report, 9, &fk1) == DIALSEG_ERR_INVALID_ARGUMENT);
  CHECK(pk >= 0.0);
  CHECK(pk <= 1.0);
  char* table = nullptr;
  REQUIRE(dialseg_report_format(report, 0, &table) == DIALSEG_OK);
  const std::string tsv = Take(table);
  CHECK(tsv.rfind("doc_id\tpredicted\tgold\tF1\tFk1\tFk2\tPk\n", 0) == 0);
  CHECK(tsv.find("\nALL\t") != std::string::npos);
  REQUIRE(dialseg_report_format(report, 1, &table) == DIALSEG_OK);
  CHECK(Take(table).find("-----") != std::string::npos);

  // Perfect prediction.
  dialseg_report* self = nullptr;
  REQUIRE(dialseg_evaluate(gold, gold, f.config, &self) == DIALSEG_OK);
  dialseg_report_pk(self, &pk);
  CHECK(pk == 0.0);

  dialseg_report_destroy(self);
  dialseg_report_destroy(report);
  dialseg_boundaries_destroy(gold);
  dialseg_boundaries_destroy(pred);
}

TEST_CASE("segment without a variant uses configured settings") {
  Fixture f;
  dialseg_config_set(f.config, "features", "sd");
  dialseg_boundaries* a = nullptr;
  dialseg_boundaries* b = nullptr;
  REQUIRE(dialseg_segment(f.corpus, f.config, nullptr, &a) == DIALSEG_OK);
  REQUIRE(dialseg_segment(f.corpus, f.config, "bc+sd", &b) == DIALSEG_OK);
  char* ta = nullptr;
  char* tb = nullptr;
  dialseg_boundaries_to_jsonl(a, &ta);
  dialseg_boundaries_to_jsonl(b, &tb);
  CHECK(Take(ta) == Take(tb));
  CHECK(dialseg_segment(f.corpus, f.config, "nope", &a) == DIALSEG_ERR_CONFIG);
  dialseg_boundaries_destroy(a);
  dialseg_boundaries_destroy(b);
}

TEST_CASE("boundary files through the C API") {
  Fixture f;
  const auto path = (std::filesystem::temp_directory_path() / "dialseg_capi_gold.jsonl").string();
  dialseg_boundaries* gold = nullptr;
  REQUIRE(dialseg_boundaries_gold(f.corpus, &gold) == DIALSEG_OK);
  REQUIRE(dialseg_boundaries_write(gold, path.c_str()) == DIALSEG_OK);
  dialseg_boundaries* back = nullptr;
  REQUIRE(dialseg_boundaries_load(path.c_str(), &back) == DIALSEG_OK);
  CHECK(dialseg_boundaries_size(back) == dialseg_boundaries_size(gold));
  std::remove(path.c_str());
  CHECK(dialseg_boundaries_load(path.c_str(), &back) == DIALSEG_ERR_IO);
  dialseg_boundaries_destroy(back);
  dialseg_boundaries_destroy(gold);
}

TEST_CASE("log callback receives warnings") {
  std::vector<std::string> seen;
  dialseg_set_log_callback(
      [](const char* msg, void* user) {
        static_cast<std::vector<std::string>*>(user)->push_back(msg);
      },
      &seen);
  Fixture f;
  dialseg_boundaries* gold = nullptr;
  dialseg_boundaries* one = nullptr;
  REQUIRE(dialseg_boundaries_gold(f.corpus, &gold) == DIALSEG_OK);
  const auto path = (std::filesystem::temp_directory_path() / "dialseg_capi_one.jsonl").string();
  if (FILE* fp = std::fopen(path.c_str(), "wb")) {
    std::fputs("{\"doc_id\":\"synth_e01\",\"n\":1,\"boundaries\":[]}\n", fp);
    std::fclose(fp);
  }
  // n differs from gold: an error, not a warning.
  REQUIRE(dialseg_boundaries_load(path.c_str(), &one) == DIALSEG_OK);
  dialseg_report* report = nullptr;
  CHECK(dialseg_evaluate(gold, one, f.config, &report) == DIALSEG_ERR_INVALID_ARGUMENT);
  // Missing documents only warn.
  dialseg_boundaries* empty = nullptr;
  if (FILE* fp = std::fopen(path.c_str(), "wb")) std::fclose(fp);
  REQUIRE(dialseg_boundaries_load(path.c_str(), &empty) == DIALSEG_OK);
  CHECK(dialseg_evaluate(gold, empty, f.config, &report) == DIALSEG_ERR_UNDEFINED_METRIC);
  CHECK(seen.size() == 8);
  dialseg_set_log_callback(nullptr, nullptr);
  std::remove(path.c_str());
  dialseg_boundaries_destroy(empty);
  dialseg_boundaries_destroy(one);
  dialseg_boundaries_destroy(gold);
}

TEST_CASE("experiment run through the C API") {
  dialseg_config* config = nullptr;
  REQUIRE(dialseg_config_create(&config) == DIALSEG_OK);
  dialseg_config_set(config, "corpus", Data("cm_season.json").c_str());
  dialseg_config_set(config, "format", "character-mining-json");
  dialseg_config_set(config, "variants", "bc,random");
  char* tsv = nullptr;
  REQUIRE(dialseg_experiment_run(config, &tsv, nullptr) == DIALSEG_OK);
  const std::string text = Take(tsv);
  CHECK(text.find("\nBC\t3\t") != std::string::npos);
  CHECK(text.find("\nRandom\t3\t") != std::string::npos);

  const char* axes[] = {"k=3,5"};
  char* index = nullptr;
  REQUIRE(dialseg_sweep_run(config, axes, 1, &index) == DIALSEG_OK);
  CHECK(Take(index).find("sweep_001\t5\tRandom") != std::string::npos);
  const char* bad[] = {"k"};
  CHECK(dialseg_sweep_run(config, bad, 1, &index) == DIALSEG_ERR_CONFIG);
  dialseg_config_destroy(config);
}
