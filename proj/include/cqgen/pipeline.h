// Copyright 2026 The cqgen Authors
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

#ifndef CQGEN_PIPELINE_H_
#define CQGEN_PIPELINE_H_

#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cqgen/decoder.h"
#include "cqgen/lm.h"
#include "cqgen/metrics.h"
#include "cqgen/prompting.h"
#include "cqgen/rankers.h"

namespace cqgen {

// One (query, facet, reference question) example.
struct DatasetRow {
  std::string query;
  std::string facet;
  std::string reference_question;

  bool operator==(const DatasetRow&) const = default;
};

// Tab-separated, three columns. A first line whose cells are all known
// column names is a header and fixes the column order; otherwise the order
// is query, facet, question. Blank lines are skipped.
std::vector<DatasetRow> parse_dataset(std::istream& in);
// Throws DatasetFileError when the file cannot be opened.
std::vector<DatasetRow> load_dataset(const std::filesystem::path& path);

enum class GenerationMode {
  kZsfc,                // facet-constrained decoding + templates + ranking
  kTemplate0,           // templates, plain beam search, ranking
  kQGpt0,               // plain beam search on the query
  kQfGpt0,              // plain beam search on "facet [SEP] query"
  kPrompt0,             // plain beam search on query + instruction sentence
  kSubjectConstrained,  // like zsfc with query subject words as constraints
  kTemplateFacet,       // "template facet" strings, perplexity-ranked
};

std::string_view to_string(GenerationMode mode);
GenerationMode parse_generation_mode(std::string_view name);
const std::vector<GenerationMode>& all_generation_modes();
bool uses_templates(GenerationMode mode);

// The instruction sentence appended to the query in prompt_0 mode.
std::string instruction_sentence(std::string_view facet);

enum class RankerKind { kPerplexity, kAutoScore, kWsdm, kExternal };

std::string_view to_string(RankerKind kind);
RankerKind parse_ranker_kind(std::string_view name);

struct RankerConfig {
  RankerKind kind = RankerKind::kWsdm;
  WsdmParams wsdm;
  AutoScoreWeights autoscore;
  std::string scorer_endpoint;
  bool scorer_concurrent = false;
  bool fallback_to_wsdm = false;
  double timeout_s = 30.0;
};

struct RankingInput {
  std::string_view query;
  std::string_view facet;
  const std::vector<std::string>& subject_words;
  const std::vector<std::string>& candidates;
};

// Dispatches to the configured ranker.
class Ranker {
 public:
  explicit Ranker(RankerConfig config);

  // `ranker_used` receives the name of the ranker that produced the list
  // (differs from name() after a WSDM fallback).
  RankedList rank(const RankingInput& input, const LanguageModel& lm,
                  std::string* ranker_used = nullptr) const;
  std::string name() const { return std::string(to_string(config_.kind)); }
  const RankerConfig& config() const { return config_; }

 private:
  RankerConfig config_;
  std::shared_ptr<ExternalScorer> scorer_;
};

struct GenerationRecord {
  std::size_t row_id = 0;
  GenerationMode mode = GenerationMode::kZsfc;
  std::vector<std::string> templates;   // aligned with candidates; empty if unused
  std::vector<std::string> candidates;
  std::string ranker;                   // "none" for single-candidate modes
  std::vector<double> scores;           // aligned with candidates
  std::string selected;
  std::optional<std::string> error;     // set when the row failed

  bool operator==(const GenerationRecord&) const = default;
};

nlohmann::ordered_json to_json(const GenerationRecord& record);
GenerationRecord record_from_json(const nlohmann::json& j);
std::string serialize_record(const GenerationRecord& record);
GenerationRecord parse_record(std::string_view line);
// Reads a generations file, skipping the run header line if present.
std::vector<GenerationRecord> load_generations(const std::filesystem::path& path);

struct GenerationConfig {
  TemplateSet templates = TemplateSet::builtin();
  DecodeConfig decode;
  SubjectExtractor subject_extractor;  // empty: extract_subject
};

// Runs one mode on one row. Errors propagate as RowError carrying row_id.
GenerationRecord generate_for_row(std::size_t row_id, const DatasetRow& row, GenerationMode mode,
                                  const LanguageModel& lm, const Ranker& ranker,
                                  const GenerationConfig& config);

// Scores generations against rows. Body mode strips the longest template
// prefix from both hypothesis and reference; references without a template
// are kept whole and counted. Failed records score as empty hypotheses.
// Throws EvaluationMismatch when records and rows do not line up.
EvalReport evaluate(const std::vector<DatasetRow>& rows,
                    const std::vector<GenerationRecord>& generations, EvalMode mode,
                    const TemplateSet& templates = TemplateSet::builtin(),
                    CoverageMode coverage_mode = CoverageMode::kContainment);

nlohmann::ordered_json to_json(const EvalReport& report);
std::string reports_json(const std::vector<EvalReport>& reports);

// "ngram:<path>" or "remote:<url>".
LanguageModelHandle load_language_model(const std::string& spec, double timeout_s = 30.0);

using Settings = std::vector<std::pair<std::string, std::string>>;

// key=value lines; '#' starts a comment. Throws InvalidInput.
Settings load_config_file(const std::filesystem::path& path);

struct RunConfig {
  std::string data_path;
  std::string lm_spec;
  GenerationMode mode = GenerationMode::kZsfc;
  RankerConfig ranker;
  DecodeConfig decode = DecodeConfig::for_beam(20);
  std::string templates_path;
  std::string out_path;
  CoverageMode coverage_mode = CoverageMode::kContainment;
  int workers = 1;

  // Provenance, written into the run header.
  Settings file_settings;
  Settings cli_settings;

  // Applies one setting by its CLI name (e.g. "beam", "wsdm-mu").
  void set(const std::string& key, const std::string& value);
  // Effective settings by CLI name, excluding `workers`.
  std::map<std::string, std::string> settings() const;
  void validate() const;

  // defaults <- config file <- CLI flags. Unset alpha/beta become 20 * beam;
  // a missing LM spec falls back to $CQGEN_LM_ENDPOINT, a missing scorer to
  // $CQGEN_SCORER_ENDPOINT.
  static RunConfig from_layers(const Settings& file_settings, const Settings& cli_settings);
};

struct RunResult {
  std::size_t rows = 0;
  std::size_t failed = 0;
  EvalReport full;
  EvalReport body;
};

// Generates every row, writes <out> (JSONL), <out>.report.json and
// <out>.report.txt. Rows are processed by `workers` threads and written in
// input order.
RunResult run(const RunConfig& config);

}  // namespace cqgen

#endif  // CQGEN_PIPELINE_H_
