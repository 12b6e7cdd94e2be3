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

#include "cqgen/error.h"
#include "cqgen/pipeline.h"
#include "cqgen/text.h"

namespace cqgen {

using nlohmann::ordered_json;

EvalReport evaluate(const std::vector<DatasetRow>& rows,
                    const std::vector<GenerationRecord>& generations, EvalMode mode,
                    const TemplateSet& templates, CoverageMode coverage_mode) {
  if (rows.size() != generations.size()) {
    throw EvaluationMismatch(std::to_string(generations.size()) + " generations for " +
                             std::to_string(rows.size()) + " rows");
  }
  std::vector<EvalPair> pairs;
  pairs.reserve(rows.size());
  std::size_t unstripped = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& g = generations[i];
    if (g.row_id != i) {
      throw EvaluationMismatch("generation " + std::to_string(i) + " carries row id " +
                               std::to_string(g.row_id));
    }
    const std::string hypothesis = g.error ? std::string() : g.selected;
    EvalPair p;
    p.facet_words = content_words(rows[i].facet);
    if (mode == EvalMode::kFull) {
      p.reference = tokenize(rows[i].reference_question);
      p.hypothesis = tokenize(hypothesis);
    } else {
      const auto ref = strip_template(rows[i].reference_question, templates);
      if (!ref.template_text) ++unstripped;
      p.reference = tokenize(ref.body);
      p.hypothesis = tokenize(strip_template(hypothesis, templates).body);
    }
    pairs.push_back(std::move(p));
  }
  return score_pairs(pairs, mode, unstripped, coverage_mode);
}

ordered_json to_json(const EvalReport& r) {
  ordered_json j;
  j["mode"] = std::string(to_string(r.mode));
  j["bleu_1"] = r.bleu_1;
  j["bleu_2"] = r.bleu_2;
  j["bleu_3"] = r.bleu_3;
  j["bleu_4"] = r.bleu_4;
  j["rouge_l"] = r.rouge_l;
  j["meteor"] = r.meteor;
  j["coverage"] = r.coverage;
  j["n_items"] = r.n_items;
  j["n_unstripped_references"] = r.n_unstripped_references;
  return j;
}

std::string reports_json(const std::vector<EvalReport>& reports) {
  ordered_json j;
  j["reports"] = ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(to_json(r));
  return j.dump(2) + "\n";
}

}  // namespace cqgen
