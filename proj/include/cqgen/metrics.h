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

#ifndef CQGEN_METRICS_H_
#define CQGEN_METRICS_H_

#include <string>
#include <string_view>
#include <vector>

namespace cqgen {

// Hypothesis = generated question, reference = gold question. The argument
// order matters: BLEU and METEOR are not symmetric.
struct EvalPair {
  std::vector<std::string> reference;
  std::vector<std::string> hypothesis;
  std::vector<std::string> facet_words;
};

// All metric values are on the 0..100 scale.

// Corpus BLEU with clipped n-gram precisions for orders 1..n, uniform
// weights, standard brevity penalty, no smoothing. Any zero precision gives
// 0. Throws InvalidInput for n outside 1..4 or no pairs.
double bleu_n(const std::vector<EvalPair>& pairs, int n);

// Mean per-pair LCS F-measure. beta = 1 is the balanced F1; larger beta
// weights recall as in the original ROUGE-L.
double rouge_l(const std::vector<EvalPair>& pairs, double beta = 1.0);

// Mean per-pair exact-match METEOR:
//   Fmean = 10PR / (R + 9P), penalty = 0.5 (chunks / m)^3,
//   score = Fmean (1 - penalty).
double meteor(const std::vector<EvalPair>& pairs);

enum class CoverageMode {
  kContainment,     // mean fraction of facet words present in each hypothesis
  kTokenFrequency,  // facet-word tokens / all hypothesis tokens, corpus-wide
};

double coverage(const std::vector<EvalPair>& pairs,
                CoverageMode mode = CoverageMode::kContainment);

// Single-pair helpers used by the AutoScore ranker.
double sentence_bleu1(const std::vector<std::string>& reference,
                      const std::vector<std::string>& hypothesis);
double sentence_rouge_l(const std::vector<std::string>& reference,
                        const std::vector<std::string>& hypothesis);
double sentence_meteor(const std::vector<std::string>& reference,
                       const std::vector<std::string>& hypothesis);

// Longest common subsequence length.
std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

enum class EvalMode { kFull, kBody };

std::string_view to_string(EvalMode mode);
EvalMode parse_eval_mode(std::string_view name);

struct EvalReport {
  EvalMode mode = EvalMode::kFull;
  double bleu_1 = 0, bleu_2 = 0, bleu_3 = 0, bleu_4 = 0;
  double rouge_l = 0, meteor = 0, coverage = 0;
  std::size_t n_items = 0;
  std::size_t n_unstripped_references = 0;

  bool operator==(const EvalReport&) const = default;
};

// Scores pre-built pairs; `n_unstripped` is carried into the report.
EvalReport score_pairs(const std::vector<EvalPair>& pairs, EvalMode mode,
                       std::size_t n_unstripped = 0,
                       CoverageMode coverage_mode = CoverageMode::kContainment);

// Aligned plain-text table, columns BLEU-1..4, ROUGE-L, METEOR, Coverage.
std::string format_table(const std::vector<EvalReport>& reports);

}  // namespace cqgen

#endif  // CQGEN_METRICS_H_
