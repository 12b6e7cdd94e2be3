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

#include "cqgen/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "cqgen/error.h"

namespace cqgen {

namespace {

using Tokens = std::vector<std::string>;
using NGramCounts = std::map<Tokens, std::size_t>;

NGramCounts ngram_counts(const Tokens& tokens, std::size_t n) {
  NGramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Tokens(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                    tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

void require_pairs(const std::vector<EvalPair>& pairs, const char* who) {
  if (pairs.empty()) throw InvalidInput(std::string(who) + ": no pairs");
}

double f_measure(double precision, double recall, double beta) {
  if (precision <= 0.0 || recall <= 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (recall + b2 * precision);
}

struct MeteorStats {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

// Exact-match alignment. Each hypothesis token takes the reference position
// that extends the current chunk when possible, else the earliest unused one.
MeteorStats meteor_align(const Tokens& ref, const Tokens& hyp) {
  std::vector<bool> used(ref.size(), false);
  MeteorStats s;
  bool have_prev = false;
  std::size_t prev_h = 0;
  std::size_t prev_r = 0;
  for (std::size_t h = 0; h < hyp.size(); ++h) {
    std::size_t pick = ref.size();
    if (have_prev && prev_h + 1 == h && prev_r + 1 < ref.size() && !used[prev_r + 1] &&
        ref[prev_r + 1] == hyp[h]) {
      pick = prev_r + 1;
    } else {
      for (std::size_t r = 0; r < ref.size(); ++r) {
        if (!used[r] && ref[r] == hyp[h]) {
          pick = r;
          break;
        }
      }
    }
    if (pick == ref.size()) continue;
    used[pick] = true;
    const bool extends = have_prev && prev_h + 1 == h && prev_r + 1 == pick;
    if (!extends) ++s.chunks;
    ++s.matches;
    have_prev = true;
    prev_h = h;
    prev_r = pick;
  }
  return s;
}

}  // namespace

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto& x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

double bleu_n(const std::vector<EvalPair>& pairs, int n) {
  if (n < 1 || n > 4) throw InvalidInput("bleu_n: n must be in 1..4");
  require_pairs(pairs, "bleu_n");
  std::vector<std::size_t> matched(static_cast<std::size_t>(n), 0);
  std::vector<std::size_t> total(static_cast<std::size_t>(n), 0);
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  for (const auto& p : pairs) {
    hyp_len += p.hypothesis.size();
    ref_len += p.reference.size();
    for (std::size_t order = 1; order <= static_cast<std::size_t>(n); ++order) {
      const auto hyp = ngram_counts(p.hypothesis, order);
      const auto ref = ngram_counts(p.reference, order);
      for (const auto& [gram, c] : hyp) {
        total[order - 1] += c;
        auto it = ref.find(gram);
        if (it != ref.end()) matched[order - 1] += std::min(c, it->second);
      }
    }
  }
  if (hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t i = 0; i < matched.size(); ++i) {
    if (matched[i] == 0 || total[i] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched[i]) / static_cast<double>(total[i]));
  }
  const double bp = hyp_len > ref_len
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  return 100.0 * bp * std::exp(log_sum / static_cast<double>(n));
}

double sentence_rouge_l(const Tokens& reference, const Tokens& hypothesis) {
  return rouge_l({EvalPair{reference, hypothesis, {}}});
}

double rouge_l(const std::vector<EvalPair>& pairs, double beta) {
  require_pairs(pairs, "rouge_l");
  double sum = 0.0;
  for (const auto& p : pairs) {
    if (p.hypothesis.empty() || p.reference.empty()) continue;
    const auto lcs = static_cast<double>(lcs_length(p.reference, p.hypothesis));
    sum += f_measure(lcs / static_cast<double>(p.hypothesis.size()),
                     lcs / static_cast<double>(p.reference.size()), beta);
  }
  return 100.0 * sum / static_cast<double>(pairs.size());
}

double sentence_meteor(const Tokens& reference, const Tokens& hypothesis) {
  if (hypothesis.empty() || reference.empty()) return 0.0;
  const MeteorStats s = meteor_align(reference, hypothesis);
  if (s.matches == 0) return 0.0;
  const auto m = static_cast<double>(s.matches);
  const double p = m / static_cast<double>(hypothesis.size());
  const double r = m / static_cast<double>(reference.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double penalty = 0.5 * std::pow(static_cast<double>(s.chunks) / m, 3.0);
  return 100.0 * fmean * (1.0 - penalty);
}

double meteor(const std::vector<EvalPair>& pairs) {
  require_pairs(pairs, "meteor");
  double sum = 0.0;
  for (const auto& p : pairs) sum += sentence_meteor(p.reference, p.hypothesis);
  return sum / static_cast<double>(pairs.size());
}

double sentence_bleu1(const Tokens& reference, const Tokens& hypothesis) {
  return bleu_n({EvalPair{reference, hypothesis, {}}}, 1);
}

double coverage(const std::vector<EvalPair>& pairs, CoverageMode mode) {
  require_pairs(pairs, "coverage");
  if (mode == CoverageMode::kContainment) {
    double sum = 0.0;
    for (const auto& p : pairs) {
      if (p.facet_words.empty()) throw InvalidInput("coverage: pair without facet words");
      const std::set<std::string> present(p.hypothesis.begin(), p.hypothesis.end());
      const std::set<std::string> facet(p.facet_words.begin(), p.facet_words.end());
      std::size_t hit = 0;
      for (const auto& w : facet) hit += present.count(w);
      sum += static_cast<double>(hit) / static_cast<double>(facet.size());
    }
    return 100.0 * sum / static_cast<double>(pairs.size());
  }
  std::size_t facet_tokens = 0;
  std::size_t all_tokens = 0;
  for (const auto& p : pairs) {
    if (p.facet_words.empty()) throw InvalidInput("coverage: pair without facet words");
    const std::set<std::string> facet(p.facet_words.begin(), p.facet_words.end());
    all_tokens += p.hypothesis.size();
    for (const auto& t : p.hypothesis) facet_tokens += facet.count(t);
  }
  if (all_tokens == 0) return 0.0;
  return 100.0 * static_cast<double>(facet_tokens) / static_cast<double>(all_tokens);
}

std::string_view to_string(EvalMode mode) {
  return mode == EvalMode::kFull ? "full" : "body";
}

EvalMode parse_eval_mode(std::string_view name) {
  if (name == "full") return EvalMode::kFull;
  if (name == "body") return EvalMode::kBody;
  throw InvalidInput("unknown evaluation mode: " + std::string(name));
}

EvalReport score_pairs(const std::vector<EvalPair>& pairs, EvalMode mode,
                       std::size_t n_unstripped, CoverageMode coverage_mode) {
  EvalReport r;
  r.mode = mode;
  r.n_items = pairs.size();
  r.n_unstripped_references = n_unstripped;
  if (pairs.empty()) return r;
  r.bleu_1 = bleu_n(pairs, 1);
  r.bleu_2 = bleu_n(pairs, 2);
  r.bleu_3 = bleu_n(pairs, 3);
  r.bleu_4 = bleu_n(pairs, 4);
  r.rouge_l = rouge_l(pairs);
  r.meteor = meteor(pairs);
  r.coverage = coverage(pairs, coverage_mode);
  return r;
}

std::string format_table(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-6s %8s %8s %8s %8s %8s %8s %9s %7s %11s\n", "mode", "BLEU-1",
                "BLEU-2", "BLEU-3", "BLEU-4", "ROUGE-L", "METEOR", "Coverage", "items",
                "unstripped");
  out << buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%-6s %8.2f %8.2f %8.2f %8.2f %8.2f %8.2f %9.2f %7zu %11zu\n",
                  std::string(to_string(r.mode)).c_str(), r.bleu_1, r.bleu_2, r.bleu_3, r.bleu_4,
                  r.rouge_l, r.meteor, r.coverage, r.n_items, r.n_unstripped_references);
    out << buf;
  }
  return out.str();
}

}  // namespace cqgen
