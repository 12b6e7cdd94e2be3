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

#ifndef CQGEN_RANKERS_H_
#define CQGEN_RANKERS_H_

#include <array>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cqgen/lm.h"
#include "cqgen/remote.h"

namespace cqgen {

struct RankedEntry {
  std::size_t index = 0;
  double score = 0.0;
  bool operator==(const RankedEntry&) const = default;
};

// Permutation of candidate indices, best first. Equal scores keep input order.
using RankedList = std::vector<RankedEntry>;

RankedList rank_by_scores(const std::vector<double>& scores);

// Score = -perplexity(tokenize(query + " " + candidate)).
RankedList rank_perplexity(const LanguageModel& lm, std::string_view query,
                           const std::vector<std::string>& candidates);

struct AutoScoreWeights {
  double bleu1 = 1.0 / 3.0;
  double rouge_l = 1.0 / 3.0;
  double meteor = 1.0 / 3.0;

  // Throws InvalidInput for negative or all-zero weights.
  void validate() const;
};

// Candidates are hypotheses and the query is the reference.
RankedList rank_autoscore(std::string_view query, const std::vector<std::string>& candidates,
                          const AutoScoreWeights& weights = {});

struct WsdmParams {
  double lambda_t = 1.0;  // unigram
  double lambda_o = 1.0;  // ordered bigram
  double lambda_u = 1.0;  // unordered bigram within the window
  double mu = 25.0;
  int window = 8;

  void validate() const;
};

// Background probabilities for Dirichlet smoothing. Every lookup is > 0.
class CollectionStats {
 public:
  // 1/|V| per term and 1/|V|^2 per bigram in both families.
  static CollectionStats uniform(std::size_t vocab_size);
  // Add-one estimates from a pool of tokenized texts. Unseen events get the
  // smoothed zero-count probability.
  static CollectionStats from_pool(const std::vector<std::vector<std::string>>& pool, int window);

  double term(const std::string& t) const;
  double ordered(const std::string& a, const std::string& b) const;
  double unordered(const std::string& a, const std::string& b) const;

 private:
  struct Family {
    std::unordered_map<std::string, double> probs;
    double unseen = 0.0;
  };
  static double lookup(const Family& f, const std::string& key);

  Family terms_;
  Family ordered_;
  Family unordered_;
};

// Number of positions p with doc[p] == a and doc[p+1] == b.
std::size_t ordered_count(const std::vector<std::string>& doc, const std::string& a,
                          const std::string& b);
// Number of position pairs i < j with j - i < window holding {a, b} in
// either order.
std::size_t unordered_count(const std::vector<std::string>& doc, const std::string& a,
                            const std::string& b, int window);

// Weighted sequential dependence score of a tokenized candidate for the
// ordered query terms. Throws InvalidInput for empty inputs.
double wsdm_score(const std::vector<std::string>& query_terms,
                  const std::vector<std::string>& candidate, const WsdmParams& params,
                  const CollectionStats& stats);

// Query terms are subject words then facet words, deduplicated in order.
// Background defaults to uniform over the distinct tokens of the query
// terms and candidate pool.
RankedList rank_wsdm(const std::vector<std::string>& subject_words,
                     const std::vector<std::string>& facet_words,
                     const std::vector<std::string>& candidates, const WsdmParams& params = {});
RankedList rank_wsdm(const std::vector<std::string>& subject_words,
                     const std::vector<std::string>& facet_words,
                     const std::vector<std::string>& candidates, const WsdmParams& params,
                     const CollectionStats& stats);

// Subject-then-facet merge used by rank_wsdm.
std::vector<std::string> wsdm_query_terms(const std::vector<std::string>& subject_words,
                                          const std::vector<std::string>& facet_words);

// Neural ranker behind HTTP.
//
//   request:  {"query": "...", "facet": "...", "candidates": ["...", ...]}
//   response: {"scores": [0.3, ...]}
//
// Requests to one endpoint are serialized unless `concurrent` is set.
class ExternalScorer {
 public:
  explicit ExternalScorer(Endpoint endpoint, bool concurrent = false, double timeout_s = 30.0);

  // Throws RemoteRankingError on transport or protocol failure.
  RankedList rank(std::string_view query, std::string_view facet,
                  const std::vector<std::string>& candidates) const;

  const Endpoint& endpoint() const { return endpoint_; }

 private:
  Endpoint endpoint_;
  bool concurrent_;
  double timeout_s_;
  mutable std::mutex mu_;
};

// Parses a scorer response body; exposed for tests.
std::vector<double> decode_scorer_response(const std::string& body, std::size_t expected);

RankedList rank_external(const ExternalScorer& scorer, std::string_view query,
                         std::string_view facet, const std::vector<std::string>& candidates);

}  // namespace cqgen

#endif  // CQGEN_RANKERS_H_
