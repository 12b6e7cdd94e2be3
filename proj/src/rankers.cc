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

#include "cqgen/rankers.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "cqgen/error.h"
#include "cqgen/metrics.h"
#include "cqgen/text.h"

namespace cqgen {

using nlohmann::json;

RankedList rank_by_scores(const std::vector<double>& scores) {
  RankedList out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out.push_back({i, scores[i]});
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedEntry& a, const RankedEntry& b) { return a.score > b.score; });
  return out;
}

RankedList rank_perplexity(const LanguageModel& lm, std::string_view query,
                           const std::vector<std::string>& candidates) {
  if (candidates.empty()) throw InvalidInput("rank_perplexity: no candidates");
  const Vocab& vocab = lm.vocab();
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto ids = vocab.ids(tokenize(std::string(query) + " " + c));
    scores.push_back(-perplexity(lm, ids));
  }
  return rank_by_scores(scores);
}

void AutoScoreWeights::validate() const {
  if (bleu1 < 0 || rouge_l < 0 || meteor < 0) throw InvalidInput("AutoScore weights must be >= 0");
  if (bleu1 + rouge_l + meteor <= 0) throw InvalidInput("AutoScore weights are all zero");
}

RankedList rank_autoscore(std::string_view query, const std::vector<std::string>& candidates,
                          const AutoScoreWeights& weights) {
  weights.validate();
  if (candidates.empty()) throw InvalidInput("rank_autoscore: no candidates");
  const auto ref = tokenize(query);
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto hyp = tokenize(c);
    double s = 0.0;
    if (weights.bleu1 > 0) s += weights.bleu1 * sentence_bleu1(ref, hyp);
    if (weights.rouge_l > 0) s += weights.rouge_l * sentence_rouge_l(ref, hyp);
    if (weights.meteor > 0) s += weights.meteor * sentence_meteor(ref, hyp);
    scores.push_back(s);
  }
  return rank_by_scores(scores);
}

void WsdmParams::validate() const {
  if (!(mu > 0)) throw InvalidInput("WSDM mu must be > 0");
  if (window < 2) throw InvalidInput("WSDM window must be >= 2");
}

namespace {

std::string pair_key(const std::string& a, const std::string& b) {
  std::string k = a;
  k.push_back('\x1f');
  k += b;
  return k;
}

std::string unordered_key(const std::string& a, const std::string& b) {
  return a < b ? pair_key(a, b) : pair_key(b, a);
}

}  // namespace

CollectionStats CollectionStats::uniform(std::size_t vocab_size) {
  if (vocab_size == 0) throw InvalidInput("uniform background needs a non-empty vocabulary");
  const auto v = static_cast<double>(vocab_size);
  CollectionStats s;
  s.terms_.unseen = 1.0 / v;
  s.ordered_.unseen = 1.0 / (v * v);
  s.unordered_.unseen = 1.0 / (v * v);
  return s;
}

CollectionStats CollectionStats::from_pool(const std::vector<std::vector<std::string>>& pool,
                                           int window) {
  std::map<std::string, double> term_counts;
  std::map<std::string, double> ordered_counts;
  std::map<std::string, double> unordered_counts;
  double n_terms = 0;
  double n_ordered = 0;
  double n_unordered = 0;
  for (const auto& doc : pool) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      term_counts[doc[i]] += 1;
      n_terms += 1;
      if (i + 1 < doc.size()) {
        ordered_counts[pair_key(doc[i], doc[i + 1])] += 1;
        n_ordered += 1;
      }
      for (std::size_t j = i + 1; j < doc.size() && j - i < static_cast<std::size_t>(window); ++j) {
        unordered_counts[unordered_key(doc[i], doc[j])] += 1;
        n_unordered += 1;
      }
    }
  }
  const auto v = static_cast<double>(std::max<std::size_t>(term_counts.size(), 1));
  CollectionStats s;
  auto fill = [](Family& f, const std::map<std::string, double>& counts, double denom) {
    f.unseen = 1.0 / denom;
    for (const auto& [k, c] : counts) f.probs.emplace(k, (c + 1.0) / denom);
  };
  fill(s.terms_, term_counts, n_terms + v + 1.0);
  fill(s.ordered_, ordered_counts, n_ordered + v * v);
  fill(s.unordered_, unordered_counts, n_unordered + v * (v + 1.0) / 2.0);
  return s;
}

double CollectionStats::lookup(const Family& f, const std::string& key) {
  auto it = f.probs.find(key);
  return it == f.probs.end() ? f.unseen : it->second;
}

double CollectionStats::term(const std::string& t) const { return lookup(terms_, t); }

double CollectionStats::ordered(const std::string& a, const std::string& b) const {
  return lookup(ordered_, pair_key(a, b));
}

double CollectionStats::unordered(const std::string& a, const std::string& b) const {
  return lookup(unordered_, unordered_key(a, b));
}

std::size_t ordered_count(const std::vector<std::string>& doc, const std::string& a,
                          const std::string& b) {
  std::size_t n = 0;
  for (std::size_t p = 0; p + 1 < doc.size(); ++p) {
    if (doc[p] == a && doc[p + 1] == b) ++n;
  }
  return n;
}

std::size_t unordered_count(const std::vector<std::string>& doc, const std::string& a,
                            const std::string& b, int window) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    for (std::size_t j = i + 1; j < doc.size() && j - i < static_cast<std::size_t>(window); ++j) {
      if ((doc[i] == a && doc[j] == b) || (doc[i] == b && doc[j] == a)) ++n;
    }
  }
  return n;
}

double wsdm_score(const std::vector<std::string>& query_terms,
                  const std::vector<std::string>& candidate, const WsdmParams& params,
                  const CollectionStats& stats) {
  params.validate();
  if (query_terms.empty()) throw InvalidInput("wsdm_score: no query terms");
  if (candidate.empty()) throw InvalidInput("wsdm_score: empty candidate");
  const double mu = params.mu;
  const double denom = static_cast<double>(candidate.size()) + mu;
  auto smoothed = [&](std::size_t count, double background) {
    return std::log((static_cast<double>(count) + mu * background) / denom);
  };

  double unigram = 0.0;
  for (const auto& q : query_terms) {
    const auto tf = static_cast<std::size_t>(std::count(candidate.begin(), candidate.end(), q));
    unigram += smoothed(tf, stats.term(q));
  }
  double ordered = 0.0;
  double unordered = 0.0;
  for (std::size_t i = 0; i + 1 < query_terms.size(); ++i) {
    const auto& a = query_terms[i];
    const auto& b = query_terms[i + 1];
    ordered += smoothed(ordered_count(candidate, a, b), stats.ordered(a, b));
    unordered += smoothed(unordered_count(candidate, a, b, params.window), stats.unordered(a, b));
  }
  return params.lambda_t * unigram + params.lambda_o * ordered + params.lambda_u * unordered;
}

std::vector<std::string> wsdm_query_terms(const std::vector<std::string>& subject_words,
                                          const std::vector<std::string>& facet_words) {
  std::vector<std::string> terms;
  for (const auto* list : {&subject_words, &facet_words}) {
    for (const auto& entry : *list) {
      for (auto& w : content_words(entry)) {
        if (std::find(terms.begin(), terms.end(), w) == terms.end()) terms.push_back(std::move(w));
      }
    }
  }
  return terms;
}

RankedList rank_wsdm(const std::vector<std::string>& subject_words,
                     const std::vector<std::string>& facet_words,
                     const std::vector<std::string>& candidates, const WsdmParams& params,
                     const CollectionStats& stats) {
  const auto terms = wsdm_query_terms(subject_words, facet_words);
  if (terms.empty()) throw InvalidInput("rank_wsdm: no query terms");
  if (candidates.empty()) throw InvalidInput("rank_wsdm: no candidates");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(wsdm_score(terms, tokenize(c), params, stats));
  return rank_by_scores(scores);
}

RankedList rank_wsdm(const std::vector<std::string>& subject_words,
                     const std::vector<std::string>& facet_words,
                     const std::vector<std::string>& candidates, const WsdmParams& params) {
  const auto terms = wsdm_query_terms(subject_words, facet_words);
  std::set<std::string> vocab(terms.begin(), terms.end());
  for (const auto& c : candidates) {
    for (auto& t : tokenize(c)) vocab.insert(std::move(t));
  }
  return rank_wsdm(subject_words, facet_words, candidates, params,
                   CollectionStats::uniform(std::max<std::size_t>(vocab.size(), 1)));
}

ExternalScorer::ExternalScorer(Endpoint endpoint, bool concurrent, double timeout_s)
    : endpoint_(std::move(endpoint)), concurrent_(concurrent), timeout_s_(timeout_s) {}

std::vector<double> decode_scorer_response(const std::string& body, std::size_t expected) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw RemoteRankingError(std::string("scorer response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("scores") || !j["scores"].is_array()) {
    throw RemoteRankingError("scorer response needs an array field 'scores'");
  }
  std::vector<double> scores;
  for (const auto& v : j["scores"]) {
    if (!v.is_number()) throw RemoteRankingError("scorer score is not a number");
    const double s = v.get<double>();
    if (!std::isfinite(s)) throw RemoteRankingError("scorer score is not finite");
    scores.push_back(s);
  }
  if (scores.size() != expected) {
    throw RemoteRankingError("scorer returned " + std::to_string(scores.size()) +
                             " scores for " + std::to_string(expected) + " candidates");
  }
  return scores;
}

RankedList ExternalScorer::rank(std::string_view query, std::string_view facet,
                                const std::vector<std::string>& candidates) const {
  if (candidates.empty()) throw InvalidInput("rank_external: no candidates");
  const json req = {{"query", std::string(query)},
                    {"facet", std::string(facet)},
                    {"candidates", candidates}};
  HttpReply http;
  if (concurrent_) {
    http = post_json(endpoint_, req.dump(), timeout_s_);
  } else {
    std::lock_guard<std::mutex> lock(mu_);
    http = post_json(endpoint_, req.dump(), timeout_s_);
  }
  if (!http.ok) throw RemoteRankingError(http.error);
  return rank_by_scores(decode_scorer_response(http.body, candidates.size()));
}

RankedList rank_external(const ExternalScorer& scorer, std::string_view query,
                         std::string_view facet, const std::vector<std::string>& candidates) {
  return scorer.rank(query, facet, candidates);
}

}  // namespace cqgen
