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

#include "cqgen/lm.h"

#include <cmath>
#include <vector>

#include "cqgen/error.h"

namespace cqgen {

Vocab::Vocab() {
  add(kBos);
  add(kEos);
  add(kSep);
  add(kUnk);
}

Vocab::Vocab(const std::vector<std::string>& words) : Vocab() {
  for (const auto& w : words) add(w);
}

TokenId Vocab::add(std::string_view token) {
  std::string key(token);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  auto id = static_cast<TokenId>(tokens_.size());
  tokens_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

bool Vocab::contains(std::string_view token) const {
  return index_.find(std::string(token)) != index_.end();
}

TokenId Vocab::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

std::vector<TokenId> Vocab::ids(const std::vector<std::string>& tokens) const {
  std::vector<TokenId> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

std::vector<std::string> Vocab::strings(std::span<const TokenId> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId i : ids) out.push_back(token(i));
  return out;
}

bool TokenDist::is_valid(double tol) const {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) return false;
    total += p;
  }
  return std::abs(total - 1.0) <= tol;
}

double conditional_logprob(const LanguageModel& lm, std::span<const TokenId> context,
                           std::span<const TokenId> tokens) {
  std::vector<TokenId> history(context.begin(), context.end());
  history.reserve(context.size() + tokens.size());
  double total = 0.0;
  for (TokenId t : tokens) {
    TokenDist dist = lm.next_token_dist(history);
    total += std::log(dist[t]);
    history.push_back(t);
  }
  return total;
}

double sequence_logprob(const LanguageModel& lm, std::span<const TokenId> tokens) {
  if (tokens.empty()) throw InvalidInput("sequence_logprob: empty token sequence");
  return conditional_logprob(lm, {}, tokens);
}

double perplexity(const LanguageModel& lm, std::span<const TokenId> tokens) {
  if (tokens.empty()) throw InvalidInput("perplexity: empty token sequence");
  double lp = sequence_logprob(lm, tokens);
  return std::exp(-lp / static_cast<double>(tokens.size()));
}

}  // namespace cqgen
