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

#ifndef CQGEN_LM_H_
#define CQGEN_LM_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cqgen {

using TokenId = std::int32_t;

// Reserved token spellings. BOS and SEP only ever appear in contexts; a
// model never assigns them probability mass.
inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kSep = "[SEP]";
inline constexpr std::string_view kUnk = "<unk>";

// Bijection between token strings and dense ids. The four reserved tokens
// always occupy ids 0..3 in the order BOS, EOS, SEP, UNK.
class Vocab {
 public:
  static constexpr TokenId kBosId = 0;
  static constexpr TokenId kEosId = 1;
  static constexpr TokenId kSepId = 2;
  static constexpr TokenId kUnkId = 3;

  Vocab();
  // Reserved tokens are added first; duplicates and reserved spellings in
  // `words` are skipped.
  explicit Vocab(const std::vector<std::string>& words);

  TokenId add(std::string_view token);
  std::size_t size() const { return tokens_.size(); }
  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  bool contains(std::string_view token) const;
  // Unknown tokens map to UNK.
  TokenId id(std::string_view token) const;
  std::vector<TokenId> ids(const std::vector<std::string>& tokens) const;
  std::vector<std::string> strings(std::span<const TokenId> ids) const;

  // False for BOS and SEP.
  static bool is_outcome(TokenId id) { return id != kBosId && id != kSepId; }
  std::size_t num_outcomes() const { return tokens_.size() - 2; }

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

// Next-token probabilities aligned with Vocab ids.
struct TokenDist {
  std::vector<double> probs;

  double operator[](TokenId id) const { return probs[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return probs.size(); }
  // Every entry non-negative and the total within `tol` of one.
  bool is_valid(double tol = 1e-9) const;
};

// Anything that yields P(x_t | x_<t). Implementations are immutable after
// construction and next_token_dist is safe to call from many threads.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual std::string_view provider() const = 0;
  virtual const Vocab& vocab() const = 0;
  // `context` is everything before the predicted position, without an
  // explicit BOS; providers pad on the left as they need.
  virtual TokenDist next_token_dist(std::span<const TokenId> context) const = 0;
};

using LanguageModelHandle = std::shared_ptr<const LanguageModel>;

// Sum over t of ln p(tokens[t] | context, tokens[<t]). -inf when some
// token has probability zero.
double conditional_logprob(const LanguageModel& lm, std::span<const TokenId> context,
                           std::span<const TokenId> tokens);

// conditional_logprob with an empty context. Throws InvalidInput on an
// empty sequence.
double sequence_logprob(const LanguageModel& lm, std::span<const TokenId> tokens);

// exp(-sequence_logprob / |tokens|).
double perplexity(const LanguageModel& lm, std::span<const TokenId> tokens);

}  // namespace cqgen

#endif  // CQGEN_LM_H_
