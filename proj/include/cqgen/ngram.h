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

#ifndef CQGEN_NGRAM_H_
#define CQGEN_NGRAM_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "cqgen/lm.h"

namespace cqgen {

// Word-level n-gram model with add-k smoothing:
//
//   p(w | c) = (count(c, w) + k) / (count(c) + k * |O|)
//
// where c is the last n-1 tokens of the context (left-padded with BOS), O is
// the outcome set (every vocab entry except BOS and SEP) and count(c) sums
// count(c, w) over O.
class NGramModel final : public LanguageModel {
 public:
  using Context = std::vector<TokenId>;
  using CountTable = std::map<Context, std::map<TokenId, std::uint64_t>>;

  NGramModel(int order, double add_k, Vocab vocab, CountTable counts);

  std::string_view provider() const override { return "ngram"; }
  const Vocab& vocab() const override { return vocab_; }
  TokenDist next_token_dist(std::span<const TokenId> context) const override;

  int order() const { return order_; }
  double add_k() const { return add_k_; }
  const CountTable& counts() const { return counts_; }
  std::uint64_t count(const Context& context, TokenId next) const;
  std::uint64_t context_total(const Context& context) const;

  // Line-oriented text format, version 1. See docs/formats.md.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static NGramModel load(std::istream& in);
  static NGramModel load(const std::filesystem::path& path);

  bool operator==(const NGramModel& other) const;

 private:
  Context context_key(std::span<const TokenId> context) const;

  int order_;
  double add_k_;
  Vocab vocab_;
  CountTable counts_;
  std::map<Context, std::uint64_t> totals_;
};

// Counts every n-gram of every non-blank line (tokenized, BOS-padded,
// EOS-terminated). Throws InvalidInput for n < 1 or add_k <= 0 and
// TrainingError when the corpus has no tokens.
NGramModel train_ngram(std::istream& corpus, int order, double add_k);
NGramModel train_ngram(const std::vector<std::string>& lines, int order, double add_k);

}  // namespace cqgen

#endif  // CQGEN_NGRAM_H_
