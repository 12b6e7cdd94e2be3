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

#ifndef CQGEN_DECODER_H_
#define CQGEN_DECODER_H_

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqgen/lm.h"

namespace cqgen {

// Bit i set iff constraint word i is present.
using Signature = std::uint64_t;

inline int satisfied_count(Signature s) { return std::popcount(s); }

// Ordered, deduplicated lowercase constraint words. Position i owns bit i of
// a Signature, so at most 64 words.
class ConstraintSet {
 public:
  static constexpr std::size_t kMaxWords = 64;

  ConstraintSet() = default;
  // Each entry is run through the shared tokenizer; multi-word entries
  // become one constraint per word and punctuation is dropped.
  explicit ConstraintSet(const std::vector<std::string>& words);
  // Constraint words of a free-text facet.
  static ConstraintSet from_text(std::string_view facet);

  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::vector<std::string> words_;
};

// Whole-word, lowercase containment of each constraint word in the
// detokenized sequence.
Signature satisfaction(const std::vector<std::string>& tokens, const ConstraintSet& constraints);

struct BeamCandidate {
  std::vector<TokenId> tokens;  // generated tokens, EOS excluded
  double logprob = 0.0;         // ln p(tokens [+ EOS] | prompt)
  Signature signature = 0;
  bool finished = false;        // EOS was emitted

  int satisfied() const { return satisfied_count(signature); }
  // Decoding steps taken, counting EOS.
  std::size_t length() const { return tokens.size() + (finished ? 1 : 0); }
  bool operator==(const BeamCandidate&) const = default;
};

struct DecodeConfig {
  int beam_k = 20;
  int alpha = 400;  // likelihood filter keep count
  int beta = 400;   // constraint filter keep count
  int max_len = 20;
  double length_norm_gamma = 0.0;
  bool block_unk = true;  // never emit the UNK token

  // alpha = beta = 20 * k.
  static DecodeConfig for_beam(int k);
  // Throws InvalidInput.
  void validate() const;
};

// logprob / length^gamma.
double normalized_logprob(const BeamCandidate& c, double gamma);

// Per-step bookkeeping of a decode, for tests and diagnostics.
struct DecodeStep {
  std::size_t lm_calls = 0;   // beam entries expanded
  std::size_t expanded = 0;   // candidates with p > 0
  std::size_t survivors = 0;  // after the alpha/beta filter
  std::size_t groups = 0;     // distinct signatures among survivors
  std::size_t kept = 0;       // after selection, <= k
};

struct DecodeTrace {
  std::vector<DecodeStep> steps;
  std::size_t lm_calls() const;
};

// Standard beam search. Output: at most k finished or max-length
// candidates, best normalized logprob first; ties go to the
// lexicographically smaller token sequence.
std::vector<BeamCandidate> beam_search(const LanguageModel& lm, std::span<const TokenId> prompt,
                                       const DecodeConfig& config, DecodeTrace* trace = nullptr);

// Facet-constrained beam search. Every step expands the whole beam, keeps
// candidates that are both in the top-alpha by likelihood and the top-beta
// by satisfied-constraint count, groups survivors by signature and fills
// the beam round-robin over groups (every group's best first). Output is
// sorted by (satisfied count desc, normalized logprob desc).
std::vector<BeamCandidate> neurologic_decode(const LanguageModel& lm,
                                             std::span<const TokenId> prompt,
                                             const ConstraintSet& constraints,
                                             const DecodeConfig& config,
                                             DecodeTrace* trace = nullptr);

// First candidate under (satisfied count desc, normalized logprob desc,
// tokens asc). Throws EmptyCandidates.
const BeamCandidate& select_final(const std::vector<BeamCandidate>& candidates,
                                  double gamma = 0.0);

}  // namespace cqgen

#endif  // CQGEN_DECODER_H_
