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

#include "cqgen/decoder.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "cqgen/error.h"
#include "cqgen/text.h"

namespace cqgen {

ConstraintSet::ConstraintSet(const std::vector<std::string>& words) {
  for (const auto& entry : words) {
    for (auto& w : content_words(entry)) {
      if (std::find(words_.begin(), words_.end(), w) == words_.end()) {
        words_.push_back(std::move(w));
      }
    }
  }
  if (words_.size() > kMaxWords) {
    throw InvalidInput("at most " + std::to_string(kMaxWords) + " constraint words are supported");
  }
}

ConstraintSet ConstraintSet::from_text(std::string_view facet) {
  return ConstraintSet(std::vector<std::string>{std::string(facet)});
}

Signature satisfaction(const std::vector<std::string>& tokens, const ConstraintSet& constraints) {
  const auto words = tokenize(detokenize(tokens));
  const std::unordered_set<std::string> present(words.begin(), words.end());
  Signature sig = 0;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (present.count(constraints.words()[i]) > 0) sig |= Signature{1} << i;
  }
  return sig;
}

DecodeConfig DecodeConfig::for_beam(int k) {
  DecodeConfig c;
  c.beam_k = k;
  c.alpha = 20 * k;
  c.beta = 20 * k;
  return c;
}

void DecodeConfig::validate() const {
  if (beam_k < 1) throw InvalidInput("beam_k must be >= 1");
  if (alpha < 1) throw InvalidInput("alpha must be >= 1");
  if (beta < 1) throw InvalidInput("beta must be >= 1");
  if (alpha < beam_k) throw InvalidInput("alpha must be >= beam_k");
  if (max_len < 1) throw InvalidInput("max_len must be >= 1");
  if (!(length_norm_gamma >= 0.0)) throw InvalidInput("length_norm_gamma must be >= 0");
}

double normalized_logprob(const BeamCandidate& c, double gamma) {
  if (gamma == 0.0) return c.logprob;
  const auto len = static_cast<double>(std::max<std::size_t>(c.length(), 1));
  return c.logprob / std::pow(len, gamma);
}

std::size_t DecodeTrace::lm_calls() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.lm_calls;
  return n;
}

namespace {

struct Expansion {
  std::uint32_t parent;
  TokenId token;
  double logprob;
  Signature sig;
};

// Lexicographic order on (tokens, finished).
bool lex_less(const BeamCandidate& a, const BeamCandidate& b) {
  if (a.tokens != b.tokens) return a.tokens < b.tokens;
  return a.finished < b.finished;
}

// Bit mask contributed by each vocab entry, consistent with satisfaction().
std::vector<Signature> token_masks(const Vocab& vocab, const ConstraintSet& constraints) {
  std::vector<Signature> masks(vocab.size(), 0);
  if (constraints.empty()) return masks;
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    if (!Vocab::is_outcome(static_cast<TokenId>(id)) || id == Vocab::kEosId) continue;
    masks[id] = satisfaction({vocab.token(static_cast<TokenId>(id))}, constraints);
  }
  return masks;
}

// Shared step loop. `constrained` switches between plain top-k selection and
// the filter/group/round-robin selection. Returns finished candidates plus
// whatever is still in the beam at max_len, unsorted.
std::vector<BeamCandidate> run_search(const LanguageModel& lm, std::span<const TokenId> prompt,
                                      const std::vector<Signature>& masks, bool constrained,
                                      const DecodeConfig& config, DecodeTrace* trace) {
  config.validate();
  const auto k = static_cast<std::size_t>(config.beam_k);

  std::vector<BeamCandidate> beam(1);
  std::vector<BeamCandidate> pool;
  std::vector<TokenId> context;

  for (int step = 0; step < config.max_len && !beam.empty(); ++step) {
    DecodeStep stats;

    // Parents all have the same length, so child lexicographic order is
    // (parent lexicographic rank, token).
    std::vector<std::uint32_t> by_lex(beam.size());
    std::iota(by_lex.begin(), by_lex.end(), 0u);
    std::sort(by_lex.begin(), by_lex.end(),
              [&](std::uint32_t a, std::uint32_t b) { return beam[a].tokens < beam[b].tokens; });
    std::vector<std::uint32_t> lex_rank(beam.size());
    for (std::uint32_t r = 0; r < by_lex.size(); ++r) lex_rank[by_lex[r]] = r;

    std::vector<Expansion> expansions;
    for (std::uint32_t p = 0; p < beam.size(); ++p) {
      context.assign(prompt.begin(), prompt.end());
      context.insert(context.end(), beam[p].tokens.begin(), beam[p].tokens.end());
      const TokenDist dist = lm.next_token_dist(context);
      ++stats.lm_calls;
      for (std::size_t w = 0; w < dist.size(); ++w) {
        const double prob = dist.probs[w];
        if (!(prob > 0.0) || !Vocab::is_outcome(static_cast<TokenId>(w))) continue;
        if (config.block_unk && w == static_cast<std::size_t>(Vocab::kUnkId)) continue;
        expansions.push_back(Expansion{p, static_cast<TokenId>(w),
                                       beam[p].logprob + std::log(prob),
                                       beam[p].signature | masks[w]});
      }
    }
    stats.expanded = expansions.size();

    auto by_likelihood = [&](const Expansion& a, const Expansion& b) {
      if (a.logprob != b.logprob) return a.logprob > b.logprob;
      if (lex_rank[a.parent] != lex_rank[b.parent]) return lex_rank[a.parent] < lex_rank[b.parent];
      return a.token < b.token;
    };

    std::vector<std::uint32_t> order(expansions.size());
    std::iota(order.begin(), order.end(), 0u);
    std::vector<std::uint32_t> selected;

    if (!constrained) {
      const std::size_t take = std::min(k, order.size());
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                        order.end(), [&](std::uint32_t a, std::uint32_t b) {
                          return by_likelihood(expansions[a], expansions[b]);
                        });
      selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
      stats.survivors = expansions.size();
      stats.groups = expansions.empty() ? 0 : 1;
    } else {
      // Pruning: top-alpha by likelihood AND top-beta by constraint count.
      std::vector<char> in_alpha(expansions.size(), 0);
      std::vector<char> in_beta(expansions.size(), 0);
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return by_likelihood(expansions[a], expansions[b]);
      });
      for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(config.alpha); ++i) {
        in_alpha[order[i]] = 1;
      }
      std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return satisfied_count(expansions[a].sig) > satisfied_count(expansions[b].sig);
      });
      for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(config.beta); ++i) {
        in_beta[order[i]] = 1;
      }
      std::vector<std::uint32_t> survivors;
      for (std::uint32_t i = 0; i < expansions.size(); ++i) {
        if (in_alpha[i] && in_beta[i]) survivors.push_back(i);
      }
      if (survivors.empty()) {
        // Disjoint filters: fall back to the likelihood filter alone.
        for (std::uint32_t i = 0; i < expansions.size(); ++i) {
          if (in_alpha[i]) survivors.push_back(i);
        }
      }
      stats.survivors = survivors.size();

      // Grouping: rank of each survivor inside its signature group.
      std::sort(survivors.begin(), survivors.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (expansions[a].sig != expansions[b].sig) return expansions[a].sig < expansions[b].sig;
        return by_likelihood(expansions[a], expansions[b]);
      });
      std::vector<std::uint32_t> group_rank(expansions.size(), 0);
      for (std::size_t i = 0; i < survivors.size(); ++i) {
        const bool new_group = i == 0 || expansions[survivors[i]].sig != expansions[survivors[i - 1]].sig;
        if (new_group) ++stats.groups;
        group_rank[survivors[i]] = new_group ? 0 : group_rank[survivors[i - 1]] + 1;
      }

      // Selection: every group's best, then every group's second best, ...
      std::sort(survivors.begin(), survivors.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (group_rank[a] != group_rank[b]) return group_rank[a] < group_rank[b];
        return by_likelihood(expansions[a], expansions[b]);
      });
      if (survivors.size() > k) survivors.resize(k);
      std::sort(survivors.begin(), survivors.end(), [&](std::uint32_t a, std::uint32_t b) {
        return by_likelihood(expansions[a], expansions[b]);
      });
      selected = std::move(survivors);
    }
    stats.kept = selected.size();

    std::vector<BeamCandidate> next;
    next.reserve(selected.size());
    for (std::uint32_t idx : selected) {
      const Expansion& e = expansions[idx];
      BeamCandidate c;
      c.tokens = beam[e.parent].tokens;
      c.logprob = e.logprob;
      c.signature = e.sig;
      if (e.token == Vocab::kEosId) {
        c.finished = true;
        pool.push_back(std::move(c));
      } else {
        c.tokens.push_back(e.token);
        next.push_back(std::move(c));
      }
    }
    beam = std::move(next);
    if (trace != nullptr) trace->steps.push_back(stats);
  }

  for (auto& c : beam) pool.push_back(std::move(c));
  return pool;
}

}  // namespace

std::vector<BeamCandidate> beam_search(const LanguageModel& lm, std::span<const TokenId> prompt,
                                       const DecodeConfig& config, DecodeTrace* trace) {
  const std::vector<Signature> masks(lm.vocab().size(), 0);
  auto out = run_search(lm, prompt, masks, false, config, trace);
  const double gamma = config.length_norm_gamma;
  std::sort(out.begin(), out.end(), [&](const BeamCandidate& a, const BeamCandidate& b) {
    const double na = normalized_logprob(a, gamma);
    const double nb = normalized_logprob(b, gamma);
    if (na != nb) return na > nb;
    return lex_less(a, b);
  });
  if (out.size() > static_cast<std::size_t>(config.beam_k)) out.resize(static_cast<std::size_t>(config.beam_k));
  return out;
}

namespace {

bool final_order(const BeamCandidate& a, const BeamCandidate& b, double gamma) {
  if (a.satisfied() != b.satisfied()) return a.satisfied() > b.satisfied();
  const double na = normalized_logprob(a, gamma);
  const double nb = normalized_logprob(b, gamma);
  if (na != nb) return na > nb;
  return lex_less(a, b);
}

}  // namespace

std::vector<BeamCandidate> neurologic_decode(const LanguageModel& lm,
                                             std::span<const TokenId> prompt,
                                             const ConstraintSet& constraints,
                                             const DecodeConfig& config, DecodeTrace* trace) {
  const auto masks = token_masks(lm.vocab(), constraints);
  auto out = run_search(lm, prompt, masks, true, config, trace);
  const double gamma = config.length_norm_gamma;
  std::sort(out.begin(), out.end(),
            [&](const BeamCandidate& a, const BeamCandidate& b) { return final_order(a, b, gamma); });
  if (out.size() > static_cast<std::size_t>(config.beam_k)) out.resize(static_cast<std::size_t>(config.beam_k));
  return out;
}

const BeamCandidate& select_final(const std::vector<BeamCandidate>& candidates, double gamma) {
  if (candidates.empty()) throw EmptyCandidates("select_final: no candidates");
  return *std::min_element(candidates.begin(), candidates.end(),
                           [&](const BeamCandidate& a, const BeamCandidate& b) {
                             return final_order(a, b, gamma);
                           });
}

}  // namespace cqgen
