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

#include <algorithm>

#include "cqgen/error.h"
#include "cqgen/pipeline.h"
#include "cqgen/text.h"

namespace cqgen {

namespace {

constexpr std::pair<GenerationMode, std::string_view> kModeNames[] = {
    {GenerationMode::kZsfc, "zsfc"},
    {GenerationMode::kTemplate0, "template_0"},
    {GenerationMode::kQGpt0, "q_gpt_0"},
    {GenerationMode::kQfGpt0, "qf_gpt_0"},
    {GenerationMode::kPrompt0, "prompt_0"},
    {GenerationMode::kSubjectConstrained, "subject_constrained"},
    {GenerationMode::kTemplateFacet, "template_facet"},
};

constexpr std::pair<RankerKind, std::string_view> kRankerNames[] = {
    {RankerKind::kPerplexity, "ppl"},
    {RankerKind::kAutoScore, "autoscore"},
    {RankerKind::kWsdm, "wsdm"},
    {RankerKind::kExternal, "external"},
};

std::vector<std::string> subject_words(std::string_view query, const GenerationConfig& config) {
  return config.subject_extractor ? config.subject_extractor(query) : extract_subject(query);
}

std::vector<std::string> with_sep(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.emplace_back(kSep);
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

void fill_from_ranking(GenerationRecord& record, const RankedList& ranked) {
  record.scores.assign(record.candidates.size(), 0.0);
  for (const auto& e : ranked) record.scores[e.index] = e.score;
  record.selected = record.candidates[ranked.front().index];
}

// One beam_search over `prompt`; the record holds the single best output.
void single_sequence(GenerationRecord& record, const std::vector<std::string>& prompt,
                     const LanguageModel& lm, const GenerationConfig& config) {
  const Vocab& vocab = lm.vocab();
  const auto ids = vocab.ids(prompt);
  const auto beams = beam_search(lm, ids, config.decode);
  if (beams.empty()) throw Error("decoder produced no candidates");
  record.candidates = {detokenize(vocab.strings(beams.front().tokens))};
  record.scores = {normalized_logprob(beams.front(), config.decode.length_norm_gamma)};
  record.selected = record.candidates.front();
  record.ranker = "none";
}

GenerationRecord generate_impl(std::size_t row_id, const DatasetRow& row, GenerationMode mode,
                               const LanguageModel& lm, const Ranker& ranker,
                               const GenerationConfig& config) {
  GenerationRecord record;
  record.row_id = row_id;
  record.mode = mode;
  const auto query_tokens = tokenize(row.query);
  if (query_tokens.empty()) throw InvalidInput("empty query");

  switch (mode) {
    case GenerationMode::kQGpt0:
      single_sequence(record, query_tokens, lm, config);
      return record;
    case GenerationMode::kQfGpt0: {
      const auto facet_tokens = tokenize(row.facet);
      if (facet_tokens.empty()) throw InvalidInput("empty facet");
      single_sequence(record, with_sep(facet_tokens, query_tokens), lm, config);
      return record;
    }
    case GenerationMode::kPrompt0: {
      auto prompt = query_tokens;
      for (auto& t : tokenize(instruction_sentence(row.facet))) prompt.push_back(std::move(t));
      single_sequence(record, prompt, lm, config);
      return record;
    }
    case GenerationMode::kTemplateFacet: {
      const auto facet_tokens = tokenize(row.facet);
      if (facet_tokens.empty()) throw InvalidInput("empty facet");
      for (const auto& t : config.templates.templates()) {
        record.templates.push_back(t);
        record.candidates.push_back(assemble_question(t, facet_tokens));
      }
      record.ranker = std::string(to_string(RankerKind::kPerplexity));
      fill_from_ranking(record, rank_perplexity(lm, row.query, record.candidates));
      return record;
    }
    case GenerationMode::kZsfc:
    case GenerationMode::kSubjectConstrained:
    case GenerationMode::kTemplate0:
      break;
  }

  const std::vector<std::string> subject = subject_words(row.query, config);
  std::optional<ConstraintSet> constraints;
  if (mode == GenerationMode::kZsfc) {
    constraints = ConstraintSet::from_text(row.facet);
    if (constraints->empty()) throw InvalidInput("facet has no words to constrain on");
  } else if (mode == GenerationMode::kSubjectConstrained) {
    constraints = ConstraintSet(subject);
  }

  const Vocab& vocab = lm.vocab();
  for (const auto& prompt : build_prompts(row.query, config.templates)) {
    const auto ids = vocab.ids(prompt.decoder_input);
    std::vector<std::string> body;
    if (constraints) {
      const auto beams = neurologic_decode(lm, ids, *constraints, config.decode);
      if (!beams.empty()) {
        body = vocab.strings(select_final(beams, config.decode.length_norm_gamma).tokens);
      }
    } else {
      const auto beams = beam_search(lm, ids, config.decode);
      if (!beams.empty()) body = vocab.strings(beams.front().tokens);
    }
    record.templates.push_back(prompt.template_text);
    record.candidates.push_back(assemble_question(prompt.template_text, body));
  }

  const RankingInput input{row.query, row.facet, subject, record.candidates};
  std::string used;
  const RankedList ranked = ranker.rank(input, lm, &used);
  record.ranker = used;
  fill_from_ranking(record, ranked);
  return record;
}

}  // namespace

std::string_view to_string(GenerationMode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "unknown";
}

GenerationMode parse_generation_mode(std::string_view name) {
  for (const auto& [m, n] : kModeNames) {
    if (n == name) return m;
  }
  throw InvalidInput("unknown generation mode: " + std::string(name));
}

const std::vector<GenerationMode>& all_generation_modes() {
  static const std::vector<GenerationMode> modes = [] {
    std::vector<GenerationMode> v;
    for (const auto& [m, name] : kModeNames) v.push_back(m);
    return v;
  }();
  return modes;
}

bool uses_templates(GenerationMode mode) {
  switch (mode) {
    case GenerationMode::kZsfc:
    case GenerationMode::kTemplate0:
    case GenerationMode::kSubjectConstrained:
    case GenerationMode::kTemplateFacet:
      return true;
    default:
      return false;
  }
}

std::string instruction_sentence(std::string_view facet) {
  return "Ask a question that contains words in the list [" + std::string(facet) + "].";
}

std::string_view to_string(RankerKind kind) {
  for (const auto& [k, name] : kRankerNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

RankerKind parse_ranker_kind(std::string_view name) {
  if (name == "perplexity") return RankerKind::kPerplexity;
  for (const auto& [k, n] : kRankerNames) {
    if (n == name) return k;
  }
  throw InvalidInput("unknown ranker: " + std::string(name));
}

Ranker::Ranker(RankerConfig config) : config_(std::move(config)) {
  config_.wsdm.validate();
  config_.autoscore.validate();
  if (config_.kind == RankerKind::kExternal) {
    if (config_.scorer_endpoint.empty()) throw InvalidInput("external ranker needs an endpoint");
    scorer_ = std::make_shared<ExternalScorer>(Endpoint::parse(config_.scorer_endpoint),
                                               config_.scorer_concurrent, config_.timeout_s);
  }
}

RankedList Ranker::rank(const RankingInput& input, const LanguageModel& lm,
                        std::string* ranker_used) const {
  auto wsdm = [&] {
    return rank_wsdm(input.subject_words, content_words(input.facet), input.candidates,
                     config_.wsdm);
  };
  if (ranker_used != nullptr) *ranker_used = name();
  switch (config_.kind) {
    case RankerKind::kPerplexity:
      return rank_perplexity(lm, input.query, input.candidates);
    case RankerKind::kAutoScore:
      return rank_autoscore(input.query, input.candidates, config_.autoscore);
    case RankerKind::kWsdm:
      return wsdm();
    case RankerKind::kExternal:
      try {
        return rank_external(*scorer_, input.query, input.facet, input.candidates);
      } catch (const RemoteRankingError&) {
        if (!config_.fallback_to_wsdm) throw;
        if (ranker_used != nullptr) *ranker_used = "wsdm(fallback)";
        return wsdm();
      }
  }
  throw InvalidInput("unhandled ranker kind");
}

GenerationRecord generate_for_row(std::size_t row_id, const DatasetRow& row, GenerationMode mode,
                                  const LanguageModel& lm, const Ranker& ranker,
                                  const GenerationConfig& config) {
  try {
    return generate_impl(row_id, row, mode, lm, ranker, config);
  } catch (const RowError&) {
    throw;
  } catch (const std::exception& e) {
    throw RowError(row_id, e.what());
  }
}

}  // namespace cqgen
