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

#include "cqgen/prompting.h"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "cqgen/error.h"
#include "cqgen/lm.h"
#include "cqgen/text.h"

namespace cqgen {

TemplateSet TemplateSet::builtin() {
  return TemplateSet({
      "would you like to",
      "do you want to",
      "are you interested in",
      "are you looking for",
      "do you need to",
      "do you need information",
      "do you want information",
      "do you want to know",
  });
}

TemplateSet::TemplateSet(std::vector<std::string> templates) {
  for (auto& t : templates) {
    std::string norm = detokenize(tokenize(t));
    if (norm.empty()) continue;
    if (std::find(templates_.begin(), templates_.end(), norm) == templates_.end()) {
      templates_.push_back(std::move(norm));
    }
  }
  if (templates_.empty()) throw InvalidInput("template set is empty");
}

TemplateSet TemplateSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open template file: " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return TemplateSet(std::move(lines));
}

bool TemplateSet::contains(std::string_view t) const {
  const std::string norm = detokenize(tokenize(t));
  return std::find(templates_.begin(), templates_.end(), norm) != templates_.end();
}

std::vector<PromptedInput> build_prompts(std::string_view query, const TemplateSet& templates) {
  const auto query_tokens = tokenize(query);
  if (query_tokens.empty()) throw InvalidInput("build_prompts: empty query");
  std::vector<PromptedInput> out;
  out.reserve(templates.size());
  for (const auto& t : templates.templates()) {
    PromptedInput p;
    p.query = std::string(query);
    p.template_text = t;
    p.decoder_input = query_tokens;
    p.decoder_input.emplace_back(kSep);
    for (auto& tok : tokenize(t)) p.decoder_input.push_back(std::move(tok));
    out.push_back(std::move(p));
  }
  return out;
}

std::string assemble_question(std::string_view template_text,
                              const std::vector<std::string>& body) {
  std::string out(template_text);
  if (!body.empty()) {
    out.push_back(' ');
    out += detokenize(body);
  }
  return out;
}

StrippedQuestion strip_template(std::string_view question, const TemplateSet& templates) {
  const auto tokens = tokenize(question);
  std::size_t best_len = 0;
  const std::string* best = nullptr;
  for (const auto& t : templates.templates()) {
    const auto ttoks = tokenize(t);
    if (ttoks.size() <= best_len || ttoks.size() > tokens.size()) continue;
    if (std::equal(ttoks.begin(), ttoks.end(), tokens.begin())) {
      best_len = ttoks.size();
      best = &t;
    }
  }
  StrippedQuestion out;
  if (best != nullptr) out.template_text = *best;
  out.body = detokenize(std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(best_len),
                                                 tokens.end()));
  return out;
}

const std::vector<std::string>& subject_stoplist() {
  static const std::vector<std::string> words = {
      "i",       "im",     "m",      "me",    "my",     "am",    "is",     "are",   "was",
      "be",      "looking", "look",  "for",   "information", "info", "about", "tell", "find",
      "want",    "wanted", "would",  "like",  "know",   "learn", "need",   "to",    "the",
      "a",       "an",     "of",     "in",    "on",     "at",    "by",     "from",  "with",
      "and",     "or",     "what",   "how",   "where",  "who",   "which",  "some",  "any",
      "do",      "does",   "can",    "could", "you",    "your",  "get",    "give",  "show",
      "search",  "searching", "interested", "more", "please", "it", "this", "that",  "s",
      "t",       "d",      "ll",     "re",    "ve",     "go",    "going",  "see",   "there",
  };
  return words;
}

std::vector<std::string> extract_subject(std::string_view query) {
  const auto words = content_words(query);
  if (tokenize(query).empty()) throw InvalidInput("extract_subject: empty query");
  static const std::unordered_set<std::string> stop(subject_stoplist().begin(),
                                                   subject_stoplist().end());
  std::vector<std::string> subject;
  for (const auto& w : words) {
    if (stop.count(w) == 0) subject.push_back(w);
  }
  if (subject.empty()) subject = words;
  if (subject.empty()) subject = tokenize(query);
  return subject;
}

}  // namespace cqgen
