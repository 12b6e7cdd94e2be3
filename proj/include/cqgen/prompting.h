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

#ifndef CQGEN_PROMPTING_H_
#define CQGEN_PROMPTING_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cqgen {

// Clarifying-question openings used as decoder start text.
class TemplateSet {
 public:
  // The eight built-in prompts, reversed from the most common answer
  // 4-grams: "would you like to", "do you want to", "are you interested
  // in", "are you looking for", "do you need to", "do you need information",
  // "do you want information", "do you want to know".
  static TemplateSet builtin();
  // One template per non-blank line; lowercased and deduplicated.
  static TemplateSet load(const std::filesystem::path& path);

  explicit TemplateSet(std::vector<std::string> templates);

  const std::vector<std::string>& templates() const { return templates_; }
  std::size_t size() const { return templates_.size(); }
  bool contains(std::string_view t) const;

 private:
  std::vector<std::string> templates_;
};

struct PromptedInput {
  std::string query;
  std::string template_text;
  std::vector<std::string> decoder_input;  // query tokens, [SEP], template tokens
};

// One input per template, in template order. Throws InvalidInput on an
// empty query.
std::vector<PromptedInput> build_prompts(std::string_view query, const TemplateSet& templates);

// "template body" (just the template when the body is empty).
std::string assemble_question(std::string_view template_text, const std::vector<std::string>& body);

struct StrippedQuestion {
  std::optional<std::string> template_text;  // none when no template matched
  std::string body;                          // tokenized, space-joined
};

// Removes the longest template that prefixes the tokenized question.
StrippedQuestion strip_template(std::string_view question, const TemplateSet& templates);

// Query-framing words dropped by extract_subject.
const std::vector<std::string>& subject_stoplist();

// Optional replacement for the stoplist heuristic (e.g. a POS tagger).
using SubjectExtractor = std::function<std::vector<std::string>(std::string_view)>;

// Content words of the query minus the stoplist and punctuation; falls back
// to every non-punctuation token if nothing survives. Throws InvalidInput on
// an empty query.
std::vector<std::string> extract_subject(std::string_view query);

}  // namespace cqgen

#endif  // CQGEN_PROMPTING_H_
