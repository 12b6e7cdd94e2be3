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

#ifndef CQGEN_TEXT_H_
#define CQGEN_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace cqgen {

// Literal spelling of the separator token inside raw text.
inline constexpr std::string_view kSepLiteral = "[SEP]";

// The one tokenizer used everywhere (LM training, constraints, metrics):
// lowercase, every ASCII punctuation character becomes its own token, split
// on whitespace. The literal "[SEP]" (any case) survives as a single token.
std::vector<std::string> tokenize(std::string_view text);

// Tokens joined by single spaces.
std::string detokenize(const std::vector<std::string>& tokens);

// True when the token consists only of ASCII punctuation.
bool is_punctuation(std::string_view token);

// tokenize() minus punctuation tokens; used for facet and constraint words.
std::vector<std::string> content_words(std::string_view text);

std::string to_lower(std::string_view text);
std::string trim(std::string_view text);

}  // namespace cqgen

#endif  // CQGEN_TEXT_H_
