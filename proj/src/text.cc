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

#include "cqgen/text.h"

#include <algorithm>
#include <cctype>

namespace cqgen {

namespace {

bool is_punct_char(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

bool is_space_char(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool starts_with_sep(std::string_view text, std::size_t pos) {
  if (text.size() - pos < kSepLiteral.size()) return false;
  for (std::size_t i = 0; i < kSepLiteral.size(); ++i) {
    char a = static_cast<char>(std::toupper(static_cast<unsigned char>(text[pos + i])));
    if (a != kSepLiteral[i]) return false;
  }
  return true;
}

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && is_space_char(text[b])) ++b;
  while (e > b && is_space_char(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (is_space_char(c)) {
      flush();
      ++i;
    } else if (c == '[' && starts_with_sep(text, i)) {
      flush();
      tokens.emplace_back(kSepLiteral);
      i += kSepLiteral.size();
    } else if (is_punct_char(c)) {
      flush();
      tokens.emplace_back(1, c);
      ++i;
    } else {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      ++i;
    }
  }
  flush();
  return tokens;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

bool is_punctuation(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), is_punct_char);
}

std::vector<std::string> content_words(std::string_view text) {
  std::vector<std::string> words;
  for (auto& t : tokenize(text)) {
    if (!is_punctuation(t) && t != kSepLiteral) words.push_back(std::move(t));
  }
  return words;
}

}  // namespace cqgen
