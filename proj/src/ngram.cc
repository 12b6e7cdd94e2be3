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

#include "cqgen/ngram.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cqgen/error.h"
#include "cqgen/text.h"

namespace cqgen {

namespace {

constexpr std::string_view kMagic = "cqgen-ngram";
constexpr int kFormatVersion = 1;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ModelFormatError("bad real: " + s);
  }
  return v;
}

std::string expect_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw ModelFormatError(std::string("truncated model: missing ") + what);
  return line;
}

// "key value" line.
std::string expect_field(std::istream& in, std::string_view key) {
  std::string line = expect_line(in, key.data());
  if (line.size() <= key.size() + 1 || line.compare(0, key.size(), key) != 0 ||
      line[key.size()] != ' ') {
    throw ModelFormatError("expected '" + std::string(key) + "' line, got: " + line);
  }
  return line.substr(key.size() + 1);
}

std::uint64_t parse_count(const std::string& s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ModelFormatError("bad count: " + s);
  }
  return v;
}

}  // namespace

NGramModel::NGramModel(int order, double add_k, Vocab vocab, CountTable counts)
    : order_(order), add_k_(add_k), vocab_(std::move(vocab)), counts_(std::move(counts)) {
  if (order_ < 1) throw InvalidInput("n-gram order must be >= 1");
  if (!(add_k_ > 0.0)) throw InvalidInput("add_k must be > 0");
  for (const auto& [ctx, row] : counts_) {
    if (ctx.size() != static_cast<std::size_t>(order_ - 1)) {
      throw InvalidInput("n-gram context length differs from order - 1");
    }
    std::uint64_t total = 0;
    for (const auto& [w, c] : row) {
      if (w < 0 || static_cast<std::size_t>(w) >= vocab_.size() || !Vocab::is_outcome(w)) {
        throw InvalidInput("n-gram count for a non-outcome token");
      }
      total += c;
    }
    totals_[ctx] = total;
  }
}

NGramModel::Context NGramModel::context_key(std::span<const TokenId> context) const {
  const auto width = static_cast<std::size_t>(order_ - 1);
  Context key(width, Vocab::kBosId);
  const std::size_t take = std::min(width, context.size());
  std::copy(context.end() - static_cast<std::ptrdiff_t>(take), context.end(),
            key.end() - static_cast<std::ptrdiff_t>(take));
  return key;
}

std::uint64_t NGramModel::count(const Context& context, TokenId next) const {
  auto it = counts_.find(context);
  if (it == counts_.end()) return 0;
  auto jt = it->second.find(next);
  return jt == it->second.end() ? 0 : jt->second;
}

std::uint64_t NGramModel::context_total(const Context& context) const {
  auto it = totals_.find(context);
  return it == totals_.end() ? 0 : it->second;
}

TokenDist NGramModel::next_token_dist(std::span<const TokenId> context) const {
  const Context key = context_key(context);
  const double denom = static_cast<double>(context_total(key)) +
                       add_k_ * static_cast<double>(vocab_.num_outcomes());
  TokenDist dist;
  dist.probs.assign(vocab_.size(), 0.0);
  const double floor = add_k_ / denom;
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (Vocab::is_outcome(static_cast<TokenId>(i))) dist.probs[i] = floor;
  }
  if (auto it = counts_.find(key); it != counts_.end()) {
    for (const auto& [w, c] : it->second) {
      dist.probs[static_cast<std::size_t>(w)] = (static_cast<double>(c) + add_k_) / denom;
    }
  }
  return dist;
}

void NGramModel::save(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "order " << order_ << '\n';
  out << "add_k " << format_double(add_k_) << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (const auto& t : vocab_.tokens()) out << t << '\n';
  std::size_t n = 0;
  for (const auto& [ctx, row] : counts_) n += row.size();
  out << "counts " << n << '\n';
  for (const auto& [ctx, row] : counts_) {
    for (const auto& [w, c] : row) {
      for (TokenId id : ctx) out << id << ' ';
      out << w << ' ' << c << '\n';
    }
  }
}

void NGramModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelFormatError("cannot write model: " + path.string());
  save(out);
  if (!out) throw ModelFormatError("write failed: " + path.string());
}

NGramModel NGramModel::load(std::istream& in) {
  std::string header = expect_line(in, "header");
  if (header != std::string(kMagic) + " " + std::to_string(kFormatVersion)) {
    throw ModelFormatError("not a cqgen n-gram model (version " +
                           std::to_string(kFormatVersion) + "): " + header);
  }
  const int order = static_cast<int>(parse_count(expect_field(in, "order")));
  const double add_k = parse_double(expect_field(in, "add_k"));
  const std::uint64_t vocab_size = parse_count(expect_field(in, "vocab"));
  std::vector<std::string> tokens;
  for (std::uint64_t i = 0; i < vocab_size; ++i) tokens.push_back(expect_line(in, "vocab entry"));
  if (tokens.size() < 4 || tokens[0] != kBos || tokens[1] != kEos || tokens[2] != kSep ||
      tokens[3] != kUnk) {
    throw ModelFormatError("model vocab does not start with the reserved tokens");
  }
  Vocab vocab(tokens);
  if (vocab.size() != tokens.size()) throw ModelFormatError("duplicate vocab entries");

  const std::uint64_t n = parse_count(expect_field(in, "counts"));
  CountTable counts;
  for (std::uint64_t i = 0; i < n; ++i) {
    std::istringstream line(expect_line(in, "count entry"));
    Context ctx(static_cast<std::size_t>(order - 1));
    TokenId w = 0;
    std::uint64_t c = 0;
    for (auto& id : ctx) line >> id;
    line >> w >> c;
    if (!line) throw ModelFormatError("malformed count entry " + std::to_string(i));
    for (TokenId id : ctx) {
      if (id < 0 || static_cast<std::uint64_t>(id) >= vocab_size) {
        throw ModelFormatError("context id out of range");
      }
    }
    counts[ctx][w] = c;
  }
  try {
    return NGramModel(order, add_k, std::move(vocab), std::move(counts));
  } catch (const InvalidInput& e) {
    throw ModelFormatError(e.what());
  }
}

NGramModel NGramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open model: " + path.string());
  return load(in);
}

bool NGramModel::operator==(const NGramModel& other) const {
  return order_ == other.order_ && add_k_ == other.add_k_ && vocab_ == other.vocab_ &&
         counts_ == other.counts_;
}

NGramModel train_ngram(const std::vector<std::string>& lines, int order, double add_k) {
  if (order < 1) throw InvalidInput("n-gram order must be >= 1");
  if (!(add_k > 0.0)) throw InvalidInput("add_k must be > 0");

  std::vector<std::vector<std::string>> sentences;
  Vocab vocab;
  for (const auto& line : lines) {
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    for (const auto& t : tokens) vocab.add(t);
    sentences.push_back(std::move(tokens));
  }
  if (sentences.empty()) throw TrainingError("training corpus is empty after tokenization");

  const auto width = static_cast<std::size_t>(order - 1);
  NGramModel::CountTable counts;
  for (const auto& sentence : sentences) {
    std::vector<TokenId> padded(width, Vocab::kBosId);
    for (const auto& t : sentence) padded.push_back(vocab.id(t));
    padded.push_back(Vocab::kEosId);
    for (std::size_t i = width; i < padded.size(); ++i) {
      const TokenId next = padded[i];
      if (!Vocab::is_outcome(next)) continue;
      NGramModel::Context ctx(padded.begin() + static_cast<std::ptrdiff_t>(i - width),
                              padded.begin() + static_cast<std::ptrdiff_t>(i));
      ++counts[ctx][next];
    }
  }
  return NGramModel(order, add_k, std::move(vocab), std::move(counts));
}

NGramModel train_ngram(std::istream& corpus, int order, double add_k) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(corpus, line);) lines.push_back(std::move(line));
  return train_ngram(lines, order, add_k);
}

}  // namespace cqgen
