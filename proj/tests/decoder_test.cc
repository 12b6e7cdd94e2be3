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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cqgen/decoder.h"
#include "cqgen/error.h"
#include "oracles.h"
#include "properties.h"
#include "test_models.h"

using namespace cqgen;
using namespace cqgen::testing;

namespace {

std::vector<std::string> words(std::initializer_list<const char*> w) { return {w.begin(), w.end()}; }

BeamCandidate cand(std::vector<TokenId> tokens, double lp, Signature sig) {
  BeamCandidate c;
  c.tokens = std::move(tokens);
  c.logprob = lp;
  c.signature = sig;
  c.finished = true;
  return c;
}

}  // namespace

TEST_CASE("constraint sets normalize and deduplicate") {
  const ConstraintSet c({"Map", "south africa", "map", "?"});
  CHECK(c.words() == words({"map", "south", "africa"}));
  CHECK(ConstraintSet::from_text("Pictures, maps").words() == words({"pictures", "maps"}));
  std::vector<std::string> many;
  for (int i = 0; i < 65; ++i) many.push_back("w" + std::to_string(i));
  CHECK_THROWS_AS(ConstraintSet{many}, InvalidInput);
}

TEST_CASE("satisfaction is whole-word set containment") {
  const ConstraintSet pictures({"pictures"});
  CHECK(satisfaction(words({"pictures", "of", "south", "africa"}), pictures) == 1);
  CHECK(satisfaction(words({"picture", "of", "africa"}), pictures) == 0);
  const ConstraintSet map_city({"map", "city"});
  const Signature s = satisfaction(words({"map", "of", "the", "map"}), map_city);
  CHECK(s == 1);
  CHECK(satisfied_count(s) == 1);
}

TEST_CASE("config defaults and validation") {
  const DecodeConfig d;
  CHECK(d.beam_k == 20);
  CHECK(d.alpha == 400);
  CHECK(d.beta == 400);
  CHECK(d.max_len == 20);
  CHECK(d.length_norm_gamma == 0.0);
  CHECK(DecodeConfig::for_beam(3).alpha == 60);
  DecodeConfig bad;
  bad.alpha = 10;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("forced chain") {
  const ChainModel lm({"x", "y", "z"});
  DecodeConfig config = DecodeConfig::for_beam(3);
  config.max_len = 6;
  const auto out = beam_search(lm, {}, config);
  REQUIRE(out.size() == 1);
  CHECK(lm.vocab().strings(out[0].tokens) == words({"x", "y", "z"}));
  CHECK(out[0].finished);
  CHECK(out[0].logprob == 0.0);
}

TEST_CASE("beam of one is greedy") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RandomTreeModel lm(4, seed);
    DecodeConfig config = DecodeConfig::for_beam(1);
    config.max_len = 6;
    const auto out = beam_search(lm, {}, config);
    const auto greedy = greedy_sequence(lm, {}, 6);
    REQUIRE(out.size() == 1);
    CHECK(out[0].tokens == greedy.tokens);
    CHECK(out[0].finished == greedy.finished);
  }
}

TEST_CASE("beam search top equals the exhaustive argmax") {
  // Three words plus EOS, max_len 3, k = 4^3.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RandomTreeModel lm(3, seed);
    DecodeConfig config = DecodeConfig::for_beam(64);
    config.max_len = 3;
    const auto out = beam_search(lm, {}, config);
    const auto best = best_sequence(enumerate_sequences(lm, {}, 3));
    REQUIRE(!out.empty());
    CHECK(out[0].tokens == best.tokens);
    CHECK(out[0].finished == best.finished);
    CHECK(out[0].logprob == doctest::Approx(best.logprob).epsilon(1e-12));
  }
}

TEST_CASE("no constraints reproduce beam search") {
  const RandomTreeModel lm(4, 99);
  DecodeConfig config = DecodeConfig::for_beam(5);
  config.max_len = 5;
  config.alpha = config.beta = 5 * static_cast<int>(lm.vocab().size());
  CHECK(neurologic_decode(lm, {}, ConstraintSet(), config) == beam_search(lm, {}, config));
}

TEST_CASE("constrained top equals the best sequence containing the word") {
  // Vocabulary of five outcomes: four words (one is "map") and EOS.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::vector<std::string> names = {"map", "the", "of", "city"};
    std::map<std::string, TableModel::Row> rows;
    // Random bigram table over named words.
    std::mt19937_64 rng(seed);
    auto row = [&] {
      TableModel::Row r;
      for (const auto& n : names) r[n] = 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
      r["</s>"] = 0.05 + static_cast<double>(rng() % 1000) / 1000.0;
      return r;
    };
    for (const auto& n : names) rows[n] = row();
    const TableModel lm(names, rows, row());
    DecodeConfig config;
    config.max_len = 4;
    config.beam_k = 625;
    config.alpha = config.beta = 625 * 5;
    const ConstraintSet c({"map"});
    const auto out = neurologic_decode(lm, {}, c, config);
    const auto oracle = best_per_count(enumerate_sequences(lm, {}, 4), lm.vocab(), c.words());
    REQUIRE(oracle.count(1));
    REQUIRE(!out.empty());
    CHECK(out[0].satisfied() == 1);
    CHECK(out[0].tokens == oracle.at(1).tokens);
    CHECK(out[0].finished == oracle.at(1).finished);
  }
}

TEST_CASE("an improbable constraint word loses to the reachable one") {
  const std::vector<std::string> names = {"map", "picture", "the", "of"};
  const TableModel::Row row = {{"map", 0.3}, {"picture", 1e-12}, {"the", 0.35}, {"of", 0.25}, {"</s>", 0.1}};
  const TableModel lm(names, {}, row);
  DecodeConfig config;
  config.max_len = 3;
  config.beam_k = 5;
  config.alpha = config.beta = 5;
  const ConstraintSet c({"map", "picture"});
  const auto out = neurologic_decode(lm, {}, c, config);
  const auto oracle = best_per_count(enumerate_sequences(lm, {}, 3), lm.vocab(), c.words());
  const BeamCandidate& top = select_final(out);
  CHECK(top.satisfied() == 1);
  CHECK(std::find(top.tokens.begin(), top.tokens.end(), lm.vocab().id("map")) != top.tokens.end());
  CHECK(top.tokens == oracle.at(1).tokens);
  CHECK(top.finished == oracle.at(1).finished);
}

TEST_CASE("select_final") {
  CHECK_THROWS_AS(select_final({}), EmptyCandidates);
  const auto one = cand({4}, -3, 0);
  CHECK(select_final({one}) == one);
  const auto two = cand({4}, -9, 3);
  const auto single = cand({5}, -1, 1);
  CHECK(select_final({single, two}) == two);
  const auto better = cand({6}, -0.5, 1);
  CHECK(select_final({single, better}) == better);
  // gamma = 1 compares per-step averages.
  const auto long_c = cand({4, 4, 4}, -3.0, 0);  // 4 steps with EOS: -0.75
  const auto short_c = cand({5}, -2.0, 0);       // 2 steps: -1.0
  CHECK(select_final({short_c, long_c}, 0.0) == short_c);
  CHECK(select_final({short_c, long_c}, 1.0) == long_c);
}

TEST_CASE("LM call budget at the default beam") {
  const RandomTreeModel base(30, 5, -3.0);
  const CountingModel lm(base);
  DecodeTrace trace;
  const ConstraintSet c({"w3", "w17"});
  neurologic_decode(lm, {}, c, DecodeConfig::for_beam(20), &trace);
  CHECK(lm.calls() <= 400);
  CHECK(lm.calls() == trace.lm_calls());
}

TEST_CASE("decoder invariants") {
  for (const auto& p : properties_for("decoder")) {
    const auto r = run_property(p, 200);
    INFO(p.name << ": " << r.first_failure);
    CHECK(r.ok());
  }
}
