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

#include "cqgen/error.h"
#include "cqgen/ngram.h"
#include "cqgen/rankers.h"
#include "cqgen/text.h"
#include "oracles.h"
#include "properties.h"
#include "test_models.h"

using namespace cqgen;

namespace {

std::vector<std::size_t> order(const RankedList& r) {
  std::vector<std::size_t> out;
  for (const auto& e : r) out.push_back(e.index);
  return out;
}

const std::string kNear = "do you need information about the map of South Africa";
const std::string kFar = "do you want to buy a map that is made in South Africa";

}  // namespace

TEST_CASE("score ranking is stable") {
  CHECK(order(rank_by_scores({1, 3, 3, 2})) == std::vector<std::size_t>{1, 2, 3, 0});
  CHECK(order(rank_by_scores({5})) == std::vector<std::size_t>{0});
}

TEST_CASE("perplexity ranker") {
  const cqgen::testing::ChainModel chain({"i", "want", "maps"});
  CHECK(order(rank_perplexity(chain, "i", {"maps", "want maps"}))[0] == 1);

  // Bigram on "a b a b", k = 1, outcomes {a, b, </s>, <unk>}.
  const NGramModel m = train_ngram(std::vector<std::string>{"a b a b"}, 2, 1.0);
  // "a b": p(a|<s>) = 2/5, p(b|a) = 3/6.        ppl = (0.4 * 0.5)^(-1/2)
  // "a a": p(a|<s>) = 2/5, p(a|a) = 1/6.        ppl = (0.4 / 6)^(-1/2)
  const auto r = rank_perplexity(m, "a", {"a", "b"});
  CHECK(order(r) == std::vector<std::size_t>{1, 0});
  CHECK(r[0].score == doctest::Approx(-std::pow(0.4 * 0.5, -0.5)).epsilon(1e-12));
  CHECK(r[1].score == doctest::Approx(-std::pow(0.4 / 6.0, -0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(rank_perplexity(m, "a", {}), InvalidInput);
}

TEST_CASE("AutoScore") {
  const std::string q = "pictures of south africa";
  auto r = rank_autoscore(q, {"maps", q, "south africa"});
  CHECK(r[0].index == 1);
  CHECK(r.back().score == 0.0);
  // 3/4, 2/4, 1/4 of the query's unigrams.
  r = rank_autoscore(q, {"south", "of south africa", "south africa"});
  CHECK(order(r) == std::vector<std::size_t>{1, 2, 0});
  CHECK(r[0].score > r[1].score);
  CHECK(r[1].score > r[2].score);
  CHECK_THROWS_AS(rank_autoscore(q, {"x"}, AutoScoreWeights{0, 0, 0}), InvalidInput);
  CHECK_THROWS_AS(rank_autoscore(q, {"x"}, AutoScoreWeights{-1, 1, 1}), InvalidInput);
}

TEST_CASE("WSDM defaults") {
  const WsdmParams p;
  CHECK(p.lambda_t == 1.0);
  CHECK(p.lambda_o == 1.0);
  CHECK(p.lambda_u == 1.0);
  CHECK(p.mu == 25.0);
  CHECK(p.window == 8);
}

TEST_CASE("WSDM counts") {
  const auto doc = tokenize("south africa map of south africa");
  CHECK(ordered_count(doc, "south", "africa") == 2);
  CHECK(ordered_count(doc, "africa", "south") == 0);
  // Position pairs within distance < 8, either order: (0,1) (0,5) (1,4) (4,5).
  CHECK(unordered_count(doc, "south", "africa", 8) == 4);
  CHECK(unordered_count(doc, "south", "africa", 2) == 2);
}

TEST_CASE("WSDM score values") {
  const WsdmParams p;
  const auto uniform4 = CollectionStats::uniform(4);
  CHECK(wsdm_score({"a", "b"}, tokenize("a b c"), p, uniform4) ==
        doctest::Approx(-7.484848414038596).epsilon(1e-12));
  CHECK(wsdm_score({"a", "b"}, tokenize("a b c"), p, uniform4) ==
        doctest::Approx(cqgen::testing::wsdm_by_hand({"a", "b"}, tokenize("a b c"), 25, 8, 4)).epsilon(1e-12));
  // No query term present: every family contributes log(mu * P_bg / (|D| + mu)).
  const double expect = 2 * std::log(25.0 / 4 / 27) + 2 * std::log(25.0 / 16 / 27);
  CHECK(wsdm_score({"a", "b"}, tokenize("x y"), p, uniform4) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(wsdm_score({}, tokenize("x"), p, uniform4), InvalidInput);
  CHECK_THROWS_AS(wsdm_score({"a"}, {}, p, uniform4), InvalidInput);
}

TEST_CASE("WSDM prefers proximity") {
  const auto r = rank_wsdm({"south", "africa"}, {"map"}, {kFar, kNear});
  CHECK(order(r) == std::vector<std::size_t>{1, 0});
  const auto s = rank_wsdm({"south", "africa"}, {"map"}, {kNear, kFar});
  CHECK(order(s) == std::vector<std::size_t>{0, 1});
  CHECK(order(rank_wsdm({"south"}, {"map"}, {kFar})) == std::vector<std::size_t>{0});
  // Duplicated query terms collapse.
  CHECK(order(rank_wsdm({"south", "africa", "south"}, {"map", "Map"}, {kFar, kNear})) ==
        std::vector<std::size_t>{1, 0});
  CHECK_THROWS_AS(rank_wsdm({"?"}, {}, {kFar}), InvalidInput);
}

TEST_CASE("pool-estimated background") {
  const std::vector<std::vector<std::string>> pool = {tokenize("a b a"), tokenize("b c")};
  const auto stats = CollectionStats::from_pool(pool, 8);
  CHECK(stats.term("a") > stats.term("c"));
  CHECK(stats.term("zzz") > 0.0);
  CHECK(stats.ordered("a", "b") > stats.ordered("c", "a"));
  CHECK(std::isfinite(wsdm_score({"a", "c"}, tokenize("a b c"), WsdmParams{}, stats)));
}

TEST_CASE("rankers invariants") {
  for (const auto& p : cqgen::testing::properties_for("rankers")) {
    const auto r = cqgen::testing::run_property(p, 200);
    INFO(p.name << ": " << r.first_failure);
    CHECK(r.ok());
  }
}
