// Copyright 2026 The Scripta Authors
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


#include <doctest.h>

#include <cmath>

#include "scripta/error.hpp"
#include "scripta/language_model.hpp"

using namespace scripta;

using Strings = std::vector<std::string>;

namespace {

ContextLM toy_model(int order) {
  ContextLM lm(order);
  lm.add_sentence({"sicut", "ita", "est"});
  lm.add_sentence({"ad", "illa", "terram"});
  lm.add_sentence({"sicut", "ita", "est", "ita"});
  return lm;
}

double mass(const ContextLM& lm, const Strings& context) {
  double total = lm.prob(context, ContextLM::kUnk);
  for (const auto& w : lm.vocab()) total += lm.prob(context, w);
  return total;
}

}  // namespace

TEST_CASE("distributions sum to one in every context") {
  for (int order : {1, 2, 3, 4}) {
    const auto lm = toy_model(order);
    for (const Strings& ctx : {Strings{}, Strings{"sicut"}, Strings{"ad", "illa"},
                               Strings{"nunquam", "visum"}, Strings{"sicut", "ita", "est"}}) {
      CHECK(mass(lm, ctx) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("k-gram counts cover every padded position") {
  const int order = 3;
  const auto lm = toy_model(order);
  std::vector<uint64_t> per_length(order + 1, 0);
  for (const auto& [ngram, c] : lm.counts()) per_length[ngram.size()] += c;
  // Sentences of 3, 3 and 4 tokens, each padded with order-1 start symbols.
  const uint64_t padded = (3 + 2) + (3 + 2) + (4 + 2);
  for (int k = 1; k <= order; ++k) CHECK(per_length[k] == padded - 3 * (k - 1));
  CHECK(lm.vocab().size() == 6);
  CHECK_FALSE(lm.in_vocab(ContextLM::kBos));
}

TEST_CASE("context shifts probability mass") {
  const auto lm = toy_model(3);
  CHECK(lm.prob(Strings{"sicut"}, "ita") > lm.prob(Strings{"ad"}, "ita"));
  CHECK(lm.prob(Strings{"ad"}, "illa") > lm.prob(Strings{"sicut"}, "illa"));
  CHECK(lm.prob(Strings{}, "nunquam") == lm.prob(Strings{}, ContextLM::kUnk));
  CHECK(lm.prob(Strings{}, "nunquam") > 0);
  CHECK(lm.log_prob(Strings{"sicut"}, "ita") == doctest::Approx(std::log(lm.prob(Strings{"sicut"}, "ita"))));
}

TEST_CASE("only the last order-1 tokens matter") {
  const auto lm = toy_model(2);
  CHECK(lm.prob(Strings{"ad", "sicut"}, "ita") == lm.prob(Strings{"sicut"}, "ita"));
}

TEST_CASE("an empty model is uniform over unknowns") {
  ContextLM lm(3);
  CHECK(lm.prob(Strings{}, "x") == 1.0);
}

TEST_CASE("reserved symbols and bad orders") {
  ContextLM lm(2);
  CHECK_THROWS_AS(lm.add_sentence({"<s>"}), DataError);
  CHECK_THROWS_AS(lm.add_sentence({"<unk>"}), DataError);
  CHECK_THROWS_AS(lm.add_count({"a", "b", "c"}, 1), DataError);
  CHECK_THROWS_AS(ContextLM(0), DataError);
}

TEST_CASE("models built from the same counts compare equal") {
  ContextLM a(2), b(2);
  a.add_sentence({"x", "y"});
  for (const auto& [ngram, c] : a.counts()) b.add_count(ngram, c);
  CHECK(a == b);
  CHECK(b.prob(Strings{"x"}, "y") == a.prob(Strings{"x"}, "y"));
}
