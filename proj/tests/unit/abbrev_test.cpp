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

#include <sstream>

#include "scripta/abbrev.hpp"
#include "scripta/error.hpp"
#include "synthetic.hpp"

using namespace scripta;

using Strings = std::vector<std::string>;

TEST_CASE("default table parses and round-trips") {
  const auto& rules = default_sign_rules();
  REQUIRE(rules.size() > 20);
  std::stringstream s;
  write_sign_rules(rules, s);
  CHECK(parse_sign_rules(s.str()) == rules);
  CHECK(rules.front().pattern == "⁊");
  CHECK(rules.front().sign_class.category == SignCategory::Tachygraphic);
  CHECK_FALSE(rules.front().sign_class.ambiguous);
}

TEST_CASE("rule table errors") {
  CHECK_THROWS_AS(parse_sign_rules("ē\test\tanywhere\n"), LineError);
  CHECK_THROWS_AS(parse_sign_rules("ē\test\tsomewhere\tsuspension\n"), LineError);
  CHECK_THROWS_AS(parse_sign_rules("ē\t\tanywhere\tsuspension\n"), LineError);
  CHECK_THROWS_AS(parse_sign_rules("\test\tanywhere\tsuspension\n"), LineError);
  const auto rules = parse_sign_rules("# comment\n\nꝯ\tcum|con\tword_initial\ttachygraphic\n");
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].sign_class.ambiguous);
  CHECK(rules[0].position == Position::WordInitial);
  CHECK(parse_sign_category("composite_contraction") == SignCategory::CompositeContraction);
}

TEST_CASE("compositional candidates enumerate in slot order") {
  const auto& rules = default_sign_rules();
  CHECK(compositional_candidates("rōe", rules, 16) == Strings{"rome", "rone", "rōe"});
  CHECK(compositional_candidates("ꝯcordia", rules, 16) ==
        Strings{"cumcordia", "concordia", "comcordia", "ꝯcordia"});
  CHECK(compositional_candidates("curam̃.", rules, 16) ==
        Strings{"curamn.", "curamm.", "curam̃."});
  CHECK(compositional_candidates("p̄", rules, 16) == Strings{"pre", "prae", "pro", "p̄"});
}

TEST_CASE("positions constrain matches") {
  const auto& rules = default_sign_rules();
  CHECK(compositional_candidates("populꝰ", rules, 16) == Strings{"populus", "populꝰ"});
  CHECK(compositional_candidates("ꝰa", rules, 16) == Strings{"ꝰa"});
}

TEST_CASE("candidate count is capped and the token is always last") {
  const auto& rules = default_sign_rules();
  const auto all = compositional_candidates("ēēē", rules, 100);
  CHECK(all.size() == 28);
  const auto capped = compositional_candidates("ēēē", rules, 5);
  CHECK(capped.size() == 5);
  CHECK(capped.back() == "ēēē");
  CHECK(compositional_candidates("ēēē", rules, 1) == Strings{"ēēē"});
  CHECK(compositional_candidates("domo", rules, 16) == Strings{"domo"});
  CHECK(compositional_candidates("", rules, 16) == Strings{""});
}

TEST_CASE("lexicon counts and categories") {
  AlignedCorpus corpus;
  corpus.lines.push_back(make_line("1", {{"ĩ", "ita"}, {"dñi", "domini"}, {"ĩ", "illa"}}));
  corpus.lines.push_back(make_line("2", {{"ĩ", "ita"}, {"p̄", "pro"}}));
  const auto lex = learn_lexicon(corpus);
  CHECK(lex.total() == 5);
  CHECK(lex.known("ĩ"));
  CHECK(lex.ambiguous("ĩ"));
  CHECK_FALSE(lex.ambiguous("dñi"));
  CHECK_FALSE(lex.known("ē"));
  CHECK(lex.has_target("illa"));
  CHECK_FALSE(lex.has_target("est"));
  CHECK(lex.count("ĩ") == 3);
  CHECK(expansions_of(lex, "ĩ") ==
        std::vector<std::pair<std::string, uint64_t>>{{"ita", 2}, {"illa", 1}});
  CHECK(expansions_of(lex, "ē").empty());
  CHECK(abbreviations_of(lex, "pro") == std::set<std::string>{"p̄"});
}
