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

#include <set>
#include <sstream>

#include "scripta/corpus.hpp"
#include "scripta/error.hpp"
#include "synthetic.hpp"

using namespace scripta;

namespace {

const char* kTwoLines =
    R"({"line_id":"1","abbr":"p̄ domo","exp":"pro domo","pairs":[["p̄","pro"],["domo","domo"]]})"
    "\n"
    R"({"line_id":"2","abbr":"dñi ē","exp":"domini est","pairs":[["dñi","domini"],["ē","est"]]})"
    "\n";

}  // namespace

TEST_CASE("ground truth round-trips") {
  const auto corpus = parse_ground_truth(std::string_view(kTwoLines));
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.lines[1].pairs[0] == TokenPair{"dñi", "domini"});
  CHECK(serialize_corpus(corpus) == kTwoLines);
  CHECK(parse_ground_truth(serialize_corpus(corpus)) == corpus);
}

TEST_CASE("metadata record is preserved") {
  AlignedCorpus corpus{{testing::table_line()}, {{"source", "fixture"}}};
  const auto text = serialize_corpus(corpus);
  CHECK(text.rfind(R"({"metadata":{"source":"fixture"}})", 0) == 0);
  CHECK(parse_ground_truth(text) == corpus);
}

TEST_CASE("malformed ground truth is rejected with the line number") {
  auto line_of = [](std::string_view text) -> std::size_t {
    try {
      parse_ground_truth(text);
    } catch (const LineError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string good(R"({"line_id":"1","abbr":"a","exp":"b","pairs":[["a","b"]]})");
  CHECK(line_of(good + "\n" + R"({"line_id":"2","abbr":"a b","exp":"c","pairs":[["a","c"]]})") == 2);
  CHECK(line_of(good + "\n" + good) == 2);  // duplicate id
  CHECK(line_of("{not json") == 1);
  CHECK(line_of(R"({"line_id":"1","abbr":"a","exp":"b","pairs":[["a","b"]],"x":1})") == 1);
  CHECK(line_of(R"({"line_id":"1","abbr":"a","exp":"b","pairs":[]})") == 1);
  CHECK(line_of(R"({"line_id":"1","abbr":"a","exp":"b c","pairs":[["a","b c"]]})") == 1);
  CHECK_THROWS_AS(parse_ground_truth("\xef\xbb\xbf" + good), DataError);
  CHECK_THROWS_AS(parse_ground_truth(good + "\r\n"), DataError);
}

TEST_CASE("make_line joins pairs") {
  const auto line = testing::table_line();
  CHECK(line.abbr_text == "p̄ domo dñi nos oppoñe ñ curam̃. ti");
  CHECK(line.exp_text == "pro domo domini nos opponere non curamus. ti");
  CHECK_THROWS_AS(make_line("x", {{"a b", "c"}}), DataError);
}

TEST_CASE("variants of the worked example") {
  const AlignedCorpus corpus{{testing::table_line()}, {}};
  CHECK(build_variant(corpus, VariantKind::Exp1).lines[0] ==
        "pro domo domini nos opponere non curamus. ti");
  CHECK(build_variant(corpus, VariantKind::Exp2).lines[0] == "prodomodomininosopponerenoncuramus.ti");
  CHECK(build_variant(corpus, VariantKind::Abb1).lines[0] == "p̄ domo dñi nos oppoñe ñ curam̃. ti");
  CHECK(build_variant(corpus, VariantKind::Abb2).lines[0] == "p̄domodñinosoppoñeñcuram̃.ti");
  CHECK(parse_variant_kind("ABB2") == VariantKind::Abb2);
  CHECK_THROWS_AS(parse_variant_kind("abb3"), DataError);
  CHECK(is_spaced(VariantKind::Abb1));
  CHECK_FALSE(is_spaced(VariantKind::Exp2));
  CHECK(is_abbreviated(VariantKind::Abb2));
}

TEST_CASE("variant files round-trip") {
  const AlignedCorpus corpus{{testing::table_line()}, {}};
  const auto variant = build_variant(corpus, VariantKind::Abb2);
  std::stringstream s;
  write_variant(variant, s);
  CHECK(read_variant(s, VariantKind::Abb2).lines == variant.lines);
  std::stringstream spaced("a b\n");
  CHECK_THROWS_AS(read_variant(spaced, VariantKind::Exp2), DataError);
}

TEST_CASE("hyphenated words are joined onto the first line") {
  AlignedCorpus corpus;
  corpus.lines.push_back(make_line("1", {{"in", "in"}, {"ter-", "ter-"}}));
  corpus.lines.push_back(make_line("2", {{"rã", "ram"}, {"ē", "est"}}));
  corpus.lines.push_back(make_line("3", {{"⁊", "et"}}));
  const auto joined = normalize_hyphenation(corpus);
  REQUIRE(joined.size() == 3);
  CHECK(joined.lines[0].abbr_text == "in terrã");
  CHECK(joined.lines[0].exp_text == "in terram");
  CHECK(joined.lines[0].hyphen_joined);
  CHECK(joined.lines[1].abbr_text == "ē");
  CHECK_FALSE(joined.lines[2].hyphen_joined);

  AlignedCorpus dangling;
  dangling.lines.push_back(make_line("1", {{"ter-", "ter-"}}));
  CHECK_THROWS_AS(normalize_hyphenation(dangling), DataError);
}

TEST_CASE("class inventories") {
  const AlignedCorpus corpus{{testing::table_line()}, {}};
  const auto abb1 = class_inventory(build_variant(corpus, VariantKind::Abb1));
  const auto abb2 = class_inventory(build_variant(corpus, VariantKind::Abb2));
  CHECK(abb1.size() == abb2.size() + 1);
  CHECK(abb1.classes.count(" ") == 1);
  CHECK(abb1.classes.at("p̄") == 1);
  CHECK(abb1.combining_count == 2);  // p̄ and m̃
  const auto cps = class_inventory(build_variant(corpus, VariantKind::Abb1), ClassMode::Codepoint);
  CHECK(cps.classes.count("̄") == 1);
  CHECK(cps.combining_count == 2);
  CHECK(abb2.total() == 26);
}

TEST_CASE("abbreviation density and token count") {
  const AlignedCorpus corpus{{testing::table_line()}, {}};
  CHECK(token_count(corpus) == 8);
  CHECK(abbreviation_density(corpus) == doctest::Approx(5.0 / 8));
  CHECK_THROWS_AS(abbreviation_density(AlignedCorpus{}), DataError);
}

TEST_CASE("splits are sized, disjoint and seeded") {
  testing::CorpusOptions o;
  o.lines = 50;
  const auto corpus = testing::synthetic_corpus(o);
  const auto a = split_corpus(corpus, {30, 10, 10}, 5, true);
  const auto b = split_corpus(corpus, {30, 10, 10}, 5, true);
  const auto c = split_corpus(corpus, {30, 10, 10}, 6, true);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  CHECK_FALSE(a.train == c.train);
  std::set<std::string> ids;
  for (const auto* part : {&a.train, &a.dev, &a.test}) {
    for (const auto& l : part->lines) CHECK(ids.insert(l.line_id).second);
  }
  CHECK(ids.size() == 50);

  const auto ordered = split_corpus(corpus, {30, 10, 10}, 0, false);
  CHECK(ordered.train.lines.front() == corpus.lines[0]);
  CHECK(ordered.test.lines.back() == corpus.lines[49]);
  CHECK_THROWS_AS(split_corpus(corpus, {30, 10, 11}, 0, false), DataError);
}
