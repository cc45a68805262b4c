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
#include "scripta/random.hpp"
#include "scripta/segmenter.hpp"
#include "scripta/unicode.hpp"
#include "synthetic.hpp"

using namespace scripta;

using Strings = std::vector<std::string>;

namespace {

SegmenterModel small_trained_model() {
  testing::CorpusOptions o;
  o.lines = 300;
  o.seed = 12;
  const auto corpus = testing::synthetic_corpus(o);
  SegmenterConfig config;
  config.feature_space_bits = 16;
  config.epochs = 5;
  return train_segmenter(build_variant(corpus, VariantKind::Exp1), DatasetVariant{}, config);
}

}  // namespace

TEST_CASE("gap features enumerate window n-grams with padding") {
  SegmenterConfig config;
  config.window_radius = 2;
  config.ngram_orders = {1, 2};
  const Strings g{"p̄", "d", "ñ"};
  const auto names = gap_feature_names(g, 0, config);
  const Strings expected{
      "1|-2|<pad>", "1|-1|p̄", "1|1|d", "1|2|ñ",
      "2|-2|<pad>\x1fp̄", "2|-1|p̄\x1f" "d", "2|1|d\x1fñ",
  };
  CHECK(names == expected);
  CHECK(gap_feature_names(g, 1, config)[3] == "1|2|<pad>");
  CHECK(gap_features(g, 0, config).size() == 7);
  CHECK_THROWS_AS(gap_feature_names(g, 2, config), DataError);
  for (uint32_t f : gap_features(g, 1, config)) CHECK(f < (1u << config.feature_space_bits));
}

TEST_CASE("config validation") {
  SegmenterConfig c;
  CHECK_NOTHROW(validate(c));
  c.ngram_orders = {11};
  CHECK_THROWS_AS(validate(c), DataError);
  c = {};
  c.threshold = 1;
  CHECK_THROWS_AS(validate(c), DataError);
  c = {};
  c.feature_space_bits = 0;
  CHECK_THROWS_AS(validate(c), DataError);
}

TEST_CASE("spaced lines become grapheme boundaries") {
  const auto line = parse_spaced_line("p̄ domo ñ");
  CHECK(line.graphemes.size() == 6);
  CHECK(line.boundaries == std::vector<bool>{true, false, false, false, true});
  CHECK(parse_spaced_line("a").boundaries.empty());
  CHECK(parse_spaced_line("").graphemes.empty());
}

TEST_CASE("analytic gradient agrees with finite differences") {
  SegmenterConfig config;
  config.feature_space_bits = 8;
  config.window_radius = 2;
  config.l2 = 0.01;
  auto model = make_untrained_model(config);
  Rng rng(3);
  for (auto& w : model.weights) w = rng.uniform() - 0.5;
  const auto batch = gap_examples(parse_spaced_line("in terra pax hominibus"), config);
  const auto grad = batch_gradient(model, batch);
  const double h = 1e-5;
  for (std::size_t i = 0; i < model.weights.size(); i += 7) {
    const double saved = model.weights[i];
    model.weights[i] = saved + h;
    const double up = batch_loss(model, batch);
    model.weights[i] = saved - h;
    const double down = batch_loss(model, batch);
    model.weights[i] = saved;
    CHECK(grad.weights[i] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("segmentation never changes the characters") {
  const auto model = small_trained_model();
  testing::CorpusOptions o;
  o.lines = 30;
  o.seed = 99;
  o.ambiguous = true;
  for (const auto& line : build_variant(testing::synthetic_corpus(o), VariantKind::Abb2).lines) {
    CHECK(remove_spaces(segment(model, line)) == line);
  }
  CHECK(segment(model, "").empty());
  CHECK(segment(model, "a") == "a");
  CHECK_THROWS_AS(segment(model, "in terra"), DataError);
}

TEST_CASE("lower thresholds never remove boundaries") {
  auto model = small_trained_model();
  const auto g = graphemes("deusintrasicutetdominusest");
  std::vector<bool> previous;
  for (double t : {0.9, 0.7, 0.5, 0.3, 0.1}) {
    model.config.threshold = t;
    const auto b = predict_boundaries(model, g);
    for (std::size_t k = 0; k < previous.size(); ++k) {
      if (previous[k]) CHECK(b[k]);
    }
    previous = b;
  }
}

TEST_CASE("trained segmenter recovers held-out spacing") {
  const auto model = small_trained_model();
  testing::CorpusOptions o;
  o.lines = 50;
  o.seed = 77;
  const auto r = evaluate_segmenter(model, build_variant(testing::synthetic_corpus(o), VariantKind::Exp1));
  CHECK(r.f_score > 0.9);
  CHECK(r.n_gold > 0);
}

TEST_CASE("training is reproducible and logs each epoch") {
  testing::CorpusOptions o;
  o.lines = 60;
  const auto train = build_variant(testing::synthetic_corpus(o), VariantKind::Exp1);
  o.seed = 2;
  o.lines = 20;
  const auto dev = build_variant(testing::synthetic_corpus(o), VariantKind::Exp1);
  SegmenterConfig config;
  config.feature_space_bits = 14;
  config.epochs = 3;
  TrainingLog log;
  const auto a = train_segmenter(train, dev, config, 2, &log);
  const auto b = train_segmenter(train, dev, config, 2);
  CHECK(a == b);
  REQUIRE(log.runs.size() == 2);
  CHECK(log.runs[0].dev_f.size() == 3);
  CHECK(log.runs[0].seed != log.runs[1].seed);
  CHECK(log.best_run < 2);
  CHECK_THROWS_AS(train_segmenter(DatasetVariant{}, dev, config), DataError);
}

TEST_CASE("lexicon decoding follows the word list") {
  // An untrained model is indifferent to every gap, so the lexicon decides.
  const auto model = make_untrained_model(SegmenterConfig{});
  WordUnigram words;
  for (const char* w : {"in", "terra", "pax", "terrapax"}) words.add(w);
  words.add("pax", 5);
  DecodeOptions options;
  options.mode = SegmentMode::LexiconDp;
  options.unigram = &words;
  CHECK(segment(model, "interrapax", options) == "in terrapax");
  words.add("terra", 20);
  CHECK(segment(model, "interrapax", options) == "in terra pax");
  options.unigram = nullptr;
  CHECK_THROWS_AS(segment(model, "interrapax", options), DataError);
  CHECK(parse_segment_mode("lexicon_dp") == SegmentMode::LexiconDp);
  CHECK_THROWS_AS(parse_segment_mode("viterbi"), DataError);
}

TEST_CASE("boundary scores") {
  const auto r = score_boundaries(3, 4, 6);
  CHECK(r.precision == doctest::Approx(0.75));
  CHECK(r.recall == doctest::Approx(0.5));
  CHECK(r.f_score == doctest::Approx(0.6));
}
