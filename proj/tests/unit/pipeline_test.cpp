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

#include <filesystem>
#include <fstream>

#include "scripta/error.hpp"
#include "scripta/model_io.hpp"
#include "scripta/pipeline.hpp"
#include "scripta/unicode.hpp"
#include "synthetic.hpp"

using namespace scripta;

namespace fs = std::filesystem;

namespace {

struct Fixture {
  AlignedCorpus corpus;
  PipelineModels models;

  Fixture() {
    testing::CorpusOptions o;
    o.lines = 120;
    o.seed = 21;
    o.unique_segmentation = true;
    corpus = testing::synthetic_corpus(o);
    SegmenterConfig sc;
    sc.epochs = 4;
    sc.feature_space_bits = 16;
    models.segmenter = std::make_shared<const SegmenterModel>(
        train_segmenter(build_variant(corpus, VariantKind::Abb1), DatasetVariant{}, sc));
    models.normalizer =
        std::make_shared<const NormalizerModel>(train_normalizer(corpus, default_sign_rules()));
    models.unigram = std::make_shared<const WordUnigram>(unigram_from_lexicon(models.normalizer->lexicon));
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

PipelineConfig full_config(std::string id) {
  PipelineConfig c;
  c.setup_id = std::move(id);
  c.input_variant = VariantKind::Abb2;
  c.use_segmenter = true;
  c.segmenter_model = "seg.model";
  c.segment_mode = SegmentMode::LexiconDp;
  c.use_normalizer = true;
  c.normalizer_model = "norm.model";
  return c;
}

std::vector<InputLine> inputs(VariantKind kind, std::size_t n = 20) {
  auto lines = build_variant(fixture().corpus, kind).lines;
  lines.resize(n);
  return number_lines(lines);
}

}  // namespace

TEST_CASE("noise is seeded and bounded") {
  NoiseConfig n;
  n.charset = graphemes("abc");
  CHECK(simulate_htr_noise("p̄domo", n) == "p̄domo");
  n.sub_rate = 1.0;
  n.seed = 7;
  const auto subbed = simulate_htr_noise("p̄domo", n);
  CHECK(subbed == simulate_htr_noise("p̄domo", n));
  const auto before = graphemes("p̄domo"), after = graphemes(subbed);
  REQUIRE(after.size() == before.size());
  for (std::size_t i = 0; i < after.size(); ++i) CHECK(after[i] != before[i]);
  n.sub_rate = 0;
  n.del_rate = 1.0;
  CHECK(simulate_htr_noise("p̄domo", n).empty());
  n.del_rate = 0;
  n.ins_rate = 1.0;
  CHECK(graphemes(simulate_htr_noise("abc", n)).size() == 6);
  n.sub_rate = 0.6;
  n.del_rate = 0.6;
  CHECK_THROWS_AS(validate(n), DataError);
}

TEST_CASE("noise stage seeds differ per line") {
  NoiseConfig n;
  n.sub_rate = 0.5;
  n.charset = graphemes("xyz");
  n.seed = 1;
  const std::string text = "abcdefghijklmnop";
  CHECK(noise_stage(text, n, 0) != noise_stage(text, n, 1));
  CHECK(noise_stage(text, n, 3) == noise_stage(text, n, 3));
}

TEST_CASE("config parsing, canonical form and hash") {
  const auto c = parse_pipeline_config(
      R"({"setup_id":"s1","input_variant":"abb2","use_segmenter":true,"segmenter_model":"a.bin",)"
      R"("segment_mode":"lexicon_dp","use_normalizer":true,"normalizer_model":"b.bin","noise_sub_rate":0.1})");
  REQUIRE(c.noise.has_value());
  CHECK(c.noise->sub_rate == 0.1);
  CHECK(c.noise->seed == 0);
  CHECK(parse_pipeline_config(to_json(c)) == c);
  CHECK(config_hash(parse_pipeline_config(to_json(c))) == config_hash(c));
  auto d = c;
  d.noise->seed = 1;
  CHECK(config_hash(d) != config_hash(c));

  CHECK_THROWS_AS(parse_pipeline_config(R"({"setup_id":"s","input_variant":"exp1","bogus":1})"),
                  DataError);
  CHECK_THROWS_AS(parse_pipeline_config(R"({"setup_id":"s","input_variant":"abb2","use_normalizer":true,)"
                                        R"("normalizer_model":"x"})"),
                  DataError);
  CHECK_THROWS_AS(parse_pipeline_matrix(R"([{"setup_id":"s","input_variant":"exp1"},)"
                                        R"({"setup_id":"s","input_variant":"exp2"}])"),
                  DataError);
  CHECK(parse_pipeline_matrix(R"({"setup_id":"s","input_variant":"exp1"})").size() == 1);
}

TEST_CASE("a config with no stages is the identity") {
  PipelineConfig c;
  c.setup_id = "id";
  c.input_variant = VariantKind::Abb2;
  c.noise = NoiseConfig{};
  const auto in = inputs(VariantKind::Abb2);
  const auto out = run_pipeline(c, {}, in);
  for (std::size_t i = 0; i < in.size(); ++i) CHECK(out[i] == in[i].text);
}

TEST_CASE("the pipeline is the composition of its stages") {
  const auto& f = fixture();
  auto c = full_config("compose");
  NoiseConfig n;
  n.sub_rate = 0.05;
  n.del_rate = 0.05;
  n.seed = 9;
  n.charset = graphemes("abcdeñ");
  c.noise = n;
  const auto in = inputs(VariantKind::Abb2);
  const auto out = run_pipeline(c, f.models, in);
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto noisy = noise_stage(in[i].text, n, i);
    CHECK(out[i] == normalize_stage(segment_stage(noisy, c, f.models), f.models));
  }
  CHECK(run_pipeline(c, f.models, in, 4) == out);
}

TEST_CASE("stage errors name the setup and line") {
  const auto& f = fixture();
  auto c = full_config("err");
  c.input_variant = VariantKind::Abb2;
  try {
    run_pipeline(c, f.models, {{"L7", "has space"}});
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("setup err, line L7") != std::string::npos);
  }
}

TEST_CASE("reports carry provenance that re-executes") {
  const auto& f = fixture();
  AlignedCorpus test;
  test.lines.assign(f.corpus.lines.begin(), f.corpus.lines.begin() + 15);
  auto noisy = full_config("b-noisy");
  NoiseConfig n;
  n.sub_rate = 0.1;
  n.seed = 3;
  noisy.noise = n;
  PipelineConfig plain;
  plain.setup_id = "a-plain";
  plain.input_variant = VariantKind::Exp1;
  const std::vector<Setup> matrix{{noisy, f.models}, {plain, {}}};
  const auto report = run_experiment(matrix, test, 2);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].setup_id == "a-plain");
  CHECK(report.rows[0].cer == 0);
  CHECK(report.rows[1].cer > 0);
  CHECK(report.rows[1].provenance.noise_seed == 3u);
  CHECK(report.rows[1].provenance.normalizer_fingerprint == fingerprint(*f.models.normalizer));

  // Rebuild the noisy setup from the row alone.
  const auto& row = report.rows[1];
  const auto config = parse_pipeline_config(row.provenance.config);
  CHECK(config_hash(config) == row.provenance.config_hash);
  const auto again = run_experiment({{config, f.models}}, test);
  CHECK(again.rows[0] == row);
}

TEST_CASE("segmentation scores are reported for clean segmenting setups") {
  const auto& f = fixture();
  AlignedCorpus test;
  test.lines.assign(f.corpus.lines.begin(), f.corpus.lines.begin() + 10);
  const auto report = run_experiment({{full_config("s"), f.models}}, test);
  CHECK(report.rows[0].stage_metrics.count("seg_f") == 1);
  CHECK(report.rows[0].stage_metrics.at("seg_f") == doctest::Approx(100));
}

TEST_CASE("report rendering") {
  EvalReport report;
  ReportRow row;
  row.setup_id = "s1";
  row.cer = 12.345;
  row.wer = 50;
  row.stage_metrics["seg_f"] = 97.5;
  row.provenance.config = R"({"setup_id":"s1"})";
  row.provenance.config_hash = "abc";
  row.provenance.noise_seed = 4;
  report.rows.push_back(row);

  const auto csv = render_report(report, ReportFormat::Csv);
  CHECK(csv.rfind("setup_id,cer,wer,stage_metrics,config_hash,", 0) == 0);
  CHECK(csv.find("12.35") != std::string::npos);
  const auto parsed = parse_report_csv(csv);
  REQUIRE(parsed.rows.size() == 1);
  CHECK(parsed.rows[0].provenance == row.provenance);
  CHECK(parsed.rows[0].stage_metrics.at("seg_f") == 97.5);
  CHECK(render_report(report, ReportFormat::Markdown).find("| s1 |") != std::string::npos);
  CHECK(render_report(report, ReportFormat::TextTable).find("12.35") != std::string::npos);
  CHECK(parse_report_format("md") == ReportFormat::Markdown);
  CHECK_THROWS_AS(parse_report_format("html"), DataError);
}

TEST_CASE("models load relative to the config directory") {
  const auto& f = fixture();
  const auto dir = fs::temp_directory_path() / "scripta-pipeline-test";
  fs::create_directories(dir / "models");
  save_segmenter(*f.models.segmenter, (dir / "models" / "seg.model").string());
  save_normalizer(*f.models.normalizer, (dir / "models" / "norm.model").string());
  auto c = full_config("rel");
  c.segmenter_model = "models/seg.model";
  c.normalizer_model = "models/norm.model";
  const auto models = load_models(c, dir.string());
  CHECK(*models.segmenter == *f.models.segmenter);
  REQUIRE(models.unigram);
  CHECK(models.unigram->total == f.models.unigram->total);
  fs::remove_all(dir);
}
