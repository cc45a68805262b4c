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

#include "scripta/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scripta/error.hpp"
#include "scripta/hash.hpp"
#include "scripta/metrics.hpp"
#include "scripta/model_io.hpp"
#include "scripta/parallel.hpp"
#include "scripta/random.hpp"
#include "scripta/unicode.hpp"

namespace scripta {

using nlohmann::json;
using nlohmann::ordered_json;

void validate(const NoiseConfig& config) {
  for (double r : {config.sub_rate, config.del_rate, config.ins_rate}) {
    if (!(r >= 0 && r <= 1)) throw DataError("noise rates must lie in [0, 1]");
  }
  if (config.sub_rate + config.del_rate > 1) {
    throw DataError("noise sub_rate + del_rate must not exceed 1");
  }
  for (const auto& g : config.charset) {
    if (graphemes(g).size() != 1) throw DataError("noise charset entries must be single graphemes");
  }
}

std::string simulate_htr_noise(std::string_view line, const NoiseConfig& config) {
  validate(config);
  if (!config.active()) return std::string(line);
  const auto& charset = config.charset;
  Rng rng(config.seed);
  std::string out;
  out.reserve(line.size());
  for (const auto& g : graphemes(line)) {
    const double u = rng.uniform();
    const double v = rng.uniform();
    if (u < config.sub_rate) {
      const auto self = std::find(charset.begin(), charset.end(), g);
      if (self == charset.end()) {
        out += charset.empty() ? g : charset[rng.below(charset.size())];
      } else if (charset.size() == 1) {
        out += g;
      } else {
        // Draw among the other members.
        auto k = rng.below(charset.size() - 1);
        if (k >= static_cast<uint64_t>(self - charset.begin())) ++k;
        out += charset[k];
      }
    } else if (u >= config.sub_rate + config.del_rate) {
      out += g;
    }
    if (v < config.ins_rate && !charset.empty()) out += charset[rng.below(charset.size())];
  }
  return out;
}

std::vector<std::string> grapheme_charset(const std::vector<std::string>& lines) {
  std::set<std::string> seen;
  for (const auto& line : lines) {
    for (auto& g : graphemes(line)) {
      if (!contains_space(g)) seen.insert(std::move(g));
    }
  }
  return {seen.begin(), seen.end()};
}

void validate(const PipelineConfig& config) {
  if (config.setup_id.empty()) throw DataError("pipeline setup_id must not be empty");
  if (config.noise) validate(*config.noise);
  if (config.use_segmenter && config.segmenter_model.empty()) {
    throw DataError("setup " + config.setup_id + ": use_segmenter needs segmenter_model");
  }
  if (config.use_normalizer && config.normalizer_model.empty()) {
    throw DataError("setup " + config.setup_id + ": use_normalizer needs normalizer_model");
  }
  if (config.use_normalizer && config.input_variant == VariantKind::Abb2 &&
      !config.use_segmenter) {
    throw DataError("setup " + config.setup_id +
                    ": normalising unspaced abbreviated input requires the segmenter");
  }
  if (config.use_segmenter && config.segment_mode == SegmentMode::LexiconDp &&
      config.segment_lexicon.empty() && !config.use_normalizer) {
    throw DataError("setup " + config.setup_id +
                    ": lexicon_dp needs segment_lexicon or a normaliser lexicon");
  }
}

namespace {

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw DataError("pipeline config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "setup_id",       "input_variant",    "use_segmenter",  "segmenter_model",
      "segment_mode",   "segment_lexicon",  "oov_penalty",    "use_normalizer",
      "normalizer_model", "noise_sub_rate", "noise_del_rate", "noise_ins_rate",
      "noise_charset",  "noise_seed",       "output"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw DataError("unknown pipeline config key \"" + key + "\"");
  }
  try {
    PipelineConfig c;
    c.setup_id = j.at("setup_id").get<std::string>();
    c.input_variant = parse_variant_kind(j.at("input_variant").get<std::string>());
    c.use_segmenter = j.value("use_segmenter", false);
    c.segmenter_model = j.value("segmenter_model", std::string());
    c.segment_mode = parse_segment_mode(j.value("segment_mode", std::string("threshold")));
    c.segment_lexicon = j.value("segment_lexicon", std::string());
    c.oov_penalty = j.value("oov_penalty", -8.0);
    c.use_normalizer = j.value("use_normalizer", false);
    c.normalizer_model = j.value("normalizer_model", std::string());
    c.output = j.value("output", std::string());
    const bool any_noise = j.contains("noise_sub_rate") || j.contains("noise_del_rate") ||
                           j.contains("noise_ins_rate") || j.contains("noise_charset") ||
                           j.contains("noise_seed");
    if (any_noise) {
      NoiseConfig n;
      n.sub_rate = j.value("noise_sub_rate", 0.0);
      n.del_rate = j.value("noise_del_rate", 0.0);
      n.ins_rate = j.value("noise_ins_rate", 0.0);
      n.charset = graphemes(j.value("noise_charset", std::string()));
      n.seed = j.value("noise_seed", uint64_t{0});
      c.noise = std::move(n);
    }
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed pipeline config: ") + e.what());
  }
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

PipelineConfig parse_pipeline_config(std::string_view json_text) {
  return config_from_json(parse_json(json_text));
}

std::vector<PipelineConfig> parse_pipeline_matrix(std::string_view json_text) {
  const json j = parse_json(json_text);
  std::vector<PipelineConfig> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(config_from_json(item));
  } else {
    out.push_back(config_from_json(j));
  }
  std::set<std::string> ids;
  for (const auto& c : out) {
    if (!ids.insert(c.setup_id).second) throw DataError("duplicate setup_id \"" + c.setup_id + "\"");
  }
  return out;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  try {
    return parse_pipeline_config(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<PipelineConfig> load_pipeline_matrix(const std::string& path) {
  try {
    return parse_pipeline_matrix(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string to_json(const PipelineConfig& c) {
  ordered_json j;
  j["setup_id"] = c.setup_id;
  j["input_variant"] = to_string(c.input_variant);
  j["use_segmenter"] = c.use_segmenter;
  j["segmenter_model"] = c.segmenter_model;
  j["segment_mode"] = to_string(c.segment_mode);
  j["segment_lexicon"] = c.segment_lexicon;
  j["oov_penalty"] = c.oov_penalty;
  j["use_normalizer"] = c.use_normalizer;
  j["normalizer_model"] = c.normalizer_model;
  if (c.noise) {
    j["noise_sub_rate"] = c.noise->sub_rate;
    j["noise_del_rate"] = c.noise->del_rate;
    j["noise_ins_rate"] = c.noise->ins_rate;
    j["noise_charset"] = join(c.noise->charset, "");
    j["noise_seed"] = c.noise->seed;
  }
  j["output"] = c.output;
  return j.dump();
}

std::string config_hash(const PipelineConfig& config) {
  return hex64(fnv1a64(to_json(config)));
}

PipelineModels load_models(const PipelineConfig& config, const std::string& base_dir) {
  auto resolve = [&](const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return p.string();
  };
  PipelineModels models;
  if (config.use_segmenter) {
    models.segmenter =
        std::make_shared<const SegmenterModel>(load_segmenter(resolve(config.segmenter_model)));
  }
  if (config.use_normalizer) {
    models.normalizer =
        std::make_shared<const NormalizerModel>(load_normalizer(resolve(config.normalizer_model)));
  }
  if (config.use_segmenter && config.segment_mode == SegmentMode::LexiconDp) {
    const auto side =
        is_abbreviated(config.input_variant) ? LexiconSide::Abbreviated : LexiconSide::Expanded;
    if (!config.segment_lexicon.empty()) {
      const auto corpus = load_corpus(resolve(config.segment_lexicon));
      models.unigram = std::make_shared<const WordUnigram>(
          unigram_from_lexicon(learn_lexicon(corpus), side));
    } else if (models.normalizer) {
      models.unigram = std::make_shared<const WordUnigram>(
          unigram_from_lexicon(models.normalizer->lexicon, side));
    }
  }
  return models;
}

std::vector<InputLine> number_lines(const std::vector<std::string>& lines) {
  std::vector<InputLine> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) out.push_back({std::to_string(i + 1), lines[i]});
  return out;
}

std::string noise_stage(std::string_view text, const NoiseConfig& config, std::size_t line_index) {
  NoiseConfig per_line = config;
  per_line.seed = mix_seed(config.seed, line_index);
  return simulate_htr_noise(text, per_line);
}

std::string segment_stage(std::string_view text, const PipelineConfig& config,
                          const PipelineModels& models) {
  if (!config.use_segmenter) return std::string(text);
  if (!models.segmenter) throw DataError("segmenter model not loaded");
  DecodeOptions options;
  options.mode = config.segment_mode;
  options.oov_penalty = config.oov_penalty;
  if (options.mode == SegmentMode::LexiconDp) {
    if (!models.unigram) throw DataError("lexicon_dp segmentation without a word lexicon");
    options.unigram = models.unigram.get();
  }
  return segment(*models.segmenter, text, options);
}

std::string normalize_stage(std::string_view text, const PipelineModels& models) {
  if (!models.normalizer) throw DataError("normaliser model not loaded");
  return normalize_line(*models.normalizer, text);
}

std::vector<std::string> run_pipeline(const PipelineConfig& config, const PipelineModels& models,
                                      const std::vector<InputLine>& lines, unsigned jobs) {
  validate(config);
  std::optional<NoiseConfig> noise = config.noise;
  if (noise && noise->active() && noise->charset.empty()) {
    std::vector<std::string> texts;
    for (const auto& l : lines) texts.push_back(l.text);
    noise->charset = grapheme_charset(texts);
  }

  std::vector<std::string> out(lines.size());
  parallel_for(lines.size(), jobs, [&](std::size_t i) {
    try {
      std::string text = lines[i].text;
      if (noise) text = noise_stage(text, *noise, i);
      text = segment_stage(text, config, models);
      if (config.use_normalizer) text = normalize_stage(text, models);
      out[i] = std::move(text);
    } catch (const DataError& e) {
      throw DataError("setup " + config.setup_id + ", line " + lines[i].id + ": " + e.what());
    }
  });
  return out;
}

ReportRow evaluate_setup(const Setup& setup, const std::vector<InputLine>& inputs,
                         const std::vector<std::string>& gold_exp1,
                         const std::vector<std::string>& gold_spaced, unsigned jobs) {
  const auto& config = setup.config;
  if (inputs.size() != gold_exp1.size()) {
    throw DataError("setup " + config.setup_id + ": " + std::to_string(inputs.size()) +
                    " input lines but " + std::to_string(gold_exp1.size()) + " gold lines");
  }
  const auto outputs = run_pipeline(config, setup.models, inputs, jobs);

  ReportRow row;
  row.setup_id = config.setup_id;
  row.cer = corpus_cer(outputs, gold_exp1);
  row.wer = corpus_wer(outputs, gold_exp1);

  // Boundary scores only make sense when the characters reach the
  // segmenter untouched.
  const bool clean = !config.noise || !config.noise->active();
  if (config.use_segmenter && clean && gold_spaced.size() == inputs.size()) {
    std::size_t correct = 0, pred = 0, gold = 0;
    bool comparable = true;
    for (std::size_t i = 0; i < inputs.size() && comparable; ++i) {
      const auto predicted = parse_spaced_line(segment_stage(inputs[i].text, config, setup.models));
      const auto reference = parse_spaced_line(gold_spaced[i]);
      if (predicted.graphemes != reference.graphemes) {
        comparable = false;
        break;
      }
      for (std::size_t k = 0; k < predicted.boundaries.size(); ++k) {
        pred += predicted.boundaries[k];
        gold += reference.boundaries[k];
        correct += predicted.boundaries[k] && reference.boundaries[k];
      }
    }
    if (comparable) {
      const PRF r = prf(correct, pred, gold);
      row.stage_metrics["seg_precision"] = 100 * r.precision;
      row.stage_metrics["seg_recall"] = 100 * r.recall;
      row.stage_metrics["seg_f"] = 100 * r.f;
    }
  }

  row.provenance.config = to_json(config);
  row.provenance.config_hash = config_hash(config);
  if (setup.models.segmenter) row.provenance.segmenter_fingerprint = fingerprint(*setup.models.segmenter);
  if (setup.models.normalizer) {
    row.provenance.normalizer_fingerprint = fingerprint(*setup.models.normalizer);
  }
  if (config.noise) row.provenance.noise_seed = config.noise->seed;
  return row;
}

EvalReport run_experiment(const std::vector<Setup>& matrix, const AlignedCorpus& test,
                          unsigned jobs) {
  std::set<std::string> ids;
  for (const auto& s : matrix) {
    validate(s.config);
    if (!ids.insert(s.config.setup_id).second) {
      throw DataError("duplicate setup_id \"" + s.config.setup_id + "\"");
    }
  }
  const auto gold_exp1 = build_variant(test, VariantKind::Exp1).lines;
  const auto gold_abb1 = build_variant(test, VariantKind::Abb1).lines;

  EvalReport report;
  report.rows.resize(matrix.size());
  parallel_for(matrix.size(), jobs, [&](std::size_t s) {
    const auto& config = matrix[s].config;
    const auto texts = build_variant(test, config.input_variant).lines;
    std::vector<InputLine> inputs;
    inputs.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) inputs.push_back({test.lines[i].line_id, texts[i]});
    const auto& spaced = is_abbreviated(config.input_variant) ? gold_abb1 : gold_exp1;
    report.rows[s] = evaluate_setup(matrix[s], inputs, gold_exp1, spaced);
  });
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.setup_id < b.setup_id; });
  return report;
}

}  // namespace scripta
