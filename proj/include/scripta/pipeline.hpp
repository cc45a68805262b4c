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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scripta/corpus.hpp"
#include "scripta/normalizer.hpp"
#include "scripta/segmenter.hpp"

namespace scripta {

// Stand-in for a recognition engine: independent per-grapheme corruption.
// Each grapheme is substituted (by a different charset member when one
// exists) with probability sub_rate, else deleted with probability
// del_rate; after each position a charset member is inserted with
// probability ins_rate.
struct NoiseConfig {
  double sub_rate = 0;
  double del_rate = 0;
  double ins_rate = 0;
  std::vector<std::string> charset;  // graphemes
  uint64_t seed = 0;

  bool active() const noexcept { return sub_rate > 0 || del_rate > 0 || ins_rate > 0; }
  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

void validate(const NoiseConfig& config);

std::string simulate_htr_noise(std::string_view line, const NoiseConfig& config);

// Distinct non-space graphemes of `lines`, in byte order.
std::vector<std::string> grapheme_charset(const std::vector<std::string>& lines);

// One row of a setup matrix. Stored as a flat JSON object:
//
//   setup_id          string (required)
//   input_variant     "exp1" | "exp2" | "abb1" | "abb2" (required)
//   use_segmenter     bool, default false
//   segmenter_model   path, required with use_segmenter
//   segment_mode      "threshold" | "lexicon_dp", default "threshold"
//   segment_lexicon   path to ground truth for lexicon_dp word counts;
//                     defaults to the normaliser's lexicon
//   oov_penalty       number, default -8
//   use_normalizer    bool, default false
//   normalizer_model  path, required with use_normalizer
//   noise_sub_rate, noise_del_rate, noise_ins_rate   numbers, default 0
//   noise_charset     string of graphemes; default: those of the input
//   noise_seed        integer, default 0
//   output            path for the normalised lines (CLI only)
//
// Unknown keys are rejected.
struct PipelineConfig {
  std::string setup_id;
  VariantKind input_variant = VariantKind::Exp1;
  std::optional<NoiseConfig> noise;
  bool use_segmenter = false;
  std::string segmenter_model;
  SegmentMode segment_mode = SegmentMode::Threshold;
  std::string segment_lexicon;
  double oov_penalty = -8.0;
  bool use_normalizer = false;
  std::string normalizer_model;
  std::string output;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Structural checks; a normaliser over space-free abbreviated input needs
// a segmenter in front of it.
void validate(const PipelineConfig& config);

PipelineConfig parse_pipeline_config(std::string_view json_text);
std::vector<PipelineConfig> parse_pipeline_matrix(std::string_view json_text);  // array or object
PipelineConfig load_pipeline_config(const std::string& path);
std::vector<PipelineConfig> load_pipeline_matrix(const std::string& path);
// Canonical JSON (fixed key order, every key present).
std::string to_json(const PipelineConfig& config);
std::string config_hash(const PipelineConfig& config);

struct PipelineModels {
  std::shared_ptr<const SegmenterModel> segmenter;
  std::shared_ptr<const NormalizerModel> normalizer;
  std::shared_ptr<const WordUnigram> unigram;  // lexicon_dp only
};

// Loads what the config references; relative paths resolve against
// `base_dir` when given.
PipelineModels load_models(const PipelineConfig& config, const std::string& base_dir = {});

struct InputLine {
  std::string id;
  std::string text;
};

std::vector<InputLine> number_lines(const std::vector<std::string>& lines);

// Individual stages, so that the composition can be checked directly.
std::string noise_stage(std::string_view text, const NoiseConfig& config, std::size_t line_index);
std::string segment_stage(std::string_view text, const PipelineConfig& config,
                          const PipelineModels& models);
std::string normalize_stage(std::string_view text, const PipelineModels& models);

// noise -> segmentation -> normalisation, each when configured. Contract
// violations raise DataError naming the offending line id. Output order
// matches input order for any `jobs`.
std::vector<std::string> run_pipeline(const PipelineConfig& config, const PipelineModels& models,
                                      const std::vector<InputLine>& lines, unsigned jobs = 1);

struct Provenance {
  std::string config;  // canonical JSON of the setup
  std::string config_hash;
  std::string segmenter_fingerprint;
  std::string normalizer_fingerprint;
  std::optional<uint64_t> noise_seed;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ReportRow {
  std::string setup_id;
  double cer = 0;  // percent
  double wer = 0;  // percent
  std::map<std::string, double> stage_metrics;  // percent
  Provenance provenance;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct EvalReport {
  std::vector<ReportRow> rows;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct Setup {
  PipelineConfig config;
  PipelineModels models;
};

// Scores one setup's output against gold EXP1 lines. `inputs` are the
// setup's input lines; `gold_spaced` is the spaced gold of the same side
// (ABB1 or EXP1) used for segmentation scores. Throws DataError when the
// line counts disagree.
ReportRow evaluate_setup(const Setup& setup, const std::vector<InputLine>& inputs,
                         const std::vector<std::string>& gold_exp1,
                         const std::vector<std::string>& gold_spaced, unsigned jobs = 1);

// Runs every setup on the corpus (inputs built from each setup's variant,
// gold = EXP1) and returns rows sorted by setup_id.
EvalReport run_experiment(const std::vector<Setup>& matrix, const AlignedCorpus& test,
                          unsigned jobs = 1);

enum class ReportFormat { TextTable, Csv, Markdown };

ReportFormat parse_report_format(std::string_view name);
std::string render_report(const EvalReport& report, ReportFormat format);
EvalReport parse_report_csv(std::string_view csv);

}  // namespace scripta
