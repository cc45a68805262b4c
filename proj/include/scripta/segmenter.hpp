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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scripta/abbrev.hpp"
#include "scripta/corpus.hpp"
#include "scripta/metrics.hpp"

namespace scripta {

// Word segmentation of space-free text. Every gap between two grapheme
// clusters is classified boundary / no boundary by a logistic scorer over
// hashed character n-grams drawn from a window around the gap.

struct SegmenterConfig {
  int window_radius = 5;
  std::vector<int> ngram_orders{1, 2, 3};
  int feature_space_bits = 20;
  double learning_rate = 0.01;
  int epochs = 20;
  double l2 = 1e-6;
  double threshold = 0.5;
  uint64_t seed = 0;

  friend bool operator==(const SegmenterConfig&, const SegmenterConfig&) = default;
};

void validate(const SegmenterConfig& config);

// Human-readable feature descriptors for the gap after grapheme `gap`:
// "<order>|<offset>|<graphemes>", where offsets -1..-r lie left of the gap
// and +1..+r right of it. Positions outside the string read as "<pad>".
std::vector<std::string> gap_feature_names(std::span<const std::string> graphemes,
                                           std::size_t gap, const SegmenterConfig& config);

// The same features hashed into [0, 2^feature_space_bits). Repeated
// indices (hash collisions) are kept and count once each.
std::vector<uint32_t> gap_features(std::span<const std::string> graphemes, std::size_t gap,
                                   const SegmenterConfig& config);

struct GapExample {
  std::vector<uint32_t> features;
  bool boundary = false;
};

// Gold boundaries of a spaced line. boundaries[k] says whether a word break
// follows graphemes[k]; it has one entry per gap.
struct GoldLine {
  std::vector<std::string> graphemes;
  std::vector<bool> boundaries;
};

GoldLine parse_spaced_line(std::string_view spaced);

struct SegmenterModel {
  static constexpr uint32_t kFormatVersion = 1;

  SegmenterConfig config;
  std::vector<double> weights;  // 2^feature_space_bits entries
  double bias = 0;
  std::string trained_on;  // fingerprint of the training lines

  double score(std::span<const uint32_t> features) const;
  double boundary_probability(std::span<const uint32_t> features) const;

  friend bool operator==(const SegmenterModel&, const SegmenterModel&) = default;
};

SegmenterModel make_untrained_model(const SegmenterConfig& config);

// Objective on a fixed batch: mean logistic loss plus (l2 / 2) * |w|^2.
double batch_loss(const SegmenterModel& model, std::span<const GapExample> batch);

struct SegmenterGradient {
  std::vector<double> weights;
  double bias = 0;
};

SegmenterGradient batch_gradient(const SegmenterModel& model, std::span<const GapExample> batch);

std::vector<GapExample> gap_examples(const GoldLine& line, const SegmenterConfig& config);

struct TrainingLog {
  struct Run {
    uint64_t seed = 0;
    std::vector<double> dev_f;  // one entry per epoch
    int best_epoch = 0;         // 1-based
  };
  std::vector<Run> runs;
  std::size_t best_run = 0;
};

// Seeded SGD over every gap of every training line. After each epoch the
// model is scored on `dev` (on `train` when dev is empty) and the best
// epoch snapshot wins; with restarts > 1, independent runs with derived
// seeds compete the same way. Throws DataError when the training set is
// empty or has no word breaks at all.
SegmenterModel train_segmenter(const DatasetVariant& train, const DatasetVariant& dev,
                               const SegmenterConfig& config, int restarts = 1,
                               TrainingLog* log = nullptr);

// Unigram word model for lexicon-constrained decoding.
struct WordUnigram {
  std::map<std::string, uint64_t, std::less<>> counts;
  uint64_t total = 0;

  void add(const std::string& word, uint64_t n = 1);
  bool contains(std::string_view word) const { return counts.find(word) != counts.end(); }
};

enum class LexiconSide { Abbreviated, Expanded };

WordUnigram unigram_from_lexicon(const AbbreviationLexicon& lexicon,
                                 LexiconSide side = LexiconSide::Abbreviated);
WordUnigram unigram_from_variant(const DatasetVariant& spaced);

enum class SegmentMode { Threshold, LexiconDp };

std::string_view to_string(SegmentMode mode) noexcept;
SegmentMode parse_segment_mode(std::string_view name);

struct DecodeOptions {
  SegmentMode mode = SegmentMode::Threshold;
  const WordUnigram* unigram = nullptr;  // required for LexiconDp
  double oov_penalty = -8.0;             // log-score per grapheme of an unknown word
};

// Boundary decisions for each gap of `graphemes`.
//  Threshold: break where P(boundary) > threshold.
//  LexiconDp: split maximising the sum of word log-probabilities (known
//    words: log count/total; unknown: oov_penalty per grapheme) plus the
//    scorer's log P(break) / log P(no break) for every gap.
std::vector<bool> predict_boundaries(const SegmenterModel& model,
                                     std::span<const std::string> graphemes,
                                     const DecodeOptions& options = {});

// Inserts single spaces at predicted breaks; never alters the characters.
// Throws DataError if the input contains whitespace.
std::string segment(const SegmenterModel& model, std::string_view unspaced,
                    const DecodeOptions& options = {});
std::string segment(const SegmenterModel& model, std::string_view unspaced,
                    const AbbreviationLexicon& lexicon,
                    LexiconSide side = LexiconSide::Abbreviated);

struct SegEvalResult {
  double f_score = 0;
  double precision = 0;
  double recall = 0;
  std::size_t n_gold = 0;
  std::size_t n_pred = 0;
  std::size_t n_correct = 0;
};

SegEvalResult score_boundaries(std::size_t n_correct, std::size_t n_pred, std::size_t n_gold);

// Per-gap comparison of predicted and gold word breaks.
SegEvalResult evaluate_segmenter(const SegmenterModel& model, const DatasetVariant& gold,
                                 const DecodeOptions& options = {});

}  // namespace scripta
