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
#include <string>
#include <string_view>
#include <vector>

#include "scripta/abbrev.hpp"
#include "scripta/corpus.hpp"
#include "scripta/language_model.hpp"

namespace scripta {

struct NormalizerConfig {
  int lm_order = 3;
  double lambda = 0.5;         // weight of the lexical score against the LM
  int beam_width = 4;
  double lex_smoothing = 0.1;  // add-k over a token's observed targets
  std::size_t max_candidates = 16;

  friend bool operator==(const NormalizerConfig&, const NormalizerConfig&) = default;
};

void validate(const NormalizerConfig& config);

struct NormalizerModel {
  static constexpr uint32_t kFormatVersion = 1;

  NormalizerConfig config;
  AbbreviationLexicon lexicon;
  std::vector<SignRule> rules;
  ContextLM lm;

  friend bool operator==(const NormalizerModel&, const NormalizerModel&) = default;
};

// Lexicon from the aligned pairs, LM over the expanded token sequences.
// Throws DataError on an empty corpus.
NormalizerModel train_normalizer(const AlignedCorpus& train, std::vector<SignRule> rules,
                                 const NormalizerConfig& config = {});

// Known token: its training expansions, most frequent first. Unknown token:
// rule-generated forms found in the LM vocabulary, then the other
// rule-generated forms, then the token itself. Never empty.
std::vector<std::string> candidates(const NormalizerModel& model, std::string_view token);

// log P_lex(exp | abbr) over `cands` (the output of candidates()).
double lexical_log_prob(const NormalizerModel& model, std::string_view abbr, std::string_view exp,
                        const std::vector<std::string>& cands);

// Sum over positions of lambda * log P_lex + (1 - lambda) * log P_lm.
double sequence_score(const NormalizerModel& model, const std::vector<std::string>& abbr,
                      const std::vector<std::string>& exp);

// Left-to-right beam search; returns one expansion per input token.
std::vector<std::string> normalize_sequence(const NormalizerModel& model,
                                            const std::vector<std::string>& tokens);
std::vector<std::string> normalize_sequence(const NormalizerModel& model,
                                            const std::vector<std::string>& tokens,
                                            int beam_width);

// Tokenises on whitespace, normalises, rejoins with single spaces.
std::string normalize_line(const NormalizerModel& model, std::string_view spaced);

struct Tally {
  std::size_t total = 0;
  std::size_t correct = 0;

  // NaN for an empty category.
  double accuracy() const;
};

// Token accuracy split the way tagger evaluations usually report it:
//   known      abbreviated token seen in training
//   unknown    not seen
//   ambiguous  seen with at least two distinct expansions
//   unknown_target  gold expansion never produced in training
struct NormEvalResult {
  Tally all, known, unknown, ambiguous, unknown_target;

  double acc_all() const { return all.accuracy(); }
  double acc_known() const { return known.accuracy(); }
  double acc_unknown() const { return unknown.accuracy(); }
  double acc_ambiguous() const { return ambiguous.accuracy(); }
  double acc_unknown_target() const { return unknown_target.accuracy(); }
};

// Scores already-produced expansions; `predicted` holds one token list per
// test line, aligned with its pairs.
NormEvalResult score_expansions(const std::vector<std::vector<std::string>>& predicted,
                                const AlignedCorpus& test, const AbbreviationLexicon& train_lexicon);

NormEvalResult evaluate_normalizer(const NormalizerModel& model, const AlignedCorpus& test,
                                   const AbbreviationLexicon& train_lexicon);

}  // namespace scripta
