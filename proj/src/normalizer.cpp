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

#include "scripta/normalizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "scripta/error.hpp"
#include "scripta/unicode.hpp"

namespace scripta {

void validate(const NormalizerConfig& config) {
  if (config.lm_order < 1) throw DataError("lm_order must be >= 1");
  if (!(config.lambda >= 0 && config.lambda <= 1)) throw DataError("lambda must lie in [0, 1]");
  if (config.beam_width < 1) throw DataError("beam_width must be >= 1");
  if (!(config.lex_smoothing > 0)) throw DataError("lex_smoothing must be positive");
  if (config.max_candidates < 1) throw DataError("max_candidates must be >= 1");
}

NormalizerModel train_normalizer(const AlignedCorpus& train, std::vector<SignRule> rules,
                                 const NormalizerConfig& config) {
  validate(config);
  if (train.empty()) throw DataError("normaliser training corpus is empty");
  for (const auto& rule : rules) validate_rule(rule);

  NormalizerModel model{config, learn_lexicon(train), std::move(rules), ContextLM(config.lm_order)};
  for (const auto& line : train.lines) {
    std::vector<std::string> exp;
    exp.reserve(line.pairs.size());
    for (const auto& pair : line.pairs) exp.push_back(pair.exp);
    model.lm.add_sentence(exp);
  }
  return model;
}

std::vector<std::string> candidates(const NormalizerModel& model, std::string_view token) {
  std::vector<std::string> out;
  if (model.lexicon.known(token)) {
    for (auto& [exp, count] : expansions_of(model.lexicon, token)) out.push_back(std::move(exp));
    return out;
  }
  const auto generated =
      compositional_candidates(token, model.rules, model.config.max_candidates);
  std::unordered_set<std::string> seen;
  for (const auto& c : generated) {
    if (model.lm.in_vocab(c) && seen.insert(c).second) out.push_back(c);
  }
  const std::string original(token);
  for (const auto& c : generated) {
    if (c != original && seen.insert(c).second) out.push_back(c);
  }
  if (seen.insert(original).second) out.push_back(original);
  return out;
}

double lexical_log_prob(const NormalizerModel& model, std::string_view abbr, std::string_view exp,
                        const std::vector<std::string>& cands) {
  const auto* targets = model.lexicon.targets(abbr);
  if (!targets) return -std::log(static_cast<double>(cands.size()));
  const double alpha = model.config.lex_smoothing;
  double total = 0;
  for (const auto& [e, n] : *targets) total += static_cast<double>(n);
  const auto it = targets->find(std::string(exp));
  const double c = it == targets->end() ? 0.0 : static_cast<double>(it->second);
  return std::log((c + alpha) / (total + alpha * static_cast<double>(targets->size())));
}

namespace {

struct Hypothesis {
  std::vector<std::string> tokens;
  double score = 0;
};

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.tokens < b.tokens;
}

}  // namespace

double sequence_score(const NormalizerModel& model, const std::vector<std::string>& abbr,
                      const std::vector<std::string>& exp) {
  if (abbr.size() != exp.size()) throw DataError("sequence_score: length mismatch");
  const double lambda = model.config.lambda;
  double score = 0;
  for (std::size_t i = 0; i < abbr.size(); ++i) {
    const auto cands = candidates(model, abbr[i]);
    const std::span<const std::string> context(exp.data(), i);
    score += lambda * lexical_log_prob(model, abbr[i], exp[i], cands) +
             (1 - lambda) * model.lm.log_prob(context, exp[i]);
  }
  return score;
}

std::vector<std::string> normalize_sequence(const NormalizerModel& model,
                                            const std::vector<std::string>& tokens,
                                            int beam_width) {
  if (beam_width < 1) throw DataError("beam_width must be >= 1");
  for (const auto& t : tokens) {
    if (t.empty()) throw DataError("empty token in normaliser input");
  }
  const double lambda = model.config.lambda;
  std::vector<Hypothesis> beam{Hypothesis{}};
  for (const auto& token : tokens) {
    const auto cands = candidates(model, token);
    std::vector<double> lex(cands.size());
    for (std::size_t c = 0; c < cands.size(); ++c) {
      lex[c] = lexical_log_prob(model, token, cands[c], cands);
    }
    std::vector<Hypothesis> next;
    next.reserve(beam.size() * cands.size());
    for (const auto& hyp : beam) {
      for (std::size_t c = 0; c < cands.size(); ++c) {
        Hypothesis h = hyp;
        h.score += lambda * lex[c] + (1 - lambda) * model.lm.log_prob(hyp.tokens, cands[c]);
        h.tokens.push_back(cands[c]);
        next.push_back(std::move(h));
      }
    }
    std::sort(next.begin(), next.end(), better);
    if (next.size() > static_cast<std::size_t>(beam_width)) {
      next.resize(static_cast<std::size_t>(beam_width));
    }
    beam = std::move(next);
  }
  return beam.front().tokens;
}

std::vector<std::string> normalize_sequence(const NormalizerModel& model,
                                            const std::vector<std::string>& tokens) {
  return normalize_sequence(model, tokens, model.config.beam_width);
}

std::string normalize_line(const NormalizerModel& model, std::string_view spaced) {
  return join(normalize_sequence(model, split_tokens(spaced)), " ");
}

double Tally::accuracy() const {
  if (total == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(correct) / static_cast<double>(total);
}

NormEvalResult score_expansions(const std::vector<std::vector<std::string>>& predicted,
                                const AlignedCorpus& test, const AbbreviationLexicon& train_lexicon) {
  if (predicted.size() != test.size()) throw DataError("prediction/test line counts differ");
  NormEvalResult r;
  auto record = [](Tally& t, bool ok) {
    ++t.total;
    t.correct += ok;
  };
  for (std::size_t l = 0; l < test.size(); ++l) {
    const auto& pairs = test.lines[l].pairs;
    if (predicted[l].size() != pairs.size()) {
      throw DataError("prediction for line \"" + test.lines[l].line_id + "\" has " +
                      std::to_string(predicted[l].size()) + " tokens, expected " +
                      std::to_string(pairs.size()));
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const bool ok = predicted[l][i] == pairs[i].exp;
      record(r.all, ok);
      if (train_lexicon.known(pairs[i].abbr)) {
        record(r.known, ok);
        if (train_lexicon.ambiguous(pairs[i].abbr)) record(r.ambiguous, ok);
      } else {
        record(r.unknown, ok);
      }
      if (!train_lexicon.has_target(pairs[i].exp)) record(r.unknown_target, ok);
    }
  }
  return r;
}

NormEvalResult evaluate_normalizer(const NormalizerModel& model, const AlignedCorpus& test,
                                   const AbbreviationLexicon& train_lexicon) {
  std::vector<std::vector<std::string>> predicted;
  predicted.reserve(test.size());
  for (const auto& line : test.lines) {
    std::vector<std::string> abbr;
    for (const auto& pair : line.pairs) abbr.push_back(pair.abbr);
    predicted.push_back(normalize_sequence(model, abbr));
  }
  return score_expansions(predicted, test, train_lexicon);
}

}  // namespace scripta
