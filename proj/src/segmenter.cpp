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

#include "scripta/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scripta/error.hpp"
#include "scripta/hash.hpp"
#include "scripta/random.hpp"
#include "scripta/unicode.hpp"

namespace scripta {
namespace {

constexpr std::string_view kPad = "<pad>";

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x) without overflow.
double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

uint32_t hash_feature(std::string_view name, int bits) {
  const uint64_t mask = (uint64_t{1} << bits) - 1;
  return static_cast<uint32_t>(fnv1a64(name) & mask);
}

}  // namespace

void validate(const SegmenterConfig& config) {
  if (config.window_radius < 1) throw DataError("segmenter window_radius must be >= 1");
  if (config.ngram_orders.empty()) throw DataError("segmenter needs at least one n-gram order");
  for (int n : config.ngram_orders) {
    if (n < 1 || n > 2 * config.window_radius) {
      throw DataError("n-gram order " + std::to_string(n) + " does not fit the window");
    }
  }
  if (config.feature_space_bits < 1 || config.feature_space_bits > 28) {
    throw DataError("feature_space_bits must be in [1, 28]");
  }
  if (!(config.learning_rate > 0)) throw DataError("learning_rate must be positive");
  if (config.epochs < 1) throw DataError("epochs must be >= 1");
  if (!(config.l2 >= 0)) throw DataError("l2 must be non-negative");
  if (!(config.threshold > 0 && config.threshold < 1)) {
    throw DataError("threshold must lie strictly between 0 and 1");
  }
}

std::vector<std::string> gap_feature_names(std::span<const std::string> graphemes,
                                           std::size_t gap, const SegmenterConfig& config) {
  if (graphemes.size() < 2 || gap >= graphemes.size() - 1) {
    throw DataError("gap index " + std::to_string(gap) + " out of range for " +
                    std::to_string(graphemes.size()) + " graphemes");
  }
  const int r = config.window_radius;
  // Window slots in reading order: offsets -r..-1 then +1..+r.
  std::vector<std::string_view> window;
  std::vector<int> offsets;
  window.reserve(static_cast<std::size_t>(2 * r));
  for (int k = -r; k <= r; ++k) {
    if (k == 0) continue;
    // Offset -1 is the grapheme before the gap, +1 the one after it.
    const long pos = static_cast<long>(gap) + (k < 0 ? k + 1 : k);
    const bool inside = pos >= 0 && pos < static_cast<long>(graphemes.size());
    window.push_back(inside ? std::string_view(graphemes[static_cast<std::size_t>(pos)]) : kPad);
    offsets.push_back(k);
  }

  std::vector<std::string> names;
  for (int n : config.ngram_orders) {
    for (std::size_t start = 0; start + static_cast<std::size_t>(n) <= window.size(); ++start) {
      std::string name = std::to_string(n) + "|" + std::to_string(offsets[start]) + "|";
      for (int i = 0; i < n; ++i) {
        if (i) name.push_back('\x1f');
        name.append(window[start + static_cast<std::size_t>(i)]);
      }
      names.push_back(std::move(name));
    }
  }
  return names;
}

std::vector<uint32_t> gap_features(std::span<const std::string> graphemes, std::size_t gap,
                                   const SegmenterConfig& config) {
  const auto names = gap_feature_names(graphemes, gap, config);
  std::vector<uint32_t> out;
  out.reserve(names.size());
  for (const auto& name : names) out.push_back(hash_feature(name, config.feature_space_bits));
  return out;
}

GoldLine parse_spaced_line(std::string_view spaced) {
  GoldLine line;
  for (const auto& token : split_tokens(spaced)) {
    bool word_start = true;
    for (auto& g : graphemes(token)) {
      if (!line.graphemes.empty()) line.boundaries.push_back(word_start);
      line.graphemes.push_back(std::move(g));
      word_start = false;
    }
  }
  return line;
}

double SegmenterModel::score(std::span<const uint32_t> features) const {
  double s = bias;
  for (uint32_t f : features) s += weights[f];
  return s;
}

double SegmenterModel::boundary_probability(std::span<const uint32_t> features) const {
  return sigmoid(score(features));
}

SegmenterModel make_untrained_model(const SegmenterConfig& config) {
  validate(config);
  SegmenterModel model;
  model.config = config;
  model.weights.assign(std::size_t{1} << config.feature_space_bits, 0.0);
  return model;
}

double batch_loss(const SegmenterModel& model, std::span<const GapExample> batch) {
  double loss = 0;
  for (const auto& ex : batch) {
    const double s = model.score(ex.features);
    // -log sigmoid(s) for a break, -log(1 - sigmoid(s)) otherwise.
    loss += ex.boundary ? softplus(-s) : softplus(s);
  }
  if (!batch.empty()) loss /= static_cast<double>(batch.size());
  double norm = 0;
  for (double w : model.weights) norm += w * w;
  return loss + 0.5 * model.config.l2 * norm;
}

SegmenterGradient batch_gradient(const SegmenterModel& model, std::span<const GapExample> batch) {
  SegmenterGradient grad;
  grad.weights.assign(model.weights.size(), 0.0);
  const double scale = batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) {
    const double g = (model.boundary_probability(ex.features) - (ex.boundary ? 1.0 : 0.0)) * scale;
    for (uint32_t f : ex.features) grad.weights[f] += g;
    grad.bias += g;
  }
  for (std::size_t i = 0; i < grad.weights.size(); ++i) {
    grad.weights[i] += model.config.l2 * model.weights[i];
  }
  return grad;
}

std::vector<GapExample> gap_examples(const GoldLine& line, const SegmenterConfig& config) {
  std::vector<GapExample> out;
  for (std::size_t k = 0; k < line.boundaries.size(); ++k) {
    out.push_back({gap_features(line.graphemes, k, config), line.boundaries[k]});
  }
  return out;
}

namespace {

std::string fingerprint_lines(const std::vector<std::string>& lines) {
  uint64_t h = fnv1a64("");
  for (const auto& line : lines) {
    h = fnv1a64(line, h);
    h = fnv1a64("\n", h);
  }
  return hex64(h);
}

std::vector<GapExample> examples_of(const DatasetVariant& variant, const SegmenterConfig& config) {
  std::vector<GapExample> out;
  for (const auto& text : variant.lines) {
    auto ex = gap_examples(parse_spaced_line(text), config);
    out.insert(out.end(), std::make_move_iterator(ex.begin()), std::make_move_iterator(ex.end()));
  }
  return out;
}

double threshold_f(const SegmenterModel& model, const std::vector<GapExample>& examples) {
  std::size_t correct = 0, pred = 0, gold = 0;
  for (const auto& ex : examples) {
    const bool p = model.boundary_probability(ex.features) > model.config.threshold;
    pred += p;
    gold += ex.boundary;
    correct += p && ex.boundary;
  }
  return prf(correct, pred, gold).f;
}

struct RunResult {
  SegmenterModel model;
  double best_f = -1;
  TrainingLog::Run log;
};

RunResult train_run(const std::vector<GapExample>& train, const std::vector<GapExample>& dev,
                    SegmenterModel model) {
  const auto& config = model.config;
  Rng rng(config.seed);
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  RunResult result;
  result.log.seed = config.seed;
  const double lr = config.learning_rate;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const auto& ex = train[idx];
      const double g = model.boundary_probability(ex.features) - (ex.boundary ? 1.0 : 0.0);
      // L2 is applied lazily, to the weights touched by this example.
      for (uint32_t f : ex.features) {
        model.weights[f] -= lr * (g + config.l2 * model.weights[f]);
      }
      model.bias -= lr * g;
    }
    const double f = threshold_f(model, dev);
    result.log.dev_f.push_back(f);
    if (f > result.best_f) {
      result.best_f = f;
      result.model = model;
      result.log.best_epoch = epoch;
    }
  }
  return result;
}

}  // namespace

SegmenterModel train_segmenter(const DatasetVariant& train, const DatasetVariant& dev,
                               const SegmenterConfig& config, int restarts, TrainingLog* log) {
  validate(config);
  if (restarts < 1) throw DataError("restarts must be >= 1");
  if (train.lines.empty()) throw DataError("segmenter training set is empty");

  const auto train_ex = examples_of(train, config);
  const bool has_break =
      std::any_of(train_ex.begin(), train_ex.end(), [](const GapExample& e) { return e.boundary; });
  if (!has_break) throw DataError("segmenter training lines contain no word breaks");
  const auto dev_ex = dev.lines.empty() ? train_ex : examples_of(dev, config);

  SegmenterModel best;
  double best_f = -1;
  TrainingLog local;
  for (int r = 0; r < restarts; ++r) {
    SegmenterConfig run_config = config;
    if (r > 0) run_config.seed = mix_seed(config.seed, static_cast<uint64_t>(r));
    auto result = train_run(train_ex, dev_ex, make_untrained_model(run_config));
    local.runs.push_back(result.log);
    if (result.best_f > best_f) {
      best_f = result.best_f;
      best = std::move(result.model);
      local.best_run = static_cast<std::size_t>(r);
    }
  }
  best.trained_on = fingerprint_lines(train.lines);
  if (log) *log = std::move(local);
  return best;
}

void WordUnigram::add(const std::string& word, uint64_t n) {
  counts[word] += n;
  total += n;
}

WordUnigram unigram_from_lexicon(const AbbreviationLexicon& lexicon, LexiconSide side) {
  WordUnigram u;
  for (const auto& [abbr, targets] : lexicon.forward()) {
    for (const auto& [exp, n] : targets) u.add(side == LexiconSide::Abbreviated ? abbr : exp, n);
  }
  return u;
}

WordUnigram unigram_from_variant(const DatasetVariant& spaced) {
  WordUnigram u;
  for (const auto& line : spaced.lines) {
    for (const auto& word : split_tokens(line)) u.add(word);
  }
  return u;
}

std::string_view to_string(SegmentMode mode) noexcept {
  return mode == SegmentMode::Threshold ? "threshold" : "lexicon_dp";
}

SegmentMode parse_segment_mode(std::string_view name) {
  if (name == "threshold") return SegmentMode::Threshold;
  if (name == "lexicon_dp") return SegmentMode::LexiconDp;
  throw DataError("unknown segmentation mode \"" + std::string(name) + "\"");
}

std::vector<bool> predict_boundaries(const SegmenterModel& model,
                                     std::span<const std::string> graphemes,
                                     const DecodeOptions& options) {
  const std::size_t n = graphemes.size();
  if (n < 2) return {};
  std::vector<double> scores(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    scores[k] = model.score(gap_features(graphemes, k, model.config));
  }

  std::vector<bool> out(n - 1, false);
  if (options.mode == SegmentMode::Threshold) {
    for (std::size_t k = 0; k + 1 < n; ++k) out[k] = sigmoid(scores[k]) > model.config.threshold;
    return out;
  }

  if (!options.unigram) throw DataError("lexicon_dp segmentation needs a word lexicon");
  const WordUnigram& lex = *options.unigram;
  const double log_total = lex.total > 0 ? std::log(static_cast<double>(lex.total)) : 0.0;

  // join_prefix[k] = sum of log P(no break) over gaps 0..k-1.
  std::vector<double> join_prefix(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) join_prefix[k + 1] = join_prefix[k] - softplus(scores[k]);

  auto word_score = [&](std::size_t i, std::size_t j) {
    std::string word;
    for (std::size_t k = i; k < j; ++k) word += graphemes[k];
    auto it = lex.counts.find(word);
    if (it != lex.counts.end() && lex.total > 0) {
      return std::log(static_cast<double>(it->second)) - log_total;
    }
    return options.oov_penalty * static_cast<double>(j - i);
  };

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, kNegInf);
  std::vector<std::size_t> back(n + 1, 0);
  best[0] = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (best[i] == kNegInf) continue;
      double s = best[i] + word_score(i, j) + (join_prefix[j - 1] - join_prefix[i]);
      if (i > 0) s += -softplus(-scores[i - 1]);
      if (s > best[j]) {
        best[j] = s;
        back[j] = i;
      }
    }
  }
  for (std::size_t j = n; j > 0; j = back[j]) {
    if (back[j] > 0) out[back[j] - 1] = true;
  }
  return out;
}

std::string segment(const SegmenterModel& model, std::string_view unspaced,
                    const DecodeOptions& options) {
  if (contains_space(unspaced)) throw DataError("segmenter input contains whitespace");
  const auto g = graphemes(unspaced);
  const auto breaks = predict_boundaries(model, g, options);
  std::string out;
  out.reserve(unspaced.size() + breaks.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    out += g[k];
    if (k < breaks.size() && breaks[k]) out.push_back(' ');
  }
  return out;
}

std::string segment(const SegmenterModel& model, std::string_view unspaced,
                    const AbbreviationLexicon& lexicon, LexiconSide side) {
  const auto unigram = unigram_from_lexicon(lexicon, side);
  DecodeOptions options;
  options.mode = SegmentMode::LexiconDp;
  options.unigram = &unigram;
  return segment(model, unspaced, options);
}

SegEvalResult score_boundaries(std::size_t n_correct, std::size_t n_pred, std::size_t n_gold) {
  const PRF r = prf(n_correct, n_pred, n_gold);
  return {r.f, r.precision, r.recall, n_gold, n_pred, n_correct};
}

SegEvalResult evaluate_segmenter(const SegmenterModel& model, const DatasetVariant& gold,
                                 const DecodeOptions& options) {
  std::size_t correct = 0, pred = 0, n_gold = 0;
  for (const auto& text : gold.lines) {
    const GoldLine line = parse_spaced_line(text);
    const auto breaks = predict_boundaries(model, line.graphemes, options);
    for (std::size_t k = 0; k < breaks.size(); ++k) {
      pred += breaks[k];
      n_gold += line.boundaries[k];
      correct += breaks[k] && line.boundaries[k];
    }
  }
  return score_boundaries(correct, pred, n_gold);
}

}  // namespace scripta
