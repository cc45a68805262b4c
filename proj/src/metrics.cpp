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

#include "scripta/metrics.hpp"

#include "scripta/error.hpp"
#include "scripta/unicode.hpp"

namespace scripta {

double ErrorTally::rate() const {
  if (reference_length == 0) throw DataError("error rate undefined for an empty reference");
  return 100.0 * static_cast<double>(edits) / static_cast<double>(reference_length);
}

ErrorTally char_errors(std::string_view hyp, std::string_view ref, CharUnit unit) {
  hyp = trim(hyp);
  ref = trim(ref);
  if (unit == CharUnit::Grapheme) {
    const auto h = graphemes(hyp), r = graphemes(ref);
    return {levenshtein(h, r), r.size()};
  }
  const auto h = decode_utf8(hyp), r = decode_utf8(ref);
  return {levenshtein(h, r), r.size()};
}

ErrorTally word_errors(std::string_view hyp, std::string_view ref) {
  const auto h = split_tokens(hyp), r = split_tokens(ref);
  return {levenshtein(h, r), r.size()};
}

double cer(std::string_view hyp, std::string_view ref, CharUnit unit) {
  return char_errors(hyp, ref, unit).rate();
}

double wer(std::string_view hyp, std::string_view ref) {
  return word_errors(hyp, ref).rate();
}

namespace {

void require_same_size(const std::vector<std::string>& hyps, const std::vector<std::string>& refs) {
  if (hyps.size() != refs.size()) {
    throw DataError("hypothesis/reference line counts differ: " + std::to_string(hyps.size()) +
                    " vs " + std::to_string(refs.size()));
  }
}

}  // namespace

double corpus_cer(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                  CharUnit unit) {
  require_same_size(hyps, refs);
  ErrorTally tally;
  for (std::size_t i = 0; i < hyps.size(); ++i) tally += char_errors(hyps[i], refs[i], unit);
  return tally.rate();
}

double corpus_wer(const std::vector<std::string>& hyps, const std::vector<std::string>& refs) {
  require_same_size(hyps, refs);
  ErrorTally tally;
  for (std::size_t i = 0; i < hyps.size(); ++i) tally += word_errors(hyps[i], refs[i]);
  return tally.rate();
}

PRF prf(std::size_t n_correct, std::size_t n_pred, std::size_t n_gold) {
  if (n_correct > n_pred || n_correct > n_gold) {
    throw DataError("prf: correct count exceeds predicted or gold count");
  }
  PRF r;
  r.precision = n_pred == 0 ? 1.0 : static_cast<double>(n_correct) / static_cast<double>(n_pred);
  r.recall = n_gold == 0 ? 1.0 : static_cast<double>(n_correct) / static_cast<double>(n_gold);
  const double denom = r.precision + r.recall;
  r.f = denom == 0 ? 0.0 : 2.0 * r.precision * r.recall / denom;
  return r;
}

}  // namespace scripta
