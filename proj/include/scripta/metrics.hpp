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

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scripta {

// Unit-cost Levenshtein distance (substitution, insertion and deletion all
// cost 1), two-row dynamic programme.
template <typename T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

template <typename T>
std::size_t levenshtein(const std::vector<T>& a, const std::vector<T>& b) {
  return levenshtein(std::span<const T>(a), std::span<const T>(b));
}

enum class CharUnit { Codepoint, Grapheme };

// Character and word error rates in percent. Both arguments are trimmed of
// leading and trailing whitespace first; WER tokens are maximal runs of
// non-space characters. Throw DataError on an empty reference.
double cer(std::string_view hyp, std::string_view ref, CharUnit unit = CharUnit::Codepoint);
double wer(std::string_view hyp, std::string_view ref);

// Corpus-level rates: summed distances over summed reference lengths.
struct ErrorTally {
  std::size_t edits = 0;
  std::size_t reference_length = 0;

  double rate() const;  // percent; DataError if reference_length == 0
  ErrorTally& operator+=(const ErrorTally& other) noexcept {
    edits += other.edits;
    reference_length += other.reference_length;
    return *this;
  }
};

ErrorTally char_errors(std::string_view hyp, std::string_view ref,
                       CharUnit unit = CharUnit::Codepoint);
ErrorTally word_errors(std::string_view hyp, std::string_view ref);

double corpus_cer(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                  CharUnit unit = CharUnit::Codepoint);
double corpus_wer(const std::vector<std::string>& hyps, const std::vector<std::string>& refs);

// Precision, recall and F1 from match counts. An empty prediction set has
// precision 1, an empty gold set recall 1; F is 0 when P + R is 0.
struct PRF {
  double precision = 0;
  double recall = 0;
  double f = 0;
};

PRF prf(std::size_t n_correct, std::size_t n_pred, std::size_t n_gold);

}  // namespace scripta
