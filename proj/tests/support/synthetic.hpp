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


// Reproducible synthetic Latin material for tests: a fixed word list with
// abbreviated forms, a Zipf sampler over it, and aligned corpora built from
// sampled lines.

#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "scripta/corpus.hpp"

namespace scripta::testing {

struct LatinWord {
  std::string exp;
  std::string abbr;  // equal to exp when the word is written in full
};

// Every abbreviated form maps to exactly one expansion.
const std::vector<LatinWord>& latin_words();

// Word list of latin_words() followed by the two readings of "ĩ".
const std::vector<LatinWord>& latin_words_with_ambiguity();

struct CorpusOptions {
  std::size_t lines = 100;
  std::size_t min_words = 5;
  std::size_t max_words = 10;
  uint64_t seed = 1;
  double zipf_exponent = 1.0;
  bool ambiguous = false;          // sample from latin_words_with_ambiguity()
  bool unique_segmentation = false;  // resample lines whose ABB2 form splits two ways
};

AlignedCorpus synthetic_corpus(const CorpusOptions& options);

// Number of ways to cut `graphemes` into words drawn from `vocabulary`.
std::size_t count_segmentations(const std::vector<std::string>& graphemes,
                                const std::set<std::string>& vocabulary);

// The aligned ground truth line of the worked example.
AlignedLine table_line();

}  // namespace scripta::testing
