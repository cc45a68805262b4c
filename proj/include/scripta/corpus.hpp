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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scripta {

struct TokenPair {
  std::string abbr;
  std::string exp;

  friend bool operator==(const TokenPair&, const TokenPair&) = default;
};

// One transcribed line, aligned token by token between the diplomatic
// (abbreviated) and normalised (expanded) readings.
struct AlignedLine {
  std::string line_id;
  std::string abbr_text;
  std::string exp_text;
  std::vector<TokenPair> pairs;
  bool hyphen_joined = false;

  friend bool operator==(const AlignedLine&, const AlignedLine&) = default;
};

// Throws DataError when a line breaks the alignment invariants: empty or
// whitespace-bearing tokens, or token joins that differ from the texts.
void validate_line(const AlignedLine& line);

// Builds a line whose texts are the space-joined tokens.
AlignedLine make_line(std::string line_id, std::vector<TokenPair> pairs);

struct AlignedCorpus {
  std::vector<AlignedLine> lines;
  std::map<std::string, std::string> metadata;

  bool empty() const noexcept { return lines.empty(); }
  std::size_t size() const noexcept { return lines.size(); }

  friend bool operator==(const AlignedCorpus&, const AlignedCorpus&) = default;
};

// ---- ground-truth JSON Lines ---------------------------------------------
//
// One object per line:
//   {"line_id": str, "abbr": str, "exp": str, "pairs": [[abbr, exp], ...]}
// with an optional "hyphen_joined": true. A corpus may start with a single
// {"metadata": {key: str, ...}} record. UTF-8, no BOM, LF endings.

AlignedCorpus parse_ground_truth(std::istream& in);
AlignedCorpus parse_ground_truth(std::string_view text);
void serialize_corpus(const AlignedCorpus& corpus, std::ostream& out);
std::string serialize_corpus(const AlignedCorpus& corpus);

AlignedCorpus load_corpus(const std::string& path);
void save_corpus(const AlignedCorpus& corpus, const std::string& path);

// Merges words split across lines by an end-of-line marker: the second
// half moves up and is glued to the first. Lines emptied by the move are
// dropped. Throws DataError if the last line still ends with the marker.
AlignedCorpus normalize_hyphenation(const AlignedCorpus& corpus, std::string_view marker = "-");

// ---- dataset variants ----------------------------------------------------

enum class VariantKind { Exp1, Exp2, Abb1, Abb2 };

std::string_view to_string(VariantKind kind) noexcept;
VariantKind parse_variant_kind(std::string_view name);  // "exp1", "ABB2", ...
bool is_spaced(VariantKind kind) noexcept;
bool is_abbreviated(VariantKind kind) noexcept;

struct DatasetVariant {
  VariantKind kind = VariantKind::Exp1;
  std::vector<std::string> lines;
};

DatasetVariant build_variant(const AlignedCorpus& corpus, VariantKind kind);

// Plain text, one record per line.
DatasetVariant read_variant(std::istream& in, VariantKind kind);
void write_variant(const DatasetVariant& variant, std::ostream& out);

// ---- splits --------------------------------------------------------------

struct SplitCounts {
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
};

struct Split {
  AlignedCorpus train;
  AlignedCorpus dev;
  AlignedCorpus test;
  uint64_t seed = 0;
};

// Partitions the corpus. With `shuffled` the membership is drawn from a
// seeded permutation; each part keeps document order either way.
Split split_corpus(const AlignedCorpus& corpus, SplitCounts counts, uint64_t seed, bool shuffled);

// ---- statistics ----------------------------------------------------------

enum class ClassMode { Grapheme, Codepoint };

struct ClassInventory {
  std::map<std::string, std::size_t> classes;
  // Codepoint mode: classes that are a combining mark. Grapheme mode:
  // clusters that carry at least one combining mark.
  std::size_t combining_count = 0;

  std::size_t size() const noexcept { return classes.size(); }
  std::size_t total() const noexcept;
};

ClassInventory class_inventory(const DatasetVariant& variant, ClassMode mode = ClassMode::Grapheme);

// Share of token pairs whose abbreviated form differs from the expansion.
// Throws DataError on a corpus without tokens.
double abbreviation_density(const AlignedCorpus& corpus);

std::size_t token_count(const AlignedCorpus& corpus) noexcept;

}  // namespace scripta
