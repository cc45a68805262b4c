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
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scripta/corpus.hpp"

namespace scripta {

// Traditional classes of medieval Latin abbreviation.
enum class SignCategory {
  Tachygraphic,          // Tironian et, con-sign
  SuperscriptLetter,     // superscript a for ua/ra
  Suspension,            // ē for est
  SimpleContraction,     // rōe for ratione
  CompositeContraction,  // contraction combined with other devices
};

std::string_view to_string(SignCategory category) noexcept;
SignCategory parse_sign_category(std::string_view name);

struct SignClass {
  SignCategory category = SignCategory::Tachygraphic;
  bool ambiguous = false;

  friend bool operator==(const SignClass&, const SignClass&) = default;
};

enum class Position { Anywhere, WordInitial, WordFinal };

std::string_view to_string(Position position) noexcept;
Position parse_position(std::string_view name);

// A sign and the strings it may stand for.
//
// A pattern that starts with a base character matches whole grapheme
// clusters. A pattern made only of combining marks (a titulus, a
// superscript letter) matches those marks inside a single cluster; the
// expansion is then written after the cluster's remaining characters, so
// "ō" under a titulus rule becomes "om" or "on".
struct SignRule {
  std::string pattern;
  std::vector<std::string> expansions;
  Position position = Position::Anywhere;
  SignClass sign_class;

  friend bool operator==(const SignRule&, const SignRule&) = default;
};

void validate_rule(const SignRule& rule);

// Rule table: UTF-8 TSV with columns
//   pattern <TAB> expansion|expansion|... <TAB> position <TAB> category
// Blank lines and lines starting with '#' are ignored. The ambiguous flag
// is derived from the number of expansions.
std::vector<SignRule> parse_sign_rules(std::istream& in);
std::vector<SignRule> parse_sign_rules(std::string_view text);
std::vector<SignRule> load_sign_rules(const std::string& path);
void write_sign_rules(const std::vector<SignRule>& rules, std::ostream& out);

// The table shipped in data/sign_rules.tsv.
const std::vector<SignRule>& default_sign_rules();

// Every expansion the rules can produce for `token`, in odometer order over
// the matched signs (leftmost sign varies slowest; each sign's expansions
// in table order), deduplicated, with the untouched token last. At each
// position the first matching rule in table order claims the sign. The
// result holds at most `max_candidates` entries (and always the token).
std::vector<std::string> compositional_candidates(std::string_view token,
                                                  const std::vector<SignRule>& rules,
                                                  std::size_t max_candidates);

// Count-weighted many-to-many relation between abbreviated tokens and
// their expansions. Neither direction is assumed to be a function.
class AbbreviationLexicon {
 public:
  using Targets = std::map<std::string, uint64_t>;

  void add(const std::string& abbr, const std::string& exp, uint64_t count = 1);

  bool known(std::string_view abbr) const;
  // Known with at least two distinct expansions in training.
  bool ambiguous(std::string_view abbr) const;
  bool has_target(std::string_view exp) const;

  const Targets* targets(std::string_view abbr) const;
  uint64_t count(std::string_view abbr) const;

  const std::map<std::string, Targets, std::less<>>& forward() const noexcept { return forward_; }
  const std::map<std::string, std::set<std::string>, std::less<>>& reverse() const noexcept {
    return reverse_;
  }
  uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }

  friend bool operator==(const AbbreviationLexicon&, const AbbreviationLexicon&) = default;

 private:
  std::map<std::string, Targets, std::less<>> forward_;
  std::map<std::string, std::set<std::string>, std::less<>> reverse_;
  uint64_t total_ = 0;
};

AbbreviationLexicon learn_lexicon(const AlignedCorpus& train);

// Expansions by descending count, ties broken by byte-wise string order.
std::vector<std::pair<std::string, uint64_t>> expansions_of(const AbbreviationLexicon& lexicon,
                                                            std::string_view token);

std::set<std::string> abbreviations_of(const AbbreviationLexicon& lexicon, std::string_view exp);

}  // namespace scripta
