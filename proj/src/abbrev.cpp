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

#include "scripta/abbrev.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "scripta/error.hpp"
#include "scripta/unicode.hpp"

namespace scripta {
namespace {

constexpr const char* kDefaultRules =
#include "default_sign_rules.inc"
    ;

std::vector<std::string> split_on(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string_view to_string(SignCategory category) noexcept {
  switch (category) {
    case SignCategory::Tachygraphic: return "tachygraphic";
    case SignCategory::SuperscriptLetter: return "superscript_letter";
    case SignCategory::Suspension: return "suspension";
    case SignCategory::SimpleContraction: return "simple_contraction";
    case SignCategory::CompositeContraction: return "composite_contraction";
  }
  return "?";
}

SignCategory parse_sign_category(std::string_view name) {
  for (auto c : {SignCategory::Tachygraphic, SignCategory::SuperscriptLetter,
                 SignCategory::Suspension, SignCategory::SimpleContraction,
                 SignCategory::CompositeContraction}) {
    if (to_string(c) == name) return c;
  }
  throw DataError("unknown sign category \"" + std::string(name) + "\"");
}

std::string_view to_string(Position position) noexcept {
  switch (position) {
    case Position::Anywhere: return "anywhere";
    case Position::WordInitial: return "word_initial";
    case Position::WordFinal: return "word_final";
  }
  return "?";
}

Position parse_position(std::string_view name) {
  for (auto p : {Position::Anywhere, Position::WordInitial, Position::WordFinal}) {
    if (to_string(p) == name) return p;
  }
  throw DataError("unknown position constraint \"" + std::string(name) + "\"");
}

void validate_rule(const SignRule& rule) {
  if (rule.pattern.empty()) throw DataError("sign rule with empty pattern");
  if (contains_space(rule.pattern)) throw DataError("sign rule pattern contains whitespace");
  if (rule.expansions.empty()) {
    throw DataError("sign rule \"" + rule.pattern + "\" has no expansions");
  }
  require_utf8(rule.pattern);
  for (const auto& e : rule.expansions) {
    require_utf8(e);
    if (contains_space(e)) throw DataError("sign rule expansion contains whitespace");
  }
}

std::vector<SignRule> parse_sign_rules(std::istream& in) {
  std::vector<SignRule> rules;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty() || raw.front() == '#') continue;
    try {
      const auto fields = split_on(raw, '\t');
      if (fields.size() != 4) {
        throw DataError("expected 4 tab-separated fields, got " + std::to_string(fields.size()));
      }
      SignRule rule;
      rule.pattern = fields[0];
      for (auto& e : split_on(fields[1], '|')) {
        if (e.empty()) throw DataError("empty expansion");
        rule.expansions.push_back(std::move(e));
      }
      rule.position = parse_position(fields[2]);
      rule.sign_class.category = parse_sign_category(fields[3]);
      rule.sign_class.ambiguous = rule.expansions.size() > 1;
      validate_rule(rule);
      rules.push_back(std::move(rule));
    } catch (const DataError& e) {
      throw LineError(number, e.what());
    }
  }
  return rules;
}

std::vector<SignRule> parse_sign_rules(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sign_rules(in);
}

std::vector<SignRule> load_sign_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  try {
    return parse_sign_rules(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_sign_rules(const std::vector<SignRule>& rules, std::ostream& out) {
  for (const auto& rule : rules) {
    out << rule.pattern << '\t' << join(rule.expansions, "|") << '\t' << to_string(rule.position)
        << '\t' << to_string(rule.sign_class.category) << '\n';
  }
}

const std::vector<SignRule>& default_sign_rules() {
  static const std::vector<SignRule> rules = parse_sign_rules(std::string_view(kDefaultRules));
  return rules;
}

namespace {

struct CompiledRule {
  const SignRule* rule;
  bool marks_only;
  std::vector<std::string> graphemes;  // when !marks_only
};

// One position of the token: either fixed text or a choice between
// expansions of a matched sign.
struct Slot {
  std::vector<std::string> options;
};

bool position_ok(Position position, std::size_t begin, std::size_t end, std::size_t length) {
  switch (position) {
    case Position::Anywhere: return true;
    case Position::WordInitial: return begin == 0;
    case Position::WordFinal: return end == length;
  }
  return false;
}

}  // namespace

std::vector<std::string> compositional_candidates(std::string_view token,
                                                  const std::vector<SignRule>& rules,
                                                  std::size_t max_candidates) {
  const std::string original(token);
  if (token.empty()) return {original};

  std::vector<CompiledRule> compiled;
  compiled.reserve(rules.size());
  for (const auto& rule : rules) {
    const bool marks = is_combining_sequence(rule.pattern);
    compiled.push_back({&rule, marks, marks ? std::vector<std::string>{} : graphemes(rule.pattern)});
  }

  const auto g = graphemes(token);
  std::vector<Slot> slots;
  std::size_t variable_slots = 0;

  for (std::size_t i = 0; i < g.size();) {
    bool matched = false;
    for (const auto& c : compiled) {
      const SignRule& rule = *c.rule;
      if (c.marks_only) {
        if (!position_ok(rule.position, i, i + 1, g.size())) continue;
        const auto cps = codepoints(g[i]);
        if (cps.size() < 2) continue;
        // Search the marks only, never the base character.
        const std::size_t base_len = cps.front().size();
        const auto pos = g[i].find(rule.pattern, base_len);
        if (pos == std::string::npos) continue;
        std::string stripped = g[i];
        stripped.erase(pos, rule.pattern.size());
        Slot slot;
        for (const auto& e : rule.expansions) slot.options.push_back(stripped + e);
        slots.push_back(std::move(slot));
        ++variable_slots;
        i += 1;
        matched = true;
        break;
      }
      const std::size_t len = c.graphemes.size();
      if (len == 0 || i + len > g.size()) continue;
      if (!position_ok(rule.position, i, i + len, g.size())) continue;
      if (!std::equal(c.graphemes.begin(), c.graphemes.end(), g.begin() + static_cast<std::ptrdiff_t>(i))) {
        continue;
      }
      slots.push_back({rule.expansions});
      ++variable_slots;
      i += len;
      matched = true;
      break;
    }
    if (!matched) {
      slots.push_back({{g[i]}});
      ++i;
    }
  }

  std::vector<std::string> out;
  if (variable_slots == 0 || max_candidates <= 1) return {original};

  std::unordered_set<std::string> seen{original};
  std::vector<std::size_t> index(slots.size(), 0);
  // Duplicate-heavy tables could make the product huge without producing
  // new strings; bound the walk as well as the output.
  const std::size_t max_steps = std::max<std::size_t>(1024, max_candidates * 64);
  for (std::size_t step = 0; step < max_steps && out.size() + 1 < max_candidates; ++step) {
    std::string candidate;
    for (std::size_t s = 0; s < slots.size(); ++s) candidate += slots[s].options[index[s]];
    if (seen.insert(candidate).second) out.push_back(std::move(candidate));

    // Advance the odometer; the rightmost slot varies fastest.
    bool wrapped = true;
    for (std::size_t s = slots.size(); s-- > 0;) {
      if (++index[s] < slots[s].options.size()) {
        wrapped = false;
        break;
      }
      index[s] = 0;
    }
    if (wrapped) break;
  }
  out.push_back(original);
  return out;
}

void AbbreviationLexicon::add(const std::string& abbr, const std::string& exp, uint64_t count) {
  if (count == 0) return;
  forward_[abbr][exp] += count;
  reverse_[exp].insert(abbr);
  total_ += count;
}

bool AbbreviationLexicon::known(std::string_view abbr) const {
  return forward_.find(abbr) != forward_.end();
}

bool AbbreviationLexicon::ambiguous(std::string_view abbr) const {
  const auto* t = targets(abbr);
  return t && t->size() >= 2;
}

bool AbbreviationLexicon::has_target(std::string_view exp) const {
  return reverse_.find(exp) != reverse_.end();
}

const AbbreviationLexicon::Targets* AbbreviationLexicon::targets(std::string_view abbr) const {
  auto it = forward_.find(abbr);
  return it == forward_.end() ? nullptr : &it->second;
}

uint64_t AbbreviationLexicon::count(std::string_view abbr) const {
  uint64_t sum = 0;
  if (const auto* t = targets(abbr)) {
    for (const auto& [exp, n] : *t) sum += n;
  }
  return sum;
}

AbbreviationLexicon learn_lexicon(const AlignedCorpus& train) {
  AbbreviationLexicon lexicon;
  for (const auto& line : train.lines) {
    for (const auto& pair : line.pairs) lexicon.add(pair.abbr, pair.exp);
  }
  return lexicon;
}

std::vector<std::pair<std::string, uint64_t>> expansions_of(const AbbreviationLexicon& lexicon,
                                                            std::string_view token) {
  std::vector<std::pair<std::string, uint64_t>> out;
  if (const auto* t = lexicon.targets(token)) {
    out.assign(t->begin(), t->end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
  }
  return out;
}

std::set<std::string> abbreviations_of(const AbbreviationLexicon& lexicon, std::string_view exp) {
  auto it = lexicon.reverse().find(exp);
  return it == lexicon.reverse().end() ? std::set<std::string>{} : it->second;
}

}  // namespace scripta
