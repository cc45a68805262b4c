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

#include "scripta/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scripta/error.hpp"
#include "scripta/random.hpp"
#include "scripta/unicode.hpp"

namespace scripta {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join_side(const std::vector<TokenPair>& pairs, bool abbr) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out.push_back(' ');
    out += abbr ? pairs[i].abbr : pairs[i].exp;
  }
  return out;
}

void check_token(const std::string& token, const char* side) {
  if (token.empty()) throw DataError(std::string("empty ") + side + " token");
  if (contains_space(token)) {
    throw DataError(std::string(side) + " token contains whitespace: \"" + token + "\"");
  }
  require_utf8(token);
}

const std::string& string_field(const json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end()) throw DataError(std::string("missing field \"") + key + "\"");
  if (!it->is_string()) throw DataError(std::string("field \"") + key + "\" must be a string");
  return it->get_ref<const std::string&>();
}

AlignedLine line_from_json(const json& record) {
  if (!record.is_object()) throw DataError("record is not a JSON object");
  for (const auto& [key, value] : record.items()) {
    if (key != "line_id" && key != "abbr" && key != "exp" && key != "pairs" &&
        key != "hyphen_joined") {
      throw DataError("unknown field \"" + key + "\"");
    }
  }
  AlignedLine line;
  line.line_id = string_field(record, "line_id");
  line.abbr_text = string_field(record, "abbr");
  line.exp_text = string_field(record, "exp");
  if (auto it = record.find("hyphen_joined"); it != record.end()) {
    if (!it->is_boolean()) throw DataError("field \"hyphen_joined\" must be a boolean");
    line.hyphen_joined = it->get<bool>();
  }
  auto pairs = record.find("pairs");
  if (pairs == record.end()) throw DataError("missing field \"pairs\"");
  if (!pairs->is_array()) throw DataError("field \"pairs\" must be an array");
  for (const auto& pair : *pairs) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
      throw DataError("each pair must be a two-element array of strings");
    }
    line.pairs.push_back({pair[0].get<std::string>(), pair[1].get<std::string>()});
  }
  validate_line(line);
  return line;
}

}  // namespace

void validate_line(const AlignedLine& line) {
  require_utf8(line.line_id);
  if (line.line_id.empty()) throw DataError("empty line_id");
  if (line.pairs.empty()) throw DataError("line \"" + line.line_id + "\" has no token pairs");
  for (const auto& pair : line.pairs) {
    check_token(pair.abbr, "abbreviated");
    check_token(pair.exp, "expanded");
  }
  if (join_side(line.pairs, true) != line.abbr_text) {
    throw DataError("alignment mismatch: abbreviated tokens do not join to \"" + line.abbr_text +
                    "\"");
  }
  if (join_side(line.pairs, false) != line.exp_text) {
    throw DataError("alignment mismatch: expanded tokens do not join to \"" + line.exp_text +
                    "\"");
  }
}

AlignedLine make_line(std::string line_id, std::vector<TokenPair> pairs) {
  AlignedLine line;
  line.line_id = std::move(line_id);
  line.abbr_text = join_side(pairs, true);
  line.exp_text = join_side(pairs, false);
  line.pairs = std::move(pairs);
  validate_line(line);
  return line;
}

AlignedCorpus parse_ground_truth(std::istream& in) {
  AlignedCorpus corpus;
  std::set<std::string> seen;
  std::string raw;
  std::size_t number = 0;
  bool any_record = false;
  while (std::getline(in, raw)) {
    ++number;
    if (number == 1 && raw.size() >= 3 && raw.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      throw LineError(number, "byte order mark is not allowed");
    }
    if (!raw.empty() && raw.back() == '\r') throw LineError(number, "CRLF line ending");
    if (trim(raw).empty()) continue;
    try {
      require_utf8(raw);
      json record = json::parse(raw);
      if (record.is_object() && record.contains("metadata")) {
        if (any_record) throw DataError("metadata record must come first");
        if (record.size() != 1 || !record["metadata"].is_object()) {
          throw DataError("malformed metadata record");
        }
        for (const auto& [key, value] : record["metadata"].items()) {
          if (!value.is_string()) throw DataError("metadata values must be strings");
          corpus.metadata[key] = value.get<std::string>();
        }
        any_record = true;
        continue;
      }
      AlignedLine line = line_from_json(record);
      if (!seen.insert(line.line_id).second) {
        throw DataError("duplicate line_id \"" + line.line_id + "\"");
      }
      corpus.lines.push_back(std::move(line));
      any_record = true;
    } catch (const json::exception& e) {
      throw LineError(number, std::string("malformed record: ") + e.what());
    } catch (const LineError&) {
      throw;
    } catch (const DataError& e) {
      throw LineError(number, e.what());
    }
  }
  return corpus;
}

AlignedCorpus parse_ground_truth(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_ground_truth(in);
}

void serialize_corpus(const AlignedCorpus& corpus, std::ostream& out) {
  if (!corpus.metadata.empty()) {
    ordered_json meta = ordered_json::object();
    for (const auto& [key, value] : corpus.metadata) meta[key] = value;
    ordered_json record;
    record["metadata"] = std::move(meta);
    out << record.dump() << '\n';
  }
  for (const auto& line : corpus.lines) {
    ordered_json record;
    record["line_id"] = line.line_id;
    record["abbr"] = line.abbr_text;
    record["exp"] = line.exp_text;
    ordered_json pairs = ordered_json::array();
    for (const auto& pair : line.pairs) pairs.push_back({pair.abbr, pair.exp});
    record["pairs"] = std::move(pairs);
    if (line.hyphen_joined) record["hyphen_joined"] = true;
    out << record.dump() << '\n';
  }
}

std::string serialize_corpus(const AlignedCorpus& corpus) {
  std::ostringstream out;
  serialize_corpus(corpus, out);
  return out.str();
}

AlignedCorpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  try {
    return parse_ground_truth(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void save_corpus(const AlignedCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  serialize_corpus(corpus, out);
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string strip_suffix(const std::string& s, std::string_view suffix) {
  return ends_with(s, suffix) ? s.substr(0, s.size() - suffix.size()) : s;
}

bool continues(const TokenPair& last, std::string_view marker) {
  return ends_with(last.abbr, marker) || ends_with(last.exp, marker);
}

}  // namespace

AlignedCorpus normalize_hyphenation(const AlignedCorpus& corpus, std::string_view marker) {
  if (marker.empty()) throw DataError("hyphen marker must not be empty");
  AlignedCorpus out;
  out.metadata = corpus.metadata;
  std::vector<AlignedLine> lines = corpus.lines;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    AlignedLine& line = lines[i];
    while (continues(line.pairs.back(), marker)) {
      // Find the next line that still has tokens to give.
      std::size_t next = i + 1;
      if (next >= lines.size()) {
        throw DataError("dangling hyphen at end of corpus (line \"" + line.line_id + "\")");
      }
      AlignedLine& donor = lines[next];
      TokenPair& last = line.pairs.back();
      const TokenPair& head = donor.pairs.front();
      last.abbr = strip_suffix(last.abbr, marker) + head.abbr;
      last.exp = strip_suffix(last.exp, marker) + head.exp;
      line.hyphen_joined = true;
      donor.pairs.erase(donor.pairs.begin());
      if (donor.pairs.empty()) {
        lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(next));
      } else {
        donor.abbr_text = join_side(donor.pairs, true);
        donor.exp_text = join_side(donor.pairs, false);
      }
    }
    line.abbr_text = join_side(line.pairs, true);
    line.exp_text = join_side(line.pairs, false);
    validate_line(line);
    out.lines.push_back(line);
  }
  return out;
}

std::string_view to_string(VariantKind kind) noexcept {
  switch (kind) {
    case VariantKind::Exp1: return "exp1";
    case VariantKind::Exp2: return "exp2";
    case VariantKind::Abb1: return "abb1";
    case VariantKind::Abb2: return "abb2";
  }
  return "?";
}

VariantKind parse_variant_kind(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "exp1") return VariantKind::Exp1;
  if (lower == "exp2") return VariantKind::Exp2;
  if (lower == "abb1") return VariantKind::Abb1;
  if (lower == "abb2") return VariantKind::Abb2;
  throw DataError("unknown dataset variant \"" + std::string(name) + "\"");
}

bool is_spaced(VariantKind kind) noexcept {
  return kind == VariantKind::Exp1 || kind == VariantKind::Abb1;
}

bool is_abbreviated(VariantKind kind) noexcept {
  return kind == VariantKind::Abb1 || kind == VariantKind::Abb2;
}

DatasetVariant build_variant(const AlignedCorpus& corpus, VariantKind kind) {
  DatasetVariant variant;
  variant.kind = kind;
  variant.lines.reserve(corpus.size());
  const bool abbr = is_abbreviated(kind);
  const std::string_view sep = is_spaced(kind) ? " " : "";
  for (const auto& line : corpus.lines) {
    std::string text;
    for (std::size_t i = 0; i < line.pairs.size(); ++i) {
      if (i) text.append(sep);
      text += abbr ? line.pairs[i].abbr : line.pairs[i].exp;
    }
    variant.lines.push_back(std::move(text));
  }
  return variant;
}

DatasetVariant read_variant(std::istream& in, VariantKind kind) {
  DatasetVariant variant;
  variant.kind = kind;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (!is_valid_utf8(raw)) throw LineError(number, "invalid UTF-8");
    if (!is_spaced(kind) && contains_space(raw)) {
      throw LineError(number, "whitespace in unspaced variant " + std::string(to_string(kind)));
    }
    variant.lines.push_back(std::move(raw));
  }
  return variant;
}

void write_variant(const DatasetVariant& variant, std::ostream& out) {
  for (const auto& line : variant.lines) out << line << '\n';
}

Split split_corpus(const AlignedCorpus& corpus, SplitCounts counts, uint64_t seed, bool shuffled) {
  const std::size_t n = corpus.size();
  if (counts.train + counts.dev + counts.test != n) {
    throw DataError("split counts " + std::to_string(counts.train) + "+" +
                    std::to_string(counts.dev) + "+" + std::to_string(counts.test) +
                    " do not sum to corpus size " + std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffled) {
    Rng rng(seed);
    rng.shuffle(order);
  }

  auto take = [&](std::size_t from, std::size_t count) {
    std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(from),
                                 order.begin() + static_cast<std::ptrdiff_t>(from + count));
    std::sort(idx.begin(), idx.end());
    AlignedCorpus part;
    part.metadata = corpus.metadata;
    for (std::size_t i : idx) part.lines.push_back(corpus.lines[i]);
    return part;
  };

  Split split;
  split.seed = seed;
  split.train = take(0, counts.train);
  split.dev = take(counts.train, counts.dev);
  split.test = take(counts.train + counts.dev, counts.test);
  return split;
}

std::size_t ClassInventory::total() const noexcept {
  std::size_t sum = 0;
  for (const auto& [key, count] : classes) sum += count;
  return sum;
}

ClassInventory class_inventory(const DatasetVariant& variant, ClassMode mode) {
  ClassInventory inv;
  for (const auto& line : variant.lines) {
    const auto units = mode == ClassMode::Grapheme ? graphemes(line) : codepoints(line);
    for (const auto& unit : units) ++inv.classes[unit];
  }
  for (const auto& [key, count] : inv.classes) {
    const bool combining =
        mode == ClassMode::Codepoint ? is_combining_sequence(key) : has_combining_mark(key);
    if (combining) ++inv.combining_count;
  }
  return inv;
}

std::size_t token_count(const AlignedCorpus& corpus) noexcept {
  std::size_t n = 0;
  for (const auto& line : corpus.lines) n += line.pairs.size();
  return n;
}

double abbreviation_density(const AlignedCorpus& corpus) {
  std::size_t total = 0, abbreviated = 0;
  for (const auto& line : corpus.lines) {
    for (const auto& pair : line.pairs) {
      ++total;
      if (pair.abbr != pair.exp) ++abbreviated;
    }
  }
  if (total == 0) throw DataError("abbreviation density is undefined on an empty corpus");
  return static_cast<double>(abbreviated) / static_cast<double>(total);
}

}  // namespace scripta
