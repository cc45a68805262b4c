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

#include <string>
#include <string_view>
#include <vector>

namespace scripta {

// Text is never Unicode-normalised anywhere in this library: combining
// abbreviation marks are kept exactly as transcribed.

// Throws DataError if `text` is not well-formed UTF-8.
void require_utf8(std::string_view text);
bool is_valid_utf8(std::string_view text);

// Extended grapheme clusters (UAX #29), as UTF-8 substrings.
std::vector<std::string> graphemes(std::string_view text);

// One entry per Unicode scalar value.
std::vector<std::string> codepoints(std::string_view text);
std::vector<char32_t> decode_utf8(std::string_view text);
std::string encode_utf8(char32_t cp);

// General category Mn, Mc or Me.
bool is_combining_mark(char32_t cp);
// True when every scalar value of `text` is a combining mark.
bool is_combining_sequence(std::string_view text);
// True when `text` contains at least one combining mark.
bool has_combining_mark(std::string_view text);

bool is_space(char c) noexcept;
bool contains_space(std::string_view text) noexcept;
std::string remove_spaces(std::string_view text);

// Maximal runs of non-space bytes (space, tab, CR, LF separate tokens).
std::vector<std::string> split_tokens(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view trim(std::string_view text) noexcept;

}  // namespace scripta
