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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "scripta/normalizer.hpp"
#include "scripta/segmenter.hpp"

namespace scripta {

// Model files share one container layout (all integers little-endian):
//
//   magic    8 bytes   "SCRIPTA\0"
//   kind     4 bytes   "SEGM" or "NORM"
//   version  u32       per-kind format version
//   hlen     u64       length of the JSON header
//   header   hlen bytes UTF-8 JSON (configuration, fingerprints, ...)
//   plen     u64       length of the payload
//   payload  plen bytes kind-specific
//
// Segmenter payload: repeated (u32 feature index, f64 weight) for every
// non-zero weight, in index order. Normaliser payload is empty; the
// lexicon, rules and n-gram counts live in the header.

struct ModelContainer {
  std::string kind;
  uint32_t version = 0;
  std::string header;  // JSON text
  std::string payload;
};

void write_container(std::ostream& out, const ModelContainer& container);
// Throws DataError on a bad magic, an unexpected kind or version, or
// truncation.
ModelContainer read_container(std::istream& in, std::string_view expected_kind,
                              uint32_t expected_version);

void save_segmenter(const SegmenterModel& model, std::ostream& out);
SegmenterModel load_segmenter(std::istream& in);
void save_segmenter(const SegmenterModel& model, const std::string& path);
SegmenterModel load_segmenter(const std::string& path);

void save_normalizer(const NormalizerModel& model, std::ostream& out);
NormalizerModel load_normalizer(std::istream& in);
void save_normalizer(const NormalizerModel& model, const std::string& path);
NormalizerModel load_normalizer(const std::string& path);

// Hash of the serialised model bytes.
std::string fingerprint(const SegmenterModel& model);
std::string fingerprint(const NormalizerModel& model);

}  // namespace scripta
