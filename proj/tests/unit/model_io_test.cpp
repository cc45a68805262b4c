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


#include <doctest.h>

#include <sstream>

#include "scripta/error.hpp"
#include "scripta/model_io.hpp"
#include "synthetic.hpp"

using namespace scripta;

namespace {

SegmenterModel tiny_segmenter() {
  SegmenterConfig config;
  config.feature_space_bits = 10;
  config.epochs = 2;
  config.seed = 5;
  testing::CorpusOptions o;
  o.lines = 30;
  return train_segmenter(build_variant(testing::synthetic_corpus(o), VariantKind::Abb1),
                         DatasetVariant{}, config);
}

NormalizerModel tiny_normalizer() {
  testing::CorpusOptions o;
  o.lines = 30;
  o.ambiguous = true;
  return train_normalizer(testing::synthetic_corpus(o), default_sign_rules());
}

}  // namespace

TEST_CASE("segmenter round-trips bit for bit") {
  const auto model = tiny_segmenter();
  std::stringstream s;
  save_segmenter(model, s);
  const auto loaded = load_segmenter(s);
  CHECK(loaded == model);
  CHECK(fingerprint(loaded) == fingerprint(model));
  CHECK(fingerprint(model).size() == 16);
}

TEST_CASE("normaliser round-trips") {
  const auto model = tiny_normalizer();
  std::stringstream s;
  save_normalizer(model, s);
  const auto loaded = load_normalizer(s);
  CHECK(loaded == model);
  CHECK(fingerprint(loaded) == fingerprint(model));
}

TEST_CASE("fingerprints separate different models") {
  auto a = tiny_segmenter();
  auto b = a;
  b.bias += 1e-12;
  CHECK(fingerprint(a) != fingerprint(b));
}

TEST_CASE("container checks magic, kind, version and truncation") {
  std::stringstream seg;
  save_segmenter(tiny_segmenter(), seg);
  const std::string bytes = seg.str();
  CHECK(bytes.rfind(std::string("SCRIPTA\0SEGM", 12), 0) == 0);

  std::stringstream wrong_kind(bytes);
  CHECK_THROWS_AS(load_normalizer(wrong_kind), DataError);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::stringstream s1(bad_magic);
  CHECK_THROWS_AS(load_segmenter(s1), DataError);

  std::string bad_version = bytes;
  bad_version[12] = 9;
  std::stringstream s2(bad_version);
  CHECK_THROWS_AS(load_segmenter(s2), DataError);

  std::stringstream s3(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(load_segmenter(s3), DataError);

  CHECK_THROWS_AS(load_segmenter(std::string("/nonexistent/model.bin")), DataError);
}

TEST_CASE("generic container round-trip") {
  ModelContainer c{"TEST", 3, R"({"a":1})", std::string("\0\1\2", 3)};
  std::stringstream s;
  write_container(s, c);
  const auto back = read_container(s, "TEST", 3);
  CHECK(back.header == c.header);
  CHECK(back.payload == c.payload);
}
