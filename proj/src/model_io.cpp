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

#include "scripta/model_io.hpp"

#include <bit>
#include <cstring>
#include <functional>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "scripta/error.hpp"
#include "scripta/hash.hpp"

namespace scripta {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr char kMagic[8] = {'S', 'C', 'R', 'I', 'P', 'T', 'A', '\0'};

template <typename U>
void put_le(std::string& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

template <typename U>
U get_le(std::string_view in, std::size_t& pos) {
  if (pos + sizeof(U) > in.size()) throw DataError("model file truncated");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += sizeof(U);
  return value;
}

template <typename U>
U read_le(std::istream& in) {
  char buf[sizeof(U)];
  if (!in.read(buf, sizeof(U))) throw DataError("model file truncated");
  std::size_t pos = 0;
  return get_le<U>(std::string_view(buf, sizeof(U)), pos);
}

std::string read_bytes(std::istream& in, uint64_t n) {
  // Read in bounded chunks so a corrupt length fails as truncation.
  std::string out;
  constexpr uint64_t kChunk = 1 << 20;
  while (n > 0) {
    const auto take = static_cast<std::size_t>(std::min(n, kChunk));
    const std::size_t old = out.size();
    out.resize(old + take);
    if (!in.read(out.data() + old, static_cast<std::streamsize>(take))) {
      throw DataError("model file truncated");
    }
    n -= take;
  }
  return out;
}

json parse_header(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt model header: ") + e.what());
  }
}

ordered_json config_to_json(const SegmenterConfig& c) {
  ordered_json j;
  j["window_radius"] = c.window_radius;
  j["ngram_orders"] = c.ngram_orders;
  j["feature_space_bits"] = c.feature_space_bits;
  j["learning_rate"] = c.learning_rate;
  j["epochs"] = c.epochs;
  j["l2"] = c.l2;
  j["threshold"] = c.threshold;
  j["seed"] = c.seed;
  return j;
}

SegmenterConfig segmenter_config_from_json(const json& j) {
  SegmenterConfig c;
  c.window_radius = j.at("window_radius").get<int>();
  c.ngram_orders = j.at("ngram_orders").get<std::vector<int>>();
  c.feature_space_bits = j.at("feature_space_bits").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.l2 = j.at("l2").get<double>();
  c.threshold = j.at("threshold").get<double>();
  c.seed = j.at("seed").get<uint64_t>();
  validate(c);
  return c;
}

std::string to_bytes(const std::function<void(std::ostream&)>& write) {
  std::ostringstream out(std::ios::binary);
  write(out);
  return out.str();
}

}  // namespace

void write_container(std::ostream& out, const ModelContainer& c) {
  if (c.kind.size() != 4) throw DataError("container kind must be 4 bytes");
  std::string bytes(kMagic, sizeof kMagic);
  bytes += c.kind;
  put_le<uint32_t>(bytes, c.version);
  put_le<uint64_t>(bytes, c.header.size());
  bytes += c.header;
  put_le<uint64_t>(bytes, c.payload.size());
  bytes += c.payload;
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed to write model");
}

ModelContainer read_container(std::istream& in, std::string_view expected_kind,
                              uint32_t expected_version) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw DataError("not a scripta model file");
  }
  ModelContainer c;
  c.kind = read_bytes(in, 4);
  if (c.kind != expected_kind) {
    throw DataError("model kind is " + c.kind + ", expected " + std::string(expected_kind));
  }
  c.version = read_le<uint32_t>(in);
  if (c.version != expected_version) {
    throw DataError(c.kind + " model format version " + std::to_string(c.version) +
                    " is not supported (expected " + std::to_string(expected_version) + ")");
  }
  c.header = read_bytes(in, read_le<uint64_t>(in));
  c.payload = read_bytes(in, read_le<uint64_t>(in));
  return c;
}

void save_segmenter(const SegmenterModel& model, std::ostream& out) {
  ordered_json header;
  header["config"] = config_to_json(model.config);
  header["bias"] = model.bias;
  header["trained_on"] = model.trained_on;

  ModelContainer c{"SEGM", SegmenterModel::kFormatVersion, {}, {}};
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    if (model.weights[i] == 0.0) continue;
    put_le<uint32_t>(c.payload, static_cast<uint32_t>(i));
    put_le<uint64_t>(c.payload, std::bit_cast<uint64_t>(model.weights[i]));
  }
  // Bias is stored bit-exactly next to the JSON copy.
  header["bias_bits"] = hex64(std::bit_cast<uint64_t>(model.bias));
  c.header = header.dump();
  write_container(out, c);
}

SegmenterModel load_segmenter(std::istream& in) {
  const auto c = read_container(in, "SEGM", SegmenterModel::kFormatVersion);
  const json header = parse_header(c.header);
  SegmenterModel model;
  try {
    model = make_untrained_model(segmenter_config_from_json(header.at("config")));
    model.bias = std::bit_cast<double>(
        std::stoull(header.at("bias_bits").get<std::string>(), nullptr, 16));
    model.trained_on = header.at("trained_on").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt segmenter header: ") + e.what());
  }
  std::size_t pos = 0;
  if (c.payload.size() % 12 != 0) throw DataError("corrupt segmenter payload");
  while (pos < c.payload.size()) {
    const auto index = get_le<uint32_t>(c.payload, pos);
    const auto bits = get_le<uint64_t>(c.payload, pos);
    if (index >= model.weights.size()) throw DataError("segmenter weight index out of range");
    model.weights[index] = std::bit_cast<double>(bits);
  }
  return model;
}

void save_normalizer(const NormalizerModel& model, std::ostream& out) {
  ordered_json header;
  ordered_json config;
  config["lm_order"] = model.config.lm_order;
  config["lambda"] = model.config.lambda;
  config["beam_width"] = model.config.beam_width;
  config["lex_smoothing"] = model.config.lex_smoothing;
  config["max_candidates"] = model.config.max_candidates;
  header["config"] = std::move(config);

  ordered_json lexicon = ordered_json::array();
  for (const auto& [abbr, targets] : model.lexicon.forward()) {
    for (const auto& [exp, n] : targets) lexicon.push_back({abbr, exp, n});
  }
  header["lexicon"] = std::move(lexicon);

  ordered_json rules = ordered_json::array();
  for (const auto& r : model.rules) {
    rules.push_back({{"pattern", r.pattern},
                     {"expansions", r.expansions},
                     {"position", to_string(r.position)},
                     {"category", to_string(r.sign_class.category)},
                     {"ambiguous", r.sign_class.ambiguous}});
  }
  header["rules"] = std::move(rules);

  ordered_json ngrams = ordered_json::array();
  for (const auto& [ngram, n] : model.lm.counts()) ngrams.push_back({ngram, n});
  header["lm_ngrams"] = std::move(ngrams);

  write_container(out, {"NORM", NormalizerModel::kFormatVersion, header.dump(), {}});
}

NormalizerModel load_normalizer(std::istream& in) {
  const auto c = read_container(in, "NORM", NormalizerModel::kFormatVersion);
  const json header = parse_header(c.header);
  try {
    NormalizerModel model;
    const auto& config = header.at("config");
    model.config.lm_order = config.at("lm_order").get<int>();
    model.config.lambda = config.at("lambda").get<double>();
    model.config.beam_width = config.at("beam_width").get<int>();
    model.config.lex_smoothing = config.at("lex_smoothing").get<double>();
    model.config.max_candidates = config.at("max_candidates").get<std::size_t>();
    validate(model.config);

    for (const auto& entry : header.at("lexicon")) {
      model.lexicon.add(entry.at(0).get<std::string>(), entry.at(1).get<std::string>(),
                        entry.at(2).get<uint64_t>());
    }
    for (const auto& r : header.at("rules")) {
      SignRule rule;
      rule.pattern = r.at("pattern").get<std::string>();
      rule.expansions = r.at("expansions").get<std::vector<std::string>>();
      rule.position = parse_position(r.at("position").get<std::string>());
      rule.sign_class.category = parse_sign_category(r.at("category").get<std::string>());
      rule.sign_class.ambiguous = r.at("ambiguous").get<bool>();
      validate_rule(rule);
      model.rules.push_back(std::move(rule));
    }
    model.lm = ContextLM(model.config.lm_order);
    for (const auto& entry : header.at("lm_ngrams")) {
      model.lm.add_count(entry.at(0).get<ContextLM::Ngram>(), entry.at(1).get<uint64_t>());
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt normaliser header: ") + e.what());
  }
}

void save_segmenter(const SegmenterModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  save_segmenter(model, out);
}

SegmenterModel load_segmenter(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  try {
    return load_segmenter(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void save_normalizer(const NormalizerModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  save_normalizer(model, out);
}

NormalizerModel load_normalizer(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  try {
    return load_normalizer(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string fingerprint(const SegmenterModel& model) {
  return hex64(fnv1a64(to_bytes([&](std::ostream& o) { save_segmenter(model, o); })));
}

std::string fingerprint(const NormalizerModel& model) {
  return hex64(fnv1a64(to_bytes([&](std::ostream& o) { save_normalizer(model, o); })));
}

}  // namespace scripta
