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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scripta/abbrev.hpp"
#include "scripta/corpus.hpp"
#include "scripta/error.hpp"
#include "scripta/metrics.hpp"
#include "scripta/model_io.hpp"
#include "scripta/normalizer.hpp"
#include "scripta/parallel.hpp"
#include "scripta/pipeline.hpp"
#include "scripta/segmenter.hpp"
#include "scripta/unicode.hpp"

namespace scripta::cli {
namespace {

namespace fs = std::filesystem;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string fixed(double value, int digits = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << value;
  return s.str();
}

std::string percent_or_dash(double ratio) {
  return std::isnan(ratio) ? std::string("-") : fixed(100 * ratio);
}

std::vector<std::string> read_lines(const std::string& path, std::istream& stdin_stream) {
  auto read = [](std::istream& s) {
    std::vector<std::string> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(s, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!is_valid_utf8(line)) throw LineError(number, "invalid UTF-8");
      lines.push_back(std::move(line));
    }
    return lines;
  };
  if (path == "-") return read(stdin_stream);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  try {
    return read(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

AlignedCorpus read_corpus(const std::string& path, std::istream& stdin_stream) {
  if (path == "-") return parse_ground_truth(stdin_stream);
  return load_corpus(path);
}

// Refuses to write over any of the inputs.
void check_output(const std::string& output, std::initializer_list<std::string> inputs) {
  if (output.empty() || output == "-") return;
  std::error_code ec;
  for (const auto& input : inputs) {
    if (input.empty() || input == "-") continue;
    if (fs::equivalent(output, input, ec)) {
      throw CLI::ValidationError("--output", "output would overwrite input " + input);
    }
  }
}

// Writes through a temporary buffer so a failing command leaves no
// half-written file behind.
void emit(const std::string& output, const std::string& text, std::ostream& out) {
  if (output.empty() || output == "-") {
    out << text;
    return;
  }
  std::ofstream file(output, std::ios::binary);
  if (!file) throw DataError("cannot write " + output);
  file << text;
  if (!file) throw DataError("failed writing " + output);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "expected comma-separated integers, got \"" + text + "\"");
    }
  }
  return out;
}

LexiconSide parse_side(const std::string& name) {
  if (name == "abbr") return LexiconSide::Abbreviated;
  if (name == "exp") return LexiconSide::Expanded;
  throw CLI::ValidationError("--lexicon-side", "expected abbr or exp");
}

std::string env_config() {
  const char* value = std::getenv("SCRIPTA_CONFIG");
  return value ? std::string(value) : std::string();
}

std::string base_dir_of(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

// ---- stats ---------------------------------------------------------------

void add_stats(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("stats", "Line count, abbreviation density and class inventories");
  auto opts = std::make_shared<std::tuple<std::string, std::string, bool, bool>>("", "-", false, false);
  auto& [input, marker, keep, as_json] = *opts;
  cmd->add_option("--input", input, "Ground-truth JSON Lines ('-' for stdin)")->required();
  auto* marker_opt = cmd->add_option("--hyphen-marker", marker, "End-of-line hyphen marker");
  cmd->add_flag("--keep-hyphens", keep, "Skip hyphenation normalisation")->excludes(marker_opt);
  cmd->add_flag("--json", as_json, "Machine-readable output");
  cmd->callback([&run, opts, io] {
    run = [opts, io] {
      auto& [input, marker, keep, as_json] = *opts;
      AlignedCorpus corpus = read_corpus(input, io.in);
      if (!keep) corpus = normalize_hyphenation(corpus, marker);
      nlohmann::ordered_json j;
      j["lines"] = corpus.size();
      j["tokens"] = token_count(corpus);
      j["abbreviation_density"] = corpus.empty() ? 0.0 : abbreviation_density(corpus);
      for (auto kind : {VariantKind::Exp1, VariantKind::Exp2, VariantKind::Abb1, VariantKind::Abb2}) {
        const auto variant = build_variant(corpus, kind);
        const auto graph = class_inventory(variant, ClassMode::Grapheme);
        const auto cps = class_inventory(variant, ClassMode::Codepoint);
        const std::string name(to_string(kind));
        j["classes"][name] = graph.size();
        j["codepoint_classes"][name] = cps.size();
        j["combining_classes"][name] = cps.combining_count;
      }
      if (as_json) {
        io.out << j.dump() << '\n';
        return;
      }
      io.out << "lines: " << corpus.size() << '\n';
      io.out << "tokens: " << token_count(corpus) << '\n';
      io.out << "abbreviation_density: "
             << (corpus.empty() ? std::string("-") : fixed(abbreviation_density(corpus), 4)) << '\n';
      for (const char* key : {"classes", "codepoint_classes", "combining_classes"}) {
        for (const auto& [name, value] : j[key].items()) {
          io.out << key << '.' << name << ": " << value.get<std::size_t>() << '\n';
        }
      }
    };
  });
}

// ---- build-dataset ---------------------------------------------------------

void add_build_dataset(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("build-dataset", "Write one dataset variant as plain text");
  struct Opts {
    std::string input, variant, output, marker = "-";
    bool hyphens = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--input", o->input, "Ground-truth JSON Lines")->required();
  cmd->add_option("--variant", o->variant, "exp1, exp2, abb1 or abb2")
      ->required()
      ->check(CLI::IsMember({"exp1", "exp2", "abb1", "abb2"}, CLI::ignore_case));
  cmd->add_option("--output", o->output, "Output file (default stdout)");
  cmd->add_flag("--normalize-hyphens", o->hyphens, "Merge words split across lines first");
  cmd->add_option("--hyphen-marker", o->marker, "End-of-line hyphen marker");
  cmd->callback([&run, o, io] {
    check_output(o->output, {o->input});
    run = [o, io] {
      AlignedCorpus corpus = read_corpus(o->input, io.in);
      if (o->hyphens) corpus = normalize_hyphenation(corpus, o->marker);
      std::ostringstream text;
      write_variant(build_variant(corpus, parse_variant_kind(o->variant)), text);
      emit(o->output, text.str(), io.out);
    };
  });
}

// ---- split -----------------------------------------------------------------

void add_split(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("split", "Partition a corpus into train/dev/test");
  struct Opts {
    std::string input, counts, prefix, marker = "-";
    uint64_t seed = 0;
    bool shuffle = false, hyphens = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--input", o->input, "Ground-truth JSON Lines")->required();
  cmd->add_option("--counts", o->counts, "train,dev,test line counts")->required();
  cmd->add_option("--output-prefix", o->prefix, "Writes PREFIX.{train,dev,test}.jsonl")->required();
  cmd->add_option("--seed", o->seed, "Shuffle seed")->capture_default_str();
  cmd->add_flag("--shuffle", o->shuffle, "Seeded random membership instead of document order");
  cmd->add_flag("--normalize-hyphens", o->hyphens, "Merge words split across lines first");
  cmd->add_option("--hyphen-marker", o->marker, "End-of-line hyphen marker");
  cmd->callback([&run, o, io] {
    const auto n = parse_int_list(o->counts, "--counts");
    if (n.size() != 3 || n[0] < 0 || n[1] < 0 || n[2] < 0) {
      throw CLI::ValidationError("--counts", "expected three non-negative integers");
    }
    for (const char* part : {".train.jsonl", ".dev.jsonl", ".test.jsonl"}) {
      check_output(o->prefix + part, {o->input});
    }
    run = [o, io, n] {
      AlignedCorpus corpus = read_corpus(o->input, io.in);
      if (o->hyphens) corpus = normalize_hyphenation(corpus, o->marker);
      const SplitCounts counts{static_cast<std::size_t>(n[0]), static_cast<std::size_t>(n[1]),
                               static_cast<std::size_t>(n[2])};
      const Split split = split_corpus(corpus, counts, o->seed, o->shuffle);
      save_corpus(split.train, o->prefix + ".train.jsonl");
      save_corpus(split.dev, o->prefix + ".dev.jsonl");
      save_corpus(split.test, o->prefix + ".test.jsonl");
      io.out << "train: " << split.train.size() << "\ndev: " << split.dev.size()
             << "\ntest: " << split.test.size() << '\n';
    };
  });
}

// ---- segmenter ---------------------------------------------------------------

void add_train_seg(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("train-seg", "Train the word segmenter on spaced text");
  struct Opts {
    std::string train, dev, output, orders = "1,2,3";
    SegmenterConfig config;
    int restarts = 1;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--train", o->train, "Spaced training lines (exp1/abb1 variant file)")->required();
  cmd->add_option("--dev", o->dev, "Spaced dev lines for model selection");
  cmd->add_option("--output", o->output, "Model file")->required();
  cmd->add_option("--radius", o->config.window_radius, "Context window radius")->capture_default_str();
  cmd->add_option("--orders", o->orders, "Character n-gram orders")->capture_default_str();
  cmd->add_option("--bits", o->config.feature_space_bits, "log2 of the feature space")->capture_default_str();
  cmd->add_option("--lr", o->config.learning_rate, "SGD learning rate")->capture_default_str();
  cmd->add_option("--epochs", o->config.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--l2", o->config.l2, "L2 penalty")->capture_default_str();
  cmd->add_option("--threshold", o->config.threshold, "Boundary probability threshold")->capture_default_str();
  cmd->add_option("--seed", o->config.seed, "Training seed")->capture_default_str();
  cmd->add_option("--restarts", o->restarts, "Independent runs; best dev F wins")->capture_default_str();
  cmd->callback([&run, o, io] {
    o->config.ngram_orders = parse_int_list(o->orders, "--orders");
    check_output(o->output, {o->train, o->dev});
    run = [o, io] {
      const auto train = DatasetVariant{VariantKind::Exp1, read_lines(o->train, io.in)};
      DatasetVariant dev{VariantKind::Exp1, {}};
      if (!o->dev.empty()) dev.lines = read_lines(o->dev, io.in);
      TrainingLog log;
      const auto model = train_segmenter(train, dev, o->config, o->restarts, &log);
      save_segmenter(model, o->output);
      const auto& best = log.runs[log.best_run];
      io.out << "best_run: " << log.best_run + 1 << "\nbest_epoch: " << best.best_epoch
             << "\ndev_f: " << fixed(100 * best.dev_f[static_cast<std::size_t>(best.best_epoch - 1)])
             << "\nfingerprint: " << fingerprint(model) << '\n';
    };
  });
}

struct DecodeFlags {
  std::string mode = "threshold", lexicon, side = "abbr";
  double oov_penalty = -8.0;
};

void add_decode_flags(CLI::App* cmd, DecodeFlags& f) {
  cmd->add_option("--mode", f.mode, "threshold or lexicon_dp")
      ->check(CLI::IsMember({"threshold", "lexicon_dp"}))
      ->capture_default_str();
  cmd->add_option("--lexicon", f.lexicon, "Ground truth supplying word counts for lexicon_dp");
  cmd->add_option("--lexicon-side", f.side, "abbr or exp tokens of --lexicon")
      ->check(CLI::IsMember({"abbr", "exp"}))
      ->capture_default_str();
  cmd->add_option("--oov-penalty", f.oov_penalty, "Per-grapheme score of unknown words")
      ->capture_default_str();
}

void check_decode_flags(const DecodeFlags& f) {
  if (f.mode == "lexicon_dp" && f.lexicon.empty()) {
    throw CLI::ValidationError("--lexicon", "lexicon_dp mode requires --lexicon");
  }
  if (f.mode == "threshold" && !f.lexicon.empty()) {
    throw CLI::ValidationError("--lexicon", "--lexicon only applies to lexicon_dp mode");
  }
}

struct Decoder {
  DecodeOptions options;
  std::shared_ptr<WordUnigram> unigram;
};

Decoder make_decoder(const DecodeFlags& f, std::istream& in) {
  Decoder d;
  d.options.mode = parse_segment_mode(f.mode);
  d.options.oov_penalty = f.oov_penalty;
  if (d.options.mode == SegmentMode::LexiconDp) {
    d.unigram = std::make_shared<WordUnigram>(
        unigram_from_lexicon(learn_lexicon(read_corpus(f.lexicon, in)), parse_side(f.side)));
    d.options.unigram = d.unigram.get();
  }
  return d;
}

void add_segment(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("segment", "Insert word breaks into space-free lines");
  struct Opts {
    std::string model, input = "-", output;
    DecodeFlags decode;
    std::optional<double> threshold;
    unsigned jobs = 1;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--model", o->model, "Segmenter model")->required();
  cmd->add_option("--input", o->input, "Unspaced lines ('-' for stdin)")->capture_default_str();
  cmd->add_option("--output", o->output, "Output file (default stdout)");
  cmd->add_option("--threshold", o->threshold, "Override the model's boundary threshold");
  cmd->add_option("--jobs", o->jobs, "Worker threads")->capture_default_str();
  add_decode_flags(cmd, o->decode);
  cmd->callback([&run, o, io] {
    check_decode_flags(o->decode);
    check_output(o->output, {o->input, o->model});
    run = [o, io] {
      auto model = load_segmenter(o->model);
      if (o->threshold) {
        model.config.threshold = *o->threshold;
        validate(model.config);
      }
      const auto decoder = make_decoder(o->decode, io.in);
      const auto lines = read_lines(o->input, io.in);
      std::vector<std::string> out(lines.size());
      parallel_for(lines.size(), o->jobs, [&](std::size_t i) {
        try {
          out[i] = segment(model, lines[i], decoder.options);
        } catch (const DataError& e) {
          throw LineError(i + 1, e.what());
        }
      });
      std::string text;
      for (const auto& l : out) text += l + "\n";
      emit(o->output, text, io.out);
    };
  });
}

void add_eval_seg(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("eval-seg", "Boundary precision/recall/F against spaced gold");
  struct Opts {
    std::string model, gold;
    DecodeFlags decode;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--model", o->model, "Segmenter model")->required();
  cmd->add_option("--gold", o->gold, "Spaced gold lines")->required();
  add_decode_flags(cmd, o->decode);
  cmd->callback([&run, o, io] {
    check_decode_flags(o->decode);
    run = [o, io] {
      const auto model = load_segmenter(o->model);
      const auto decoder = make_decoder(o->decode, io.in);
      const DatasetVariant gold{VariantKind::Exp1, read_lines(o->gold, io.in)};
      const auto r = evaluate_segmenter(model, gold, decoder.options);
      io.out << "f: " << fixed(100 * r.f_score) << "\nprecision: " << fixed(100 * r.precision)
             << "\nrecall: " << fixed(100 * r.recall) << "\nn_gold: " << r.n_gold
             << "\nn_pred: " << r.n_pred << "\nn_correct: " << r.n_correct << '\n';
    };
  });
}

// ---- normaliser --------------------------------------------------------------

void add_train_norm(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("train-norm", "Train the abbreviation expander on aligned text");
  struct Opts {
    std::string train, rules, output, marker = "-";
    NormalizerConfig config;
    bool hyphens = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--train", o->train, "Aligned ground truth (JSON Lines)")->required();
  cmd->add_option("--rules", o->rules, "Sign-rule table (default: built-in table)");
  cmd->add_option("--output", o->output, "Model file")->required();
  cmd->add_option("--order", o->config.lm_order, "Language model order")->capture_default_str();
  cmd->add_option("--lambda", o->config.lambda, "Lexicon weight against the LM")->capture_default_str();
  cmd->add_option("--beam", o->config.beam_width, "Beam width")->capture_default_str();
  cmd->add_option("--lex-smoothing", o->config.lex_smoothing, "Add-k for lexicon counts")
      ->capture_default_str();
  cmd->add_option("--max-candidates", o->config.max_candidates,
                  "Cap on rule-generated forms per unknown token")
      ->capture_default_str();
  cmd->add_flag("--normalize-hyphens", o->hyphens, "Merge words split across lines first");
  cmd->add_option("--hyphen-marker", o->marker, "End-of-line hyphen marker");
  cmd->callback([&run, o, io] {
    check_output(o->output, {o->train, o->rules});
    run = [o, io] {
      AlignedCorpus corpus = read_corpus(o->train, io.in);
      if (o->hyphens) corpus = normalize_hyphenation(corpus, o->marker);
      auto rules = o->rules.empty() ? default_sign_rules() : load_sign_rules(o->rules);
      const auto model = train_normalizer(corpus, std::move(rules), o->config);
      save_normalizer(model, o->output);
      io.out << "abbreviations: " << model.lexicon.forward().size()
             << "\nvocabulary: " << model.lm.vocab().size() << "\nrules: " << model.rules.size()
             << "\nfingerprint: " << fingerprint(model) << '\n';
    };
  });
}

void add_normalize(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("normalize", "Expand abbreviations in spaced lines");
  struct Opts {
    std::string model, input = "-", output;
    std::optional<int> beam;
    std::optional<double> lambda;
    unsigned jobs = 1;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--model", o->model, "Normaliser model")->required();
  cmd->add_option("--input", o->input, "Spaced abbreviated lines ('-' for stdin)")->capture_default_str();
  cmd->add_option("--output", o->output, "Output file (default stdout)");
  cmd->add_option("--beam", o->beam, "Override the beam width");
  cmd->add_option("--lambda", o->lambda, "Override the lexicon weight");
  cmd->add_option("--jobs", o->jobs, "Worker threads")->capture_default_str();
  cmd->callback([&run, o, io] {
    check_output(o->output, {o->input, o->model});
    run = [o, io] {
      auto model = load_normalizer(o->model);
      if (o->beam) model.config.beam_width = *o->beam;
      if (o->lambda) model.config.lambda = *o->lambda;
      validate(model.config);
      const auto lines = read_lines(o->input, io.in);
      std::vector<std::string> out(lines.size());
      parallel_for(lines.size(), o->jobs, [&](std::size_t i) {
        try {
          out[i] = normalize_line(model, lines[i]);
        } catch (const DataError& e) {
          throw LineError(i + 1, e.what());
        }
      });
      std::string text;
      for (const auto& l : out) text += l + "\n";
      emit(o->output, text, io.out);
    };
  });
}

void add_eval_norm(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("eval-norm", "Token accuracy by category on aligned test data");
  struct Opts {
    std::string model, test, train;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--model", o->model, "Normaliser model")->required();
  cmd->add_option("--test", o->test, "Aligned test ground truth")->required();
  cmd->add_option("--train", o->train, "Training ground truth defining known tokens "
                                         "(default: the model's own lexicon)");
  cmd->callback([&run, o, io] {
    run = [o, io] {
      const auto model = load_normalizer(o->model);
      const auto test = read_corpus(o->test, io.in);
      const auto lexicon = o->train.empty() ? model.lexicon : learn_lexicon(load_corpus(o->train));
      const auto r = evaluate_normalizer(model, test, lexicon);
      io.out << "category         acc     n\n";
      auto row = [&](const char* name, const Tally& t) {
        io.out << std::left << std::setw(15) << name << std::right << std::setw(7)
               << percent_or_dash(t.accuracy()) << std::setw(6) << t.total << '\n';
      };
      row("all", r.all);
      row("known", r.known);
      row("unknown", r.unknown);
      row("ambiguous", r.ambiguous);
      row("unknown_target", r.unknown_target);
    };
  });
}

// ---- noise / pipeline / report / eval ----------------------------------------

void add_noise(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("noise", "Corrupt lines with simulated recognition errors");
  struct Opts {
    std::string input = "-", output, charset;
    NoiseConfig noise;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--input", o->input, "Input lines ('-' for stdin)")->capture_default_str();
  cmd->add_option("--output", o->output, "Output file (default stdout)");
  cmd->add_option("--sub", o->noise.sub_rate, "Substitution rate")->capture_default_str();
  cmd->add_option("--del", o->noise.del_rate, "Deletion rate")->capture_default_str();
  cmd->add_option("--ins", o->noise.ins_rate, "Insertion rate")->capture_default_str();
  cmd->add_option("--charset", o->charset, "Replacement graphemes (default: those of the input)");
  cmd->add_option("--seed", o->noise.seed, "Noise seed")->capture_default_str();
  cmd->callback([&run, o, io] {
    check_output(o->output, {o->input});
    run = [o, io] {
      const auto lines = read_lines(o->input, io.in);
      NoiseConfig noise = o->noise;
      noise.charset = o->charset.empty() ? grapheme_charset(lines) : graphemes(o->charset);
      validate(noise);
      std::string text;
      for (std::size_t i = 0; i < lines.size(); ++i) text += noise_stage(lines[i], noise, i) + "\n";
      emit(o->output, text, io.out);
    };
  });
}

void add_pipeline(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("pipeline", "Run noise, segmentation and normalisation on lines");
  struct Opts {
    std::string config, input = "-", output;
    unsigned jobs = 1;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--config", o->config, "Pipeline config (default: $SCRIPTA_CONFIG)");
  cmd->add_option("--input", o->input, "Input lines ('-' for stdin)")->capture_default_str();
  cmd->add_option("--output", o->output, "Output file (default: config 'output' or stdout)");
  cmd->add_option("--jobs", o->jobs, "Worker threads")->capture_default_str();
  cmd->callback([&run, o, io] {
    if (o->config.empty()) o->config = env_config();
    if (o->config.empty()) {
      throw CLI::ValidationError("--config", "no --config given and SCRIPTA_CONFIG is unset");
    }
    run = [o, io] {
      const auto config = load_pipeline_config(o->config);
      std::string output = o->output;
      if (output.empty() && !config.output.empty()) {
        output = (fs::path(base_dir_of(o->config)) / config.output).string();
      }
      check_output(output, {o->input, o->config});
      const auto models = load_models(config, base_dir_of(o->config));
      const auto lines = number_lines(read_lines(o->input, io.in));
      std::string text;
      for (const auto& l : run_pipeline(config, models, lines, o->jobs)) text += l + "\n";
      emit(output, text, io.out);
    };
  });
}

void add_report(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("report", "Run a setup matrix on test data and render CER/WER");
  struct Opts {
    std::string matrix, test, output, format = "text";
    unsigned jobs = 1;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--matrix", o->matrix, "JSON array of pipeline configs (default: $SCRIPTA_CONFIG)");
  cmd->add_option("--test", o->test, "Aligned test ground truth")->required();
  cmd->add_option("--format", o->format, "text, csv or markdown")
      ->check(CLI::IsMember({"text", "csv", "markdown"}))
      ->capture_default_str();
  cmd->add_option("--output", o->output, "Output file (default stdout)");
  cmd->add_option("--jobs", o->jobs, "Setups run concurrently")->capture_default_str();
  cmd->callback([&run, o, io] {
    if (o->matrix.empty()) o->matrix = env_config();
    if (o->matrix.empty()) {
      throw CLI::ValidationError("--matrix", "no --matrix given and SCRIPTA_CONFIG is unset");
    }
    check_output(o->output, {o->matrix, o->test});
    run = [o, io] {
      const auto configs = load_pipeline_matrix(o->matrix);
      const auto test = read_corpus(o->test, io.in);
      std::vector<Setup> matrix;
      for (const auto& c : configs) matrix.push_back({c, load_models(c, base_dir_of(o->matrix))});
      const auto report = run_experiment(matrix, test, o->jobs);
      emit(o->output, render_report(report, parse_report_format(o->format)), io.out);
    };
  });
}

void add_eval(CLI::App& app, Streams io, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("eval", "Corpus CER and WER of hypothesis lines");
  struct Opts {
    std::string hyp, ref, unit = "codepoint";
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--hyp", o->hyp, "Hypothesis lines")->required();
  cmd->add_option("--ref", o->ref, "Reference lines")->required();
  cmd->add_option("--unit", o->unit, "CER unit: codepoint or grapheme")
      ->check(CLI::IsMember({"codepoint", "grapheme"}))
      ->capture_default_str();
  cmd->callback([&run, o, io] {
    run = [o, io] {
      const auto hyp = read_lines(o->hyp, io.in);
      const auto ref = read_lines(o->ref, io.in);
      const auto unit = o->unit == "grapheme" ? CharUnit::Grapheme : CharUnit::Codepoint;
      io.out << "CER: " << fixed(corpus_cer(hyp, ref, unit)) << "\nWER: " << fixed(corpus_wer(hyp, ref))
             << '\n';
    };
  });
}

void print_error(std::ostream& err, const char* kind, const std::string& message) {
  nlohmann::json j;
  j["error"] = kind;
  j["message"] = message;
  err << j.dump() << '\n';
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Normalisation toolkit for abbreviated medieval transcriptions", "scripta"};
  app.require_subcommand(1);
  app.fallthrough(false);
  const Streams io{in, out, err};
  std::function<void()> run;

  add_stats(app, io, run);
  add_build_dataset(app, io, run);
  add_split(app, io, run);
  add_train_seg(app, io, run);
  add_segment(app, io, run);
  add_eval_seg(app, io, run);
  add_train_norm(app, io, run);
  add_normalize(app, io, run);
  add_eval_norm(app, io, run);
  add_noise(app, io, run);
  add_pipeline(app, io, run);
  add_report(app, io, run);
  add_eval(app, io, run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    err << app.help();
    return kUsage;
  } catch (const DataError& e) {
    print_error(err, "data", e.what());
    return kDataError;
  }

  try {
    if (run) run();
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    print_error(err, "data", e.what());
    return kDataError;
  }
  return kOk;
}

}  // namespace scripta::cli
