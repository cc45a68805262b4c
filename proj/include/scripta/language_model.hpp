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
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scripta {

// Token n-gram model over expanded words with interpolated Witten-Bell
// smoothing. The event space is the training vocabulary plus one unknown
// symbol; P(.|context) sums to 1 over it for every context.
class ContextLM {
 public:
  static constexpr std::string_view kBos = "<s>";
  static constexpr std::string_view kUnk = "<unk>";

  using Ngram = std::vector<std::string>;

  explicit ContextLM(int order = 3);

  int order() const noexcept { return order_; }

  // Counts every k-gram (k <= order) of the sentence left-padded with
  // order-1 start symbols, so each k-gram's prefix is itself counted.
  void add_sentence(const std::vector<std::string>& tokens);
  void add_count(const Ngram& ngram, uint64_t count);

  // `context` is the full left history; only its last order-1 tokens
  // matter and short histories are padded with start symbols.
  double prob(std::span<const std::string> context, std::string_view word) const;
  double log_prob(std::span<const std::string> context, std::string_view word) const;

  bool in_vocab(std::string_view word) const { return vocab_.find(word) != vocab_.end(); }
  const std::set<std::string, std::less<>>& vocab() const noexcept { return vocab_; }
  const std::map<Ngram, uint64_t>& counts() const noexcept { return counts_; }

  friend bool operator==(const ContextLM& a, const ContextLM& b) {
    return a.order_ == b.order_ && a.counts_ == b.counts_;
  }

 private:
  struct History {
    uint64_t total = 0;  // tokens seen after this history
    uint64_t types = 0;  // distinct tokens seen after it
  };

  int order_;
  std::map<Ngram, uint64_t> counts_;
  std::map<Ngram, History> histories_;
  std::set<std::string, std::less<>> vocab_;
};

}  // namespace scripta
