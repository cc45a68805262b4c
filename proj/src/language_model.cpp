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

#include "scripta/language_model.hpp"

#include <cmath>

#include "scripta/error.hpp"

namespace scripta {

ContextLM::ContextLM(int order) : order_(order) {
  if (order < 1) throw DataError("language model order must be >= 1");
}

void ContextLM::add_count(const Ngram& ngram, uint64_t count) {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) {
    throw DataError("n-gram length out of range for the model order");
  }
  if (count == 0) return;
  for (const auto& t : ngram) {
    if (t == kUnk) throw DataError("the token \"<unk>\" is reserved");
  }
  uint64_t& c = counts_[ngram];
  const bool fresh = c == 0;
  c += count;

  const std::string& word = ngram.back();
  if (word == kBos) return;  // start symbols are context only
  vocab_.insert(word);
  History& h = histories_[Ngram(ngram.begin(), ngram.end() - 1)];
  h.total += count;
  if (fresh) ++h.types;
}

void ContextLM::add_sentence(const std::vector<std::string>& tokens) {
  for (const auto& t : tokens) {
    if (t == kBos) throw DataError("the token \"<s>\" is reserved");
  }
  Ngram padded(static_cast<std::size_t>(order_ - 1), std::string(kBos));
  padded.insert(padded.end(), tokens.begin(), tokens.end());
  for (std::size_t end = 1; end <= padded.size(); ++end) {
    for (int k = 1; k <= order_ && static_cast<std::size_t>(k) <= end; ++k) {
      add_count(Ngram(padded.begin() + static_cast<std::ptrdiff_t>(end) - k,
                      padded.begin() + static_cast<std::ptrdiff_t>(end)),
                1);
    }
  }
}

double ContextLM::prob(std::span<const std::string> context, std::string_view word) const {
  // Uniform base over vocabulary + <unk>, then interpolate upwards.
  double p = 1.0 / static_cast<double>(vocab_.size() + 1);
  const bool known = in_vocab(word);

  Ngram history;
  for (int k = 0; k < order_; ++k) {
    if (k > 0) {
      // Extend the history one token to the left.
      const long idx = static_cast<long>(context.size()) - k;
      history.insert(history.begin(),
                     idx >= 0 ? context[static_cast<std::size_t>(idx)] : std::string(kBos));
    }
    auto h = histories_.find(history);
    if (h == histories_.end() || h->second.total == 0) continue;
    uint64_t c = 0;
    if (known) {
      Ngram ngram = history;
      ngram.emplace_back(word);
      if (auto it = counts_.find(ngram); it != counts_.end()) c = it->second;
    }
    const double total = static_cast<double>(h->second.total);
    const double types = static_cast<double>(h->second.types);
    p = (static_cast<double>(c) + types * p) / (total + types);
  }
  return p;
}

double ContextLM::log_prob(std::span<const std::string> context, std::string_view word) const {
  return std::log(prob(context, word));
}

}  // namespace scripta
