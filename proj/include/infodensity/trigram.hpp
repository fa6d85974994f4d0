// Copyright 2026 The Infodensity Authors.
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

// Count-based trigram language model with Jelinek-Mercer interpolation:
//
//   P(x | a, b) = l1 * Pml(x | a, b) + l2 * Pml(x | b) + (1 - l1 - l2) * Pml(x)
//
// where each Pml is a ratio of training counts. Every document is scored as
// <s> <s> x_1 ... x_n, so the first word already has a full two-word
// context. Counts are collected per predicted word: for every body position
// the trigram (x_{i-2}, x_{i-1}, x_i), the bigram (x_{i-1}, x_i) and the
// unigram x_i are incremented, and a context count C(a, b) or C(b) is the
// number of times that context preceded a predicted word. The ratios are
// therefore normalized over the vocabulary for every observed context.
//
// Unseen contexts fold their weight into the next lower order: if C(a, b)
// is zero the trigram term reuses the bigram estimate, and if C(b) is zero
// both higher-order terms reuse the unigram estimate. This keeps
// sum_x P(x | a, b) == 1 for every context.

#ifndef INFODENSITY_TRIGRAM_HPP_
#define INFODENSITY_TRIGRAM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "infodensity/corpus.hpp"
#include "infodensity/units.hpp"
#include "infodensity/vocabulary.hpp"

namespace infodensity {

struct TrigramKey {
  WordId a = 0;
  WordId b = 0;
  WordId c = 0;
  friend bool operator==(const TrigramKey&, const TrigramKey&) = default;
  friend auto operator<=>(const TrigramKey&, const TrigramKey&) = default;
};

struct TrigramKeyHash {
  std::size_t operator()(const TrigramKey& k) const noexcept {
    std::uint64_t h = (static_cast<std::uint64_t>(k.a) << 32) | k.b;
    h ^= static_cast<std::uint64_t>(k.c) * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

inline std::uint64_t pack_bigram(WordId a, WordId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct TrigramCounts {
  std::unordered_map<WordId, std::uint64_t> c1;
  std::unordered_map<std::uint64_t, std::uint64_t> c2;  // pack_bigram(a, b)
  std::unordered_map<TrigramKey, std::uint64_t, TrigramKeyHash> c3;
  // Context totals, derived from c2 and c3 but kept alongside since they
  // merge the same way.
  std::unordered_map<WordId, std::uint64_t> context1;         // C(b)
  std::unordered_map<std::uint64_t, std::uint64_t> context2;  // C(a, b)
  std::uint64_t total_tokens = 0;

  std::uint64_t unigram(WordId x) const;
  std::uint64_t bigram(WordId a, WordId b) const;
  std::uint64_t trigram(WordId a, WordId b, WordId c) const;
  std::uint64_t context(WordId b) const;
  std::uint64_t context(WordId a, WordId b) const;

  // Adds one document, scored as <s> <s> ids...
  void add_sequence(std::span<const WordId> ids, WordId boundary);
  void merge(const TrigramCounts& other);

  // Rebuilds context1/context2 from c2/c3.
  void recompute_contexts();

  friend bool operator==(const TrigramCounts&, const TrigramCounts&) = default;
};

// Counts every sequence (unpadded ids; boundary padding is applied here).
// Shards are counted on `workers` threads and merged; the result does not
// depend on the worker count.
TrigramCounts count_corpus(std::span<const std::vector<WordId>> sequences,
                           WordId boundary, std::size_t workers = 1);

// Maximum-likelihood ratio C(context, next) / C(context) for order
// |context| + 1, with the unseen-context fallback described above.
// Throws DataError("untrained model") when the counts are empty.
double mle(const TrigramCounts& counts, int order, std::span<const WordId> context,
           WordId next);

struct Lambdas {
  double trigram = 0.5;
  double bigram = 0.3;
};

class TrigramModel {
 public:
  static constexpr std::string_view kBoundary = "<s>";

  TrigramModel(Vocabulary vocab, TrigramCounts counts, Lambdas lambdas = {});

  // Target id must be a vocabulary id; context ids may also be boundary().
  double prob(WordId a, WordId b, WordId next) const;
  // Throws NumericError if the probability is zero, which only happens for
  // a vocabulary entry with no training occurrences.
  double surprisal(WordId a, WordId b, WordId next, LogBase base = LogBase::kTwo) const;

  // Sum of prob(a, b, x) over every vocabulary id x.
  double total_probability(WordId a, WordId b) const;

  const Vocabulary& vocab() const { return vocab_; }
  const TrigramCounts& counts() const { return counts_; }
  Lambdas lambdas() const { return lambdas_; }
  WordId boundary() const { return static_cast<WordId>(vocab_.size()); }

  // Text format: header lines, the vocabulary, then sorted count triples
  // "order ids... count". save(load(save(m))) is byte-identical.
  void save(std::ostream& out, std::string_view header = {}) const;
  static TrigramModel load(std::istream& in);
  static TrigramModel load(const std::filesystem::path& path);

 private:
  void validate() const;

  Vocabulary vocab_;
  TrigramCounts counts_;
  Lambdas lambdas_;
};

// Lowercased tokens of a rendered document, plus the index of the first
// body token. This is the token stream the trigram pipeline trains and
// scores on.
struct LmTokens {
  std::vector<std::string> tokens;
  std::size_t body_offset = 0;
  bool title_fallback = false;
};

LmTokens lm_tokens(const Document& doc, TitleMode mode);

// Counts `docs` rendered under `mode` against an existing vocabulary.
TrigramModel train_trigram(std::span<const Document> docs, const Vocabulary& vocab,
                           TitleMode mode, Lambdas lambdas, std::size_t workers = 1);

}  // namespace infodensity

#endif  // INFODENSITY_TRIGRAM_HPP_
