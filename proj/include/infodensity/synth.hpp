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

// Synthetic corpora with known statistics, for validating the pipeline end
// to end.
//
// MarkovSource: word 0 comes from `initial`; word i >= 1 comes from the
// effective transition row (1 - m(i)) T[x_{i-1}] + m(i) / K, where m is
// the modulation toward uniform. With topic copying enabled, word i instead
// repeats word 0 with probability c(i), which puts information in the
// document start that a local-context model cannot see.
//
// ZipfWarmupSource: news-like documents over a Zipf vocabulary whose
// exponent relaxes from exponent_start to exponent_end over the document,
// so rare words become more common later on.
//
// Reproducibility: document k is generated from its own std::mt19937_64
// seeded with document_seed(seed, k), the k-th output of a SplitMix64
// stream started at `seed`, so results do not depend on the worker count.

#ifndef INFODENSITY_SYNTH_HPP_
#define INFODENSITY_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "infodensity/corpus.hpp"
#include "infodensity/scoring.hpp"

namespace infodensity {

// Piecewise-linear function of position through (position, value) knots,
// constant beyond the first and last knot; zero when there are no knots.
class PositionSchedule {
 public:
  struct Knot {
    double position = 0.0;
    double value = 0.0;
  };

  PositionSchedule() = default;
  explicit PositionSchedule(std::vector<Knot> knots);
  static PositionSchedule constant(double value) { return PositionSchedule({{0.0, value}}); }

  double at(std::size_t position) const;
  const std::vector<Knot>& knots() const { return knots_; }
  bool is_zero() const;

 private:
  std::vector<Knot> knots_;
};

struct LengthDistribution {
  enum class Kind { kFixed, kGeometric };
  Kind kind = Kind::kFixed;
  std::size_t fixed = 200;
  double p = 0.005;            // geometric success probability, lengths 1, 2, ...
  std::size_t min_length = 1;
  std::size_t max_length = 0;  // 0 = unbounded
};

struct MarkovSource {
  std::vector<std::vector<double>> transition;  // row-stochastic, K x K
  std::vector<double> initial;                  // sums to 1
  PositionSchedule modulation;                  // in [0, 1]
  PositionSchedule topic_copy;                  // in [0, 1]; zero = plain chain
  LengthDistribution length;

  std::size_t alphabet_size() const { return initial.size(); }
  // Throws DataError unless rows and initial sum to 1 within 1e-12, all
  // entries and schedule values are in [0, 1] and 2 <= K <= 16.
  void validate() const;
  // Word i's distribution given word 0 and word i-1 (i >= 1).
  std::vector<double> conditional(std::size_t position, std::size_t first,
                                  std::size_t previous) const;
};

struct ZipfWarmupSource {
  std::size_t vocab_size = 5000;
  double exponent_start = 1.6;
  double exponent_end = 1.05;
  double warmup_scale = 150.0;     // positions; e-folding length of the relaxation
  double continuation_prob = 0.3;  // follow a fixed phrase successor of the previous word
  std::size_t title_words = 6;
  LengthDistribution length{LengthDistribution::Kind::kGeometric, 0, 1.0 / 300.0, 20, 2000};

  void validate() const;
  double exponent_at(std::size_t position) const;
};

using SynthSource = std::variant<MarkovSource, ZipfWarmupSource>;

SynthSource parse_source_json(std::string_view json);
std::string source_to_json(const SynthSource& source);

std::uint64_t document_seed(std::uint64_t seed, std::uint64_t index);

// Word spelling for symbol k of a Markov source.
std::string markov_word(std::size_t symbol);

std::vector<Document> generate(const MarkovSource& source, std::size_t n_docs,
                               std::uint64_t seed, std::size_t workers = 1,
                               std::string_view id_prefix = "doc");
std::vector<Document> generate(const ZipfWarmupSource& source, std::size_t n_docs,
                               std::uint64_t seed, std::size_t workers = 1,
                               std::string_view id_prefix = "doc");
std::vector<Document> generate(const SynthSource& source, std::size_t n_docs,
                               std::uint64_t seed, std::size_t workers = 1,
                               std::string_view id_prefix = "doc");

// Exact expected surprisal (bits) of word `position` (>= 1) given the
// previous word and, when topic copying is on, word 0; the marginal over
// states is propagated from `initial` in closed form.
double true_entropy(const MarkovSource& source, std::size_t position);
// Entries 1..max_position-1 of the same quantity; entry 0 is H(initial).
std::vector<double> true_entropy_curve(const MarkovSource& source, std::size_t max_position);

// Score records holding the exact natural-log probability of every word
// of `docs` (generated by `source`) given its full history.
std::vector<ScoreRecord> oracle_records(const MarkovSource& source,
                                        std::span<const Document> docs);

}  // namespace infodensity

#endif  // INFODENSITY_SYNTH_HPP_
