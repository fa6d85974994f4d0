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

// Position curves: mean surprisal at each word position, averaged over the
// documents that reach that position.
//
// Each position keeps a count and exact integer sums of the values and of
// their squares, with every value first rounded to a multiple of 2^-32.
// Integer sums are associative, so folding shards in any order and merging
// them gives the same bits as a single pass.

#ifndef INFODENSITY_CURVES_HPP_
#define INFODENSITY_CURVES_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infodensity/surprisal.hpp"

namespace infodensity {

class PositionAccumulator {
 public:
  static constexpr double kScale = 0x1p32;
  // Values at or above this many bits are rejected so the squared sums
  // cannot overflow.
  static constexpr double kMaxValue = 0x1p24;

  void add(double value);
  void merge(const PositionAccumulator& other);

  std::uint64_t count() const { return count_; }
  double mean() const;
  double sum() const;
  // Unbiased sample variance; NaN when count < 2.
  double variance() const;

  friend bool operator==(const PositionAccumulator&, const PositionAccumulator&) = default;

 private:
  std::uint64_t count_ = 0;
  unsigned __int128 sum_ = 0;
  unsigned __int128 sum_sq_ = 0;
};

struct CurvePoint {
  std::size_t position = 0;  // 0-based word position
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t n_docs = 0;
  double sum = 0.0;

  double standard_error() const;
};

struct PositionCurve {
  static constexpr std::size_t kDefaultMaxPosition = 500;
  static constexpr std::uint64_t kDefaultMinDocs = 50;

  std::vector<CurvePoint> points;  // defined positions only, ascending
  std::size_t max_position = kDefaultMaxPosition;
  std::uint64_t min_docs = kDefaultMinDocs;
  std::uint64_t n_docs = 0;
  std::uint64_t doc_digest = 0;

  const CurvePoint* at(std::size_t position) const;
  std::vector<double> means() const;
};

// Order-independent fingerprint of a set of document ids.
class DocSetDigest {
 public:
  void add(std::string_view id);
  void merge(const DocSetDigest& other) { value_ ^= other.value_; }
  std::uint64_t value() const { return value_; }

 private:
  std::uint64_t value_ = 0;
};

class CurveBuilder {
 public:
  CurveBuilder(std::size_t max_position = PositionCurve::kDefaultMaxPosition,
               std::uint64_t min_docs = PositionCurve::kDefaultMinDocs);

  void add(const SurprisalSequence& seq);
  // Exact; both builders must share max_position.
  void merge(const CurveBuilder& other);

  PositionCurve curve() const;

  std::uint64_t n_docs() const { return n_docs_; }
  const std::vector<PositionAccumulator>& accumulators() const { return acc_; }

  friend bool operator==(const CurveBuilder&, const CurveBuilder&) = default;

 private:
  std::size_t max_position_;
  std::uint64_t min_docs_;
  std::uint64_t n_docs_ = 0;
  std::uint64_t digest_ = 0;
  std::vector<PositionAccumulator> acc_;
};

// Mean surprisal per position over documents longer than the position,
// truncated at max_position; positions with fewer than min_docs documents
// are left undefined. Throws DataError on an empty set and UsageError when
// max_position is 0.
CurveBuilder accumulate_curve(std::span<const SurprisalSequence> seqs,
                              std::size_t max_position = PositionCurve::kDefaultMaxPosition,
                              std::uint64_t min_docs = PositionCurve::kDefaultMinDocs,
                              std::size_t workers = 1);

PositionCurve build_curve(std::span<const SurprisalSequence> seqs,
                          std::size_t max_position = PositionCurve::kDefaultMaxPosition,
                          std::uint64_t min_docs = PositionCurve::kDefaultMinDocs,
                          std::size_t workers = 1);

struct HistogramBucket {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::uint64_t n_docs = 0;
  friend bool operator==(const HistogramBucket&, const HistogramBucket&) = default;
};

// Non-empty buckets [k*bucket, (k+1)*bucket) in increasing order.
std::vector<HistogramBucket> length_histogram(std::span<const std::size_t> lengths,
                                              std::size_t bucket);
std::vector<std::size_t> sequence_lengths(std::span<const SurprisalSequence> seqs);

// Curve CSV: "position,mean_bits,variance,n_docs,sum_bits" with one header
// row, preceded by '#' comment lines that carry the run config and the
// curve metadata. Undefined positions are not written.
void write_curve_csv(std::ostream& out, const PositionCurve& curve,
                     std::string_view header = {});
PositionCurve read_curve_csv(std::istream& in);
PositionCurve read_curve_csv(const std::filesystem::path& path);

void write_histogram_csv(std::ostream& out, std::span<const HistogramBucket> buckets,
                         std::string_view header = {});
std::vector<HistogramBucket> read_histogram_csv(std::istream& in);

}  // namespace infodensity

#endif  // INFODENSITY_CURVES_HPP_
