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

// Mann-Kendall test for a monotonic trend.
//
//   S      = sum_{i<j} sgn(v_j - v_i)
//   Var(S) = [n(n-1)(2n+5) - sum_ties t(t-1)(2t+5)] / 18
//   Z      = (S - 1)/sqrt(Var) if S > 0, (S + 1)/sqrt(Var) if S < 0, else 0
//   p      = 2 (1 - Phi(|Z|))
//
// No correction for serial correlation is applied.

#ifndef INFODENSITY_TREND_HPP_
#define INFODENSITY_TREND_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "infodensity/curves.hpp"

namespace infodensity {

enum class TrendDirection { kIncreasing, kDecreasing, kNone };

std::string_view trend_direction_name(TrendDirection d);

struct TrendReport {
  std::int64_t s_statistic = 0;
  double variance_s = 0.0;
  double z_score = 0.0;
  double p_value = 1.0;  // two-sided
  double alpha = 0.05;
  // Significant direction: kNone whenever p_value >= alpha.
  TrendDirection direction = TrendDirection::kNone;
  // Sign of S regardless of significance.
  TrendDirection raw_direction = TrendDirection::kNone;
  std::size_t n = 0;
  // Curve positions [first_position, x_cutoff) that were tested; both 0
  // when the report comes from a bare sequence.
  std::size_t first_position = 0;
  std::size_t x_cutoff = 0;
};

inline constexpr double kDefaultAlpha = 0.05;

// Throws DataError("sequence too short") for n < 3 and DataError for
// non-finite values; UsageError when alpha is not in (0, 1).
TrendReport mann_kendall(std::span<const double> values, double alpha = kDefaultAlpha);

// S alone, in O(n log n) by merge counting.
std::int64_t mann_kendall_s(std::span<const double> values);

// Runs the test on the defined means at positions [first_position, x_cutoff).
TrendReport trend_of_curve(const PositionCurve& curve, std::size_t x_cutoff,
                           double alpha = kDefaultAlpha, std::size_t first_position = 0);

// Labels for a results-table row.
struct TrendLabels {
  std::string dataset;
  std::string model;
  std::string fine_tuned = "n/a";
};

// One JSON object (no trailing newline).
std::string trend_report_json(const TrendReport& report, const TrendLabels& labels);
// One tab-separated line: dataset, model, fine-tuned, direction, S, Z, p, n,
// positions.
std::string trend_report_text(const TrendReport& report, const TrendLabels& labels);

}  // namespace infodensity

#endif  // INFODENSITY_TREND_HPP_
