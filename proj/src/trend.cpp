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

#include "infodensity/trend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "infodensity/error.hpp"
#include "infodensity/io.hpp"

namespace infodensity {
namespace {

// Sorts v[lo, hi) and returns the S contribution of pairs inside it.
std::int64_t merge_count(std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t s = merge_count(v, lo, mid) + merge_count(v, mid, hi);
  // Every left element precedes every right element in the original order.
  std::size_t less = lo;      // left elements < current right element
  std::size_t less_eq = lo;   // left elements <= current right element
  for (std::size_t r = mid; r < hi; ++r) {
    while (less < mid && v[less] < v[r]) ++less;
    while (less_eq < mid && v[less_eq] <= v[r]) ++less_eq;
    s += static_cast<std::int64_t>(less - lo) - static_cast<std::int64_t>(mid - less_eq);
  }
  std::inplace_merge(v.begin() + static_cast<std::ptrdiff_t>(lo),
                     v.begin() + static_cast<std::ptrdiff_t>(mid),
                     v.begin() + static_cast<std::ptrdiff_t>(hi));
  return s;
}

}  // namespace

std::string_view trend_direction_name(TrendDirection d) {
  switch (d) {
    case TrendDirection::kIncreasing: return "increasing";
    case TrendDirection::kDecreasing: return "decreasing";
    case TrendDirection::kNone: return "none";
  }
  return "none";
}

std::int64_t mann_kendall_s(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  return merge_count(v, 0, v.size());
}

TrendReport mann_kendall(std::span<const double> values, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must be in (0, 1)");
  if (values.size() < 3) throw DataError("sequence too short");
  for (double x : values) {
    if (!std::isfinite(x)) throw DataError("trend input contains a non-finite value");
  }

  TrendReport r;
  r.alpha = alpha;
  r.n = values.size();
  r.s_statistic = mann_kendall_s(values);

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) tie_term += t * (t - 1.0) * (2.0 * t + 5.0);
    i = j;
  }
  const double n = static_cast<double>(r.n);
  r.variance_s = (n * (n - 1.0) * (2.0 * n + 5.0) - tie_term) / 18.0;

  const double s = static_cast<double>(r.s_statistic);
  if (r.s_statistic > 0 && r.variance_s > 0.0) {
    r.z_score = (s - 1.0) / std::sqrt(r.variance_s);
  } else if (r.s_statistic < 0 && r.variance_s > 0.0) {
    r.z_score = (s + 1.0) / std::sqrt(r.variance_s);
  }
  r.p_value = std::clamp(std::erfc(std::abs(r.z_score) / std::numbers::sqrt2), 0.0, 1.0);

  r.raw_direction = r.s_statistic > 0   ? TrendDirection::kIncreasing
                    : r.s_statistic < 0 ? TrendDirection::kDecreasing
                                        : TrendDirection::kNone;
  if (r.p_value < alpha && r.z_score != 0.0) {
    r.direction = r.z_score > 0.0 ? TrendDirection::kIncreasing : TrendDirection::kDecreasing;
  }
  return r;
}

TrendReport trend_of_curve(const PositionCurve& curve, std::size_t x_cutoff, double alpha,
                           std::size_t first_position) {
  std::vector<double> values;
  for (const auto& p : curve.points) {
    if (p.position >= first_position && p.position < x_cutoff) values.push_back(p.mean);
  }
  TrendReport r = mann_kendall(values, alpha);
  r.first_position = first_position;
  r.x_cutoff = x_cutoff;
  return r;
}

std::string trend_report_json(const TrendReport& report, const TrendLabels& labels) {
  nlohmann::ordered_json j;
  j["dataset"] = labels.dataset;
  j["model"] = labels.model;
  j["fine_tuned"] = labels.fine_tuned;
  j["direction"] = trend_direction_name(report.direction);
  j["raw_direction"] = trend_direction_name(report.raw_direction);
  j["s"] = report.s_statistic;
  j["var_s"] = report.variance_s;
  j["z"] = report.z_score;
  j["p"] = report.p_value;
  j["alpha"] = report.alpha;
  j["n"] = report.n;
  j["first_position"] = report.first_position;
  j["cutoff"] = report.x_cutoff;
  j["test"] = "mann-kendall, two-sided, normal approximation with continuity correction";
  j["notes"] = "per-position mean curve; no serial-correlation correction; "
               "result depends on the position cutoff";
  return j.dump();
}

std::string trend_report_text(const TrendReport& report, const TrendLabels& labels) {
  std::string out;
  auto field = [&](std::string_view s) {
    if (!out.empty()) out += '\t';
    out += s;
  };
  field(labels.dataset.empty() ? "-" : labels.dataset);
  field(labels.model.empty() ? "-" : labels.model);
  field(labels.fine_tuned);
  field(trend_direction_name(report.direction));
  field("S=" + std::to_string(report.s_statistic));
  field("Z=" + format_double(report.z_score));
  field("p=" + format_double(report.p_value));
  field("n=" + std::to_string(report.n));
  field("positions=[" + std::to_string(report.first_position) + "," +
        std::to_string(report.x_cutoff) + ")");
  return out;
}

}  // namespace infodensity
