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

#include "infodensity/curves.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "infodensity/error.hpp"
#include "infodensity/io.hpp"
#include "infodensity/parallel.hpp"

namespace infodensity {
namespace {

using u128 = unsigned __int128;

constexpr std::string_view kCurveColumns = "position,mean_bits,variance,n_docs,sum_bits";
constexpr std::string_view kHistogramColumns = "bucket_start,bucket_end,n_docs";
constexpr std::string_view kCurveMetaPrefix = "# curve ";

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

void PositionAccumulator::add(double value) {
  if (!std::isfinite(value) || value < 0.0 || value >= kMaxValue) {
    throw NumericError("surprisal value out of range: " + format_double(value));
  }
  const auto q = static_cast<std::uint64_t>(std::nearbyint(value * kScale));
  const u128 q2 = static_cast<u128>(q) * q;
  if (__builtin_add_overflow(sum_sq_, q2, &sum_sq_)) {
    throw NumericError("position accumulator overflow");
  }
  sum_ += q;
  ++count_;
}

void PositionAccumulator::merge(const PositionAccumulator& other) {
  if (__builtin_add_overflow(sum_sq_, other.sum_sq_, &sum_sq_)) {
    throw NumericError("position accumulator overflow");
  }
  sum_ += other.sum_;
  count_ += other.count_;
}

double PositionAccumulator::mean() const {
  if (count_ == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(sum_) / static_cast<double>(count_) / kScale;
}

double PositionAccumulator::sum() const { return static_cast<double>(sum_) / kScale; }

double PositionAccumulator::variance() const {
  if (count_ < 2) return std::numeric_limits<double>::quiet_NaN();
  const u128 n = count_;
  const long double denom =
      static_cast<long double>(count_) * static_cast<long double>(count_ - 1) *
      static_cast<long double>(kScale) * static_cast<long double>(kScale);
  u128 n_sum_sq = 0;
  u128 sum_squared = 0;
  if (!__builtin_mul_overflow(n, sum_sq_, &n_sum_sq) &&
      !__builtin_mul_overflow(sum_, sum_, &sum_squared)) {
    // n * sum(q^2) >= (sum q)^2 by Cauchy-Schwarz, so this cannot wrap.
    return static_cast<double>(static_cast<long double>(n_sum_sq - sum_squared) / denom);
  }
  const long double s = static_cast<long double>(sum_);
  const long double ss = static_cast<long double>(sum_sq_);
  const long double num = static_cast<long double>(count_) * ss - s * s;
  return static_cast<double>(std::max(0.0L, num) / denom);
}

double CurvePoint::standard_error() const {
  if (n_docs < 2 || !std::isfinite(variance)) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(variance / static_cast<double>(n_docs));
}

const CurvePoint* PositionCurve::at(std::size_t position) const {
  auto it = std::lower_bound(points.begin(), points.end(), position,
                             [](const CurvePoint& p, std::size_t pos) { return p.position < pos; });
  return (it != points.end() && it->position == position) ? &*it : nullptr;
}

std::vector<double> PositionCurve::means() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.mean);
  return out;
}

void DocSetDigest::add(std::string_view id) { value_ ^= mix64(fnv1a(id)); }

CurveBuilder::CurveBuilder(std::size_t max_position, std::uint64_t min_docs)
    : max_position_(max_position), min_docs_(min_docs) {
  if (max_position == 0) throw UsageError("max_position must be at least 1");
}

void CurveBuilder::add(const SurprisalSequence& seq) {
  const std::size_t n = std::min(seq.values.size(), max_position_);
  if (acc_.size() < n) acc_.resize(n);
  for (std::size_t i = 0; i < n; ++i) acc_[i].add(seq.values[i]);
  DocSetDigest d;
  d.add(seq.doc_id);
  digest_ ^= d.value();
  ++n_docs_;
}

void CurveBuilder::merge(const CurveBuilder& other) {
  if (other.max_position_ != max_position_) {
    throw UsageError("cannot merge curves with different max_position");
  }
  if (acc_.size() < other.acc_.size()) acc_.resize(other.acc_.size());
  for (std::size_t i = 0; i < other.acc_.size(); ++i) acc_[i].merge(other.acc_[i]);
  digest_ ^= other.digest_;
  n_docs_ += other.n_docs_;
}

PositionCurve CurveBuilder::curve() const {
  PositionCurve out;
  out.max_position = max_position_;
  out.min_docs = min_docs_;
  out.n_docs = n_docs_;
  out.doc_digest = digest_;
  for (std::size_t i = 0; i < acc_.size(); ++i) {
    const auto& a = acc_[i];
    if (a.count() == 0 || a.count() < min_docs_) continue;
    out.points.push_back(CurvePoint{i, a.mean(), a.variance(), a.count(), a.sum()});
  }
  return out;
}

CurveBuilder accumulate_curve(std::span<const SurprisalSequence> seqs, std::size_t max_position,
                              std::uint64_t min_docs, std::size_t workers) {
  if (max_position == 0) throw UsageError("max_position must be at least 1");
  if (seqs.empty()) throw DataError("empty sequence set");
  std::vector<CurveBuilder> shards(std::max<std::size_t>(1, workers),
                                   CurveBuilder(max_position, min_docs));
  const std::size_t used =
      parallel_shards(seqs.size(), workers, [&](std::size_t s, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) shards[s].add(seqs[i]);
      });
  for (std::size_t s = 1; s < used; ++s) shards[0].merge(shards[s]);
  return std::move(shards[0]);
}

PositionCurve build_curve(std::span<const SurprisalSequence> seqs, std::size_t max_position,
                          std::uint64_t min_docs, std::size_t workers) {
  return accumulate_curve(seqs, max_position, min_docs, workers).curve();
}

std::vector<HistogramBucket> length_histogram(std::span<const std::size_t> lengths,
                                              std::size_t bucket) {
  if (bucket < 1) throw UsageError("histogram bucket width must be at least 1");
  std::map<std::size_t, std::uint64_t> counts;
  for (std::size_t len : lengths) ++counts[len / bucket];
  std::vector<HistogramBucket> out;
  out.reserve(counts.size());
  for (const auto& [k, n] : counts) out.push_back({k * bucket, (k + 1) * bucket, n});
  return out;
}

std::vector<std::size_t> sequence_lengths(std::span<const SurprisalSequence> seqs) {
  std::vector<std::size_t> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) out.push_back(s.values.size());
  return out;
}

void write_curve_csv(std::ostream& out, const PositionCurve& curve, std::string_view header) {
  out << header;
  out << kCurveMetaPrefix << "max_position=" << curve.max_position
      << " min_docs=" << curve.min_docs << " n_docs=" << curve.n_docs
      << " doc_set=" << to_hex(curve.doc_digest) << '\n';
  out << kCurveColumns << '\n';
  for (const auto& p : curve.points) {
    out << p.position << ',' << format_double(p.mean) << ',' << format_double(p.variance) << ','
        << p.n_docs << ',' << format_double(p.sum) << '\n';
  }
}

PositionCurve read_curve_csv(std::istream& in) {
  PositionCurve curve;
  bool seen_columns = false;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    const std::string where = "curve line " + std::to_string(number);
    if (line.starts_with(kCurveMetaPrefix)) {
      std::istringstream meta{std::string(line.substr(kCurveMetaPrefix.size()))};
      std::string item;
      while (meta >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw DataError(where + ": malformed metadata");
        const std::string_view key = std::string_view(item).substr(0, eq);
        const std::string_view value = std::string_view(item).substr(eq + 1);
        if (key == "max_position") {
          curve.max_position = static_cast<std::size_t>(parse_int(value, key));
        } else if (key == "min_docs") {
          curve.min_docs = static_cast<std::uint64_t>(parse_int(value, key));
        } else if (key == "n_docs") {
          curve.n_docs = static_cast<std::uint64_t>(parse_int(value, key));
        } else if (key == "doc_set") {
          std::uint64_t v = 0;
          for (char c : value) {
            const int d = (c >= '0' && c <= '9') ? c - '0' : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : -1;
            if (d < 0 || value.size() != 16) throw DataError(where + ": malformed doc_set");
            v = (v << 4) | static_cast<std::uint64_t>(d);
          }
          curve.doc_digest = v;
        }
      }
      return;
    }
    if (line.empty() || is_comment(line)) return;
    if (!seen_columns) {
      // The fifth column is optional for curves produced elsewhere.
      if (line != kCurveColumns && line != "position,mean_bits,variance,n_docs") {
        throw DataError(where + ": expected header '" + std::string(kCurveColumns) + "'");
      }
      seen_columns = true;
      return;
    }
    const auto f = split_commas(line);
    if (f.size() != 4 && f.size() != 5) throw DataError(where + ": wrong number of columns");
    CurvePoint p;
    const auto pos = parse_int(f[0], "position");
    const auto n = parse_int(f[3], "n_docs");
    if (pos < 0 || n < 0) throw DataError(where + ": negative position or count");
    p.position = static_cast<std::size_t>(pos);
    p.mean = parse_double(f[1], "mean_bits");
    p.variance = parse_double(f[2], "variance");
    p.n_docs = static_cast<std::uint64_t>(n);
    p.sum = f.size() == 5 ? parse_double(f[4], "sum_bits") : p.mean * static_cast<double>(n);
    if (!curve.points.empty() && curve.points.back().position >= p.position) {
      throw DataError(where + ": positions must be strictly increasing");
    }
    curve.points.push_back(p);
  });
  if (!seen_columns) throw DataError("curve file has no header row");
  return curve;
}

PositionCurve read_curve_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_curve_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_histogram_csv(std::ostream& out, std::span<const HistogramBucket> buckets,
                         std::string_view header) {
  out << header << kHistogramColumns << '\n';
  for (const auto& b : buckets) out << b.start << ',' << b.end << ',' << b.n_docs << '\n';
}

std::vector<HistogramBucket> read_histogram_csv(std::istream& in) {
  std::vector<HistogramBucket> out;
  bool seen_columns = false;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    if (line.empty() || is_comment(line)) return;
    if (!seen_columns) {
      if (line != kHistogramColumns) {
        throw DataError("histogram line " + std::to_string(number) + ": bad header");
      }
      seen_columns = true;
      return;
    }
    const auto f = split_commas(line);
    if (f.size() != 3) {
      throw DataError("histogram line " + std::to_string(number) + ": wrong number of columns");
    }
    out.push_back({static_cast<std::size_t>(parse_int(f[0], "bucket_start")),
                   static_cast<std::size_t>(parse_int(f[1], "bucket_end")),
                   static_cast<std::uint64_t>(parse_int(f[2], "n_docs"))});
  });
  return out;
}

}  // namespace infodensity
