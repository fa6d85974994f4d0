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

#include "infodensity/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "infodensity/error.hpp"
#include "infodensity/parallel.hpp"

namespace infodensity {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kMaxAlphabet = 16;
constexpr std::size_t kZipfLevels = 64;

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

std::size_t draw_length(const LengthDistribution& d, std::mt19937_64& rng) {
  std::size_t len = d.fixed;
  if (d.kind == LengthDistribution::Kind::kGeometric) {
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    len = 1 + static_cast<std::size_t>(std::floor(std::log(u) / std::log1p(-d.p)));
  }
  len = std::max(len, d.min_length);
  if (d.max_length > 0) len = std::min(len, d.max_length);
  return len;
}

std::size_t draw_categorical(std::span<const double> probs, double u) {
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] <= 0.0) continue;
    acc += probs[j];
    last = j;
    if (u < acc) return j;
  }
  return last;
}

double entropy_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

void check_probability_vector(std::span<const double> v, const std::string& what) {
  double sum = 0.0;
  for (double p : v) {
    if (!(p >= 0.0 && p <= 1.0)) throw DataError(what + " has an entry outside [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DataError(what + " sums to " + std::to_string(sum) + ", not 1");
  }
}

void check_schedule(const PositionSchedule& s, const std::string& what) {
  for (const auto& k : s.knots()) {
    if (!(k.value >= 0.0 && k.value <= 1.0)) throw DataError(what + " must stay within [0, 1]");
  }
}

void check_length(const LengthDistribution& d) {
  if (d.kind == LengthDistribution::Kind::kGeometric && !(d.p > 0.0 && d.p <= 1.0)) {
    throw DataError("geometric length parameter must be in (0, 1]");
  }
  if (d.kind == LengthDistribution::Kind::kFixed && d.fixed == 0) {
    throw DataError("fixed document length must be at least 1");
  }
  if (d.max_length > 0 && d.max_length < d.min_length) {
    throw DataError("max length is below min length");
  }
}

std::string doc_id(std::string_view prefix, std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return std::string(prefix) + digits;
}

std::string zipf_word(std::size_t rank) { return "z" + std::to_string(rank); }

// Inverse-CDF tables for a ladder of exponents between start and end.
struct ZipfTables {
  std::vector<double> exponents;
  std::vector<std::vector<double>> cdf;

  explicit ZipfTables(const ZipfWarmupSource& src) {
    exponents.resize(kZipfLevels);
    cdf.resize(kZipfLevels);
    for (std::size_t l = 0; l < kZipfLevels; ++l) {
      const double t = static_cast<double>(l) / static_cast<double>(kZipfLevels - 1);
      exponents[l] = src.exponent_end + t * (src.exponent_start - src.exponent_end);
      auto& c = cdf[l];
      c.resize(src.vocab_size);
      double acc = 0.0;
      for (std::size_t r = 0; r < src.vocab_size; ++r) {
        acc += std::pow(static_cast<double>(r + 1), -exponents[l]);
        c[r] = acc;
      }
      for (double& x : c) x /= acc;
    }
  }

  std::size_t level_for(double exponent, const ZipfWarmupSource& src) const {
    const double span = src.exponent_start - src.exponent_end;
    if (span == 0.0) return 0;
    const double t = (exponent - src.exponent_end) / span;
    const long l = std::lround(t * static_cast<double>(kZipfLevels - 1));
    return static_cast<std::size_t>(std::clamp(l, 0L, static_cast<long>(kZipfLevels - 1)));
  }

  std::size_t draw(std::size_t level, double u) const {
    const auto& c = cdf[level];
    auto it = std::upper_bound(c.begin(), c.end(), u);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - c.begin(),
                                                             static_cast<std::ptrdiff_t>(c.size() - 1)));
  }
};

Json schedule_json(const PositionSchedule& s) {
  Json arr = Json::array();
  for (const auto& k : s.knots()) arr.push_back(Json::array({k.position, k.value}));
  return arr;
}

PositionSchedule schedule_from(const Json& j, const char* what) {
  if (j.is_number()) return PositionSchedule::constant(j.get<double>());
  if (!j.is_array()) throw DataError(std::string(what) + " must be a number or [[pos, value], ...]");
  std::vector<PositionSchedule::Knot> knots;
  for (const auto& k : j) {
    if (!k.is_array() || k.size() != 2) {
      throw DataError(std::string(what) + " knots must be [position, value] pairs");
    }
    knots.push_back({k[0].get<double>(), k[1].get<double>()});
  }
  return PositionSchedule(std::move(knots));
}

Json length_json(const LengthDistribution& d) {
  Json j;
  if (d.kind == LengthDistribution::Kind::kFixed) {
    j["kind"] = "fixed";
    j["value"] = d.fixed;
  } else {
    j["kind"] = "geometric";
    j["p"] = d.p;
    j["min"] = d.min_length;
    j["max"] = d.max_length;
  }
  return j;
}

LengthDistribution length_from(const Json& j, LengthDistribution d) {
  const std::string kind = j.value("kind", "fixed");
  if (kind == "fixed") {
    d.kind = LengthDistribution::Kind::kFixed;
    d.fixed = j.at("value").get<std::size_t>();
    d.min_length = 1;
    d.max_length = 0;
  } else if (kind == "geometric") {
    d.kind = LengthDistribution::Kind::kGeometric;
    d.p = j.at("p").get<double>();
    d.min_length = j.value("min", std::size_t{1});
    d.max_length = j.value("max", std::size_t{0});
  } else {
    throw DataError("unknown length kind '" + kind + "'");
  }
  return d;
}

}  // namespace

PositionSchedule::PositionSchedule(std::vector<Knot> knots) : knots_(std::move(knots)) {
  for (const auto& k : knots_) {
    if (!std::isfinite(k.position) || !std::isfinite(k.value)) {
      throw DataError("schedule knots must be finite");
    }
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].position > knots_[i - 1].position)) {
      throw DataError("schedule knot positions must be strictly increasing");
    }
  }
}

double PositionSchedule::at(std::size_t position) const {
  if (knots_.empty()) return 0.0;
  const double x = static_cast<double>(position);
  if (x <= knots_.front().position) return knots_.front().value;
  if (x >= knots_.back().position) return knots_.back().value;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const Knot& k) { return v < k.position; });
  auto lo = hi - 1;
  const double t = (x - lo->position) / (hi->position - lo->position);
  return lo->value + t * (hi->value - lo->value);
}

bool PositionSchedule::is_zero() const {
  return std::all_of(knots_.begin(), knots_.end(), [](const Knot& k) { return k.value == 0.0; });
}

void MarkovSource::validate() const {
  const std::size_t k = initial.size();
  if (k < 2 || k > kMaxAlphabet) throw DataError("alphabet size must be between 2 and 16");
  if (transition.size() != k) throw DataError("transition matrix must be K x K");
  check_probability_vector(initial, "initial distribution");
  for (std::size_t r = 0; r < k; ++r) {
    if (transition[r].size() != k) throw DataError("transition matrix must be K x K");
    check_probability_vector(transition[r], "transition row " + std::to_string(r));
  }
  check_schedule(modulation, "modulation");
  check_schedule(topic_copy, "topic copy probability");
  check_length(length);
}

std::vector<double> MarkovSource::conditional(std::size_t position, std::size_t first,
                                              std::size_t previous) const {
  const std::size_t k = alphabet_size();
  const double m = modulation.at(position);
  const double c = topic_copy.at(position);
  std::vector<double> p(k);
  for (std::size_t j = 0; j < k; ++j) {
    p[j] = (1.0 - c) * ((1.0 - m) * transition[previous][j] + m / static_cast<double>(k));
  }
  p[first] += c;
  return p;
}

void ZipfWarmupSource::validate() const {
  if (vocab_size < 2) throw DataError("zipf vocabulary needs at least 2 words");
  if (!(exponent_start > 0.0) || !(exponent_end > 0.0)) {
    throw DataError("zipf exponents must be positive");
  }
  if (!(warmup_scale > 0.0)) throw DataError("warmup_scale must be positive");
  if (!(continuation_prob >= 0.0 && continuation_prob <= 1.0)) {
    throw DataError("continuation_prob must be in [0, 1]");
  }
  check_length(length);
}

double ZipfWarmupSource::exponent_at(std::size_t position) const {
  return exponent_end + (exponent_start - exponent_end) *
                            std::exp(-static_cast<double>(position) / warmup_scale);
}

SynthSource parse_source_json(std::string_view json) {
  Json j;
  try {
    j = Json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed source spec: ") + e.what());
  }
  try {
    const std::string kind = j.value("kind", "markov");
    if (kind == "markov") {
      MarkovSource s;
      s.transition = j.at("transition").get<std::vector<std::vector<double>>>();
      s.initial = j.at("initial").get<std::vector<double>>();
      if (j.contains("modulation")) s.modulation = schedule_from(j["modulation"], "modulation");
      if (j.contains("topic_copy")) s.topic_copy = schedule_from(j["topic_copy"], "topic_copy");
      if (j.contains("length")) s.length = length_from(j["length"], s.length);
      s.validate();
      return s;
    }
    if (kind == "zipf-warmup") {
      ZipfWarmupSource s;
      s.vocab_size = j.value("vocab_size", s.vocab_size);
      s.exponent_start = j.value("exponent_start", s.exponent_start);
      s.exponent_end = j.value("exponent_end", s.exponent_end);
      s.warmup_scale = j.value("warmup_scale", s.warmup_scale);
      s.continuation_prob = j.value("continuation_prob", s.continuation_prob);
      s.title_words = j.value("title_words", s.title_words);
      if (j.contains("length")) s.length = length_from(j["length"], s.length);
      s.validate();
      return s;
    }
    throw DataError("unknown source kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid source spec: ") + e.what());
  }
}

std::string source_to_json(const SynthSource& source) {
  Json j;
  if (const auto* m = std::get_if<MarkovSource>(&source)) {
    j["kind"] = "markov";
    j["transition"] = m->transition;
    j["initial"] = m->initial;
    j["modulation"] = schedule_json(m->modulation);
    j["topic_copy"] = schedule_json(m->topic_copy);
    j["length"] = length_json(m->length);
  } else {
    const auto& z = std::get<ZipfWarmupSource>(source);
    j["kind"] = "zipf-warmup";
    j["vocab_size"] = z.vocab_size;
    j["exponent_start"] = z.exponent_start;
    j["exponent_end"] = z.exponent_end;
    j["warmup_scale"] = z.warmup_scale;
    j["continuation_prob"] = z.continuation_prob;
    j["title_words"] = z.title_words;
    j["length"] = length_json(z.length);
  }
  return j.dump();
}

std::uint64_t document_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string markov_word(std::size_t symbol) { return "w" + std::to_string(symbol); }

std::vector<Document> generate(const MarkovSource& source, std::size_t n_docs,
                               std::uint64_t seed, std::size_t workers,
                               std::string_view id_prefix) {
  if (n_docs < 1) throw UsageError("n_docs must be at least 1");
  source.validate();
  const std::size_t k = source.alphabet_size();
  const double uniform = 1.0 / static_cast<double>(k);
  std::vector<Document> docs(n_docs);
  parallel_for(n_docs, workers, [&](std::size_t d) {
    std::mt19937_64 rng(document_seed(seed, d));
    const std::size_t len = draw_length(source.length, rng);
    std::vector<double> row(k);
    Document& doc = docs[d];
    doc.id = doc_id(id_prefix, d);
    doc.source = "synth-markov";
    doc.body.reserve(len);
    std::size_t first = draw_categorical(source.initial, uniform01(rng));
    std::size_t prev = first;
    doc.body.push_back(markov_word(first));
    for (std::size_t i = 1; i < len; ++i) {
      const double c = source.topic_copy.at(i);
      std::size_t next = 0;
      if (c > 0.0 && uniform01(rng) < c) {
        next = first;
      } else {
        const double m = source.modulation.at(i);
        for (std::size_t j = 0; j < k; ++j) {
          row[j] = (1.0 - m) * source.transition[prev][j] + m * uniform;
        }
        next = draw_categorical(row, uniform01(rng));
      }
      doc.body.push_back(markov_word(next));
      prev = next;
    }
  });
  return docs;
}

std::vector<Document> generate(const ZipfWarmupSource& source, std::size_t n_docs,
                               std::uint64_t seed, std::size_t workers,
                               std::string_view id_prefix) {
  if (n_docs < 1) throw UsageError("n_docs must be at least 1");
  source.validate();
  const ZipfTables tables(source);
  const std::size_t v = source.vocab_size;
  const std::size_t title_level = tables.level_for(source.exponent_start, source);
  std::vector<Document> docs(n_docs);
  parallel_for(n_docs, workers, [&](std::size_t d) {
    std::mt19937_64 rng(document_seed(seed, d));
    const std::size_t len = draw_length(source.length, rng);
    Document& doc = docs[d];
    doc.id = doc_id(id_prefix, d);
    doc.source = "synth-zipf";
    if (source.title_words > 0) {
      std::string title;
      for (std::size_t t = 0; t < source.title_words; ++t) {
        if (t > 0) title += ' ';
        title += zipf_word(tables.draw(title_level, uniform01(rng)) + 1);
      }
      doc.title = std::move(title);
    }
    doc.body.reserve(len);
    std::size_t prev = 0;
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t rank = 0;
      if (i > 0 && uniform01(rng) < source.continuation_prob) {
        rank = (prev * 31 + 7) % v;  // fixed phrase successor
      } else {
        const std::size_t level = tables.level_for(source.exponent_at(i), source);
        rank = tables.draw(level, uniform01(rng));
      }
      doc.body.push_back(zipf_word(rank + 1));
      prev = rank;
    }
  });
  return docs;
}

std::vector<Document> generate(const SynthSource& source, std::size_t n_docs,
                               std::uint64_t seed, std::size_t workers,
                               std::string_view id_prefix) {
  return std::visit(
      [&](const auto& s) { return generate(s, n_docs, seed, workers, id_prefix); }, source);
}

std::vector<double> true_entropy_curve(const MarkovSource& source, std::size_t max_position) {
  source.validate();
  const std::size_t k = source.alphabet_size();
  std::vector<double> out;
  if (max_position == 0) return out;
  out.reserve(max_position);
  out.push_back(entropy_bits(source.initial));

  // joint[t][s] = P(word 0 = t, previous word = s)
  std::vector<std::vector<double>> joint(k, std::vector<double>(k, 0.0));
  for (std::size_t t = 0; t < k; ++t) joint[t][t] = source.initial[t];
  std::vector<std::vector<double>> next(k, std::vector<double>(k, 0.0));

  for (std::size_t i = 1; i < max_position; ++i) {
    double h = 0.0;
    for (auto& row : next) std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t t = 0; t < k; ++t) {
      for (std::size_t s = 0; s < k; ++s) {
        const double w = joint[t][s];
        if (w == 0.0) continue;
        const std::vector<double> p = source.conditional(i, t, s);
        h += w * entropy_bits(p);
        for (std::size_t x = 0; x < k; ++x) next[t][x] += w * p[x];
      }
    }
    out.push_back(h);
    std::swap(joint, next);
  }
  return out;
}

double true_entropy(const MarkovSource& source, std::size_t position) {
  if (position < 1) throw UsageError("true_entropy needs position >= 1");
  return true_entropy_curve(source, position + 1)[position];
}

std::vector<ScoreRecord> oracle_records(const MarkovSource& source,
                                        std::span<const Document> docs) {
  source.validate();
  const std::size_t k = source.alphabet_size();
  auto symbol_of = [&](const std::string& w, const std::string& id) {
    if (w.size() >= 2 && w[0] == 'w') {
      std::size_t s = 0;
      bool ok = true;
      for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i] < '0' || w[i] > '9') ok = false;
        s = s * 10 + static_cast<std::size_t>(w[i] - '0');
      }
      if (ok && s < k) return s;
    }
    throw DataError("document '" + id + "' has word '" + w + "' outside the source alphabet");
  };

  std::vector<ScoreRecord> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    ScoreRecord r;
    r.doc_id = doc.id;
    r.words.reserve(doc.body.size());
    std::size_t first = 0;
    std::size_t prev = 0;
    for (std::size_t i = 0; i < doc.body.size(); ++i) {
      const std::size_t x = symbol_of(doc.body[i], doc.id);
      const double p = i == 0 ? source.initial[x] : source.conditional(i, first, prev)[x];
      if (!(p > 0.0)) {
        throw DataError("document '" + doc.id + "' has a zero-probability word at position " +
                        std::to_string(i));
      }
      r.words.push_back(ScoredWord{doc.body[i], std::log(p), 1, false});
      if (i == 0) first = x;
      prev = x;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace infodensity
