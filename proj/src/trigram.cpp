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

#include "infodensity/trigram.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "infodensity/error.hpp"
#include "infodensity/io.hpp"
#include "infodensity/parallel.hpp"
#include "infodensity/text.hpp"

namespace infodensity {
namespace {

template <typename Map, typename Key>
std::uint64_t find_or_zero(const Map& map, const Key& key) {
  auto it = map.find(key);
  return it == map.end() ? 0 : it->second;
}

template <typename Map>
void add_all(Map& into, const Map& from) {
  for (const auto& [key, n] : from) into[key] += n;
}

constexpr std::string_view kFormatLine = "format infodensity-trigram 1";

}  // namespace

std::uint64_t TrigramCounts::unigram(WordId x) const { return find_or_zero(c1, x); }

std::uint64_t TrigramCounts::bigram(WordId a, WordId b) const {
  return find_or_zero(c2, pack_bigram(a, b));
}

std::uint64_t TrigramCounts::trigram(WordId a, WordId b, WordId c) const {
  return find_or_zero(c3, TrigramKey{a, b, c});
}

std::uint64_t TrigramCounts::context(WordId b) const { return find_or_zero(context1, b); }

std::uint64_t TrigramCounts::context(WordId a, WordId b) const {
  return find_or_zero(context2, pack_bigram(a, b));
}

void TrigramCounts::add_sequence(std::span<const WordId> ids, WordId boundary) {
  WordId prev2 = boundary;
  WordId prev1 = boundary;
  for (WordId x : ids) {
    ++c1[x];
    ++c2[pack_bigram(prev1, x)];
    ++c3[TrigramKey{prev2, prev1, x}];
    ++context1[prev1];
    ++context2[pack_bigram(prev2, prev1)];
    ++total_tokens;
    prev2 = prev1;
    prev1 = x;
  }
}

void TrigramCounts::merge(const TrigramCounts& other) {
  add_all(c1, other.c1);
  add_all(c2, other.c2);
  add_all(c3, other.c3);
  add_all(context1, other.context1);
  add_all(context2, other.context2);
  total_tokens += other.total_tokens;
}

void TrigramCounts::recompute_contexts() {
  context1.clear();
  context2.clear();
  for (const auto& [key, n] : c2) context1[static_cast<WordId>(key >> 32)] += n;
  for (const auto& [key, n] : c3) context2[pack_bigram(key.a, key.b)] += n;
}

TrigramCounts count_corpus(std::span<const std::vector<WordId>> sequences,
                           WordId boundary, std::size_t workers) {
  std::vector<TrigramCounts> shards(std::max<std::size_t>(1, workers));
  const std::size_t used = parallel_shards(
      sequences.size(), workers, [&](std::size_t s, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) shards[s].add_sequence(sequences[i], boundary);
      });
  if (used == 0) return {};
  TrigramCounts total = std::move(shards[0]);
  for (std::size_t s = 1; s < used; ++s) total.merge(shards[s]);
  return total;
}

double mle(const TrigramCounts& counts, int order, std::span<const WordId> context,
           WordId next) {
  if (order < 1 || order > 3 || context.size() + 1 != static_cast<std::size_t>(order)) {
    throw UsageError("mle: order " + std::to_string(order) + " needs " +
                     std::to_string(order - 1) + " context words, got " +
                     std::to_string(context.size()));
  }
  if (counts.total_tokens == 0) throw DataError("untrained model");
  if (order == 1) {
    return static_cast<double>(counts.unigram(next)) /
           static_cast<double>(counts.total_tokens);
  }
  if (order == 2) {
    const std::uint64_t denom = counts.context(context[0]);
    if (denom == 0) return mle(counts, 1, {}, next);
    return static_cast<double>(counts.bigram(context[0], next)) / static_cast<double>(denom);
  }
  const std::uint64_t denom = counts.context(context[0], context[1]);
  if (denom == 0) return mle(counts, 2, context.subspan(1), next);
  return static_cast<double>(counts.trigram(context[0], context[1], next)) /
         static_cast<double>(denom);
}

TrigramModel::TrigramModel(Vocabulary vocab, TrigramCounts counts, Lambdas lambdas)
    : vocab_(std::move(vocab)), counts_(std::move(counts)), lambdas_(lambdas) {
  validate();
}

void TrigramModel::validate() const {
  const double l1 = lambdas_.trigram;
  const double l2 = lambdas_.bigram;
  if (!(l1 >= 0.0 && l1 <= 1.0 && l2 >= 0.0 && l2 <= 1.0) || l1 + l2 > 1.0 + 1e-12) {
    throw UsageError("interpolation weights must lie in [0,1] with lambda1 + lambda2 <= 1");
  }
  if (counts_.total_tokens == 0) throw DataError("untrained model");
  const WordId v = static_cast<WordId>(vocab_.size());
  const WordId s = boundary();
  auto bad = [](std::string_view what) {
    throw DataError(std::string("count table references an id outside the vocabulary (") +
                    std::string(what) + ")");
  };
  std::uint64_t sum = 0;
  for (const auto& [x, n] : counts_.c1) {
    if (x >= v) bad("unigram");
    sum += n;
  }
  if (sum != counts_.total_tokens) throw DataError("unigram counts do not sum to total_tokens");
  for (const auto& [key, n] : counts_.c2) {
    if (static_cast<WordId>(key >> 32) > s || static_cast<WordId>(key) >= v) bad("bigram");
  }
  for (const auto& [key, n] : counts_.c3) {
    if (key.a > s || key.b > s || key.c >= v) bad("trigram");
  }
}

double TrigramModel::prob(WordId a, WordId b, WordId next) const {
  const WordId v = static_cast<WordId>(vocab_.size());
  if (next >= v) {
    throw DataError("word id " + std::to_string(next) + " is not in the vocabulary (size " +
                    std::to_string(v) + ")");
  }
  if (a > boundary() || b > boundary()) {
    throw DataError("context id outside the vocabulary");
  }
  const double p1 = static_cast<double>(counts_.unigram(next)) /
                    static_cast<double>(counts_.total_tokens);
  const std::uint64_t ctx1 = counts_.context(b);
  const double p2 = ctx1 == 0 ? p1
                              : static_cast<double>(counts_.bigram(b, next)) /
                                    static_cast<double>(ctx1);
  const std::uint64_t ctx2 = counts_.context(a, b);
  const double p3 = ctx2 == 0 ? p2
                              : static_cast<double>(counts_.trigram(a, b, next)) /
                                    static_cast<double>(ctx2);
  const double l3 = std::max(0.0, 1.0 - lambdas_.trigram - lambdas_.bigram);
  return lambdas_.trigram * p3 + lambdas_.bigram * p2 + l3 * p1;
}

double TrigramModel::surprisal(WordId a, WordId b, WordId next, LogBase base) const {
  const double p = prob(a, b, next);
  if (!(p > 0.0)) {
    throw NumericError("zero probability for '" + vocab_.word(next) +
                       "': it never occurs in the training data");
  }
  return surprisal_of(p, base);
}

double TrigramModel::total_probability(WordId a, WordId b) const {
  double sum = 0.0;
  for (WordId x = 0; x < vocab_.size(); ++x) sum += prob(a, b, x);
  return sum;
}

void TrigramModel::save(std::ostream& out, std::string_view header) const {
  out << header;
  out << kFormatLine << '\n';
  out << "lambda1 " << format_double(lambdas_.trigram) << '\n';
  out << "lambda2 " << format_double(lambdas_.bigram) << '\n';
  out << "boundary " << kBoundary << ' ' << boundary() << '\n';
  out << "unk " << Vocabulary::kUnknown << ' ' << vocab_.unk_id() << '\n';
  out << "vocab " << vocab_.size() << '\n';
  vocab_.write(out);

  std::vector<std::pair<WordId, std::uint64_t>> u(counts_.c1.begin(), counts_.c1.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> bi(counts_.c2.begin(), counts_.c2.end());
  std::vector<std::pair<TrigramKey, std::uint64_t>> tri(counts_.c3.begin(), counts_.c3.end());
  std::sort(u.begin(), u.end());
  std::sort(bi.begin(), bi.end());
  std::sort(tri.begin(), tri.end());

  out << "total_tokens " << counts_.total_tokens << '\n';
  out << "ngrams " << u.size() << ' ' << bi.size() << ' ' << tri.size() << '\n';
  for (const auto& [x, n] : u) out << "1 " << x << ' ' << n << '\n';
  for (const auto& [key, n] : bi) {
    out << "2 " << (key >> 32) << ' ' << (key & 0xFFFFFFFFULL) << ' ' << n << '\n';
  }
  for (const auto& [key, n] : tri) {
    out << "3 " << key.a << ' ' << key.b << ' ' << key.c << ' ' << n << '\n';
  }
}

TrigramModel TrigramModel::load(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  bool in_header = true;  // comments are only allowed before the format line
  auto next_line = [&]() -> std::string_view {
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (in_header && is_comment(line)) continue;
      in_header = false;
      return line;
    }
    throw DataError("model file truncated after line " + std::to_string(number));
  };
  auto fail = [&](const std::string& why) -> DataError {
    return DataError("model line " + std::to_string(number) + ": " + why);
  };
  auto fields = [](std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
      const std::size_t end = std::min(s.find(' ', pos), s.size());
      out.push_back(s.substr(pos, end - pos));
      pos = end + 1;
    }
    return out;
  };
  auto keyed = [&](std::string_view key, std::size_t n_values) {
    auto f = fields(next_line());
    if (f.size() != n_values + 1 || f[0] != key) throw fail("expected '" + std::string(key) + "'");
    return f;
  };

  if (next_line() != kFormatLine) throw fail("not an infodensity trigram model");
  Lambdas lambdas;
  lambdas.trigram = parse_double(keyed("lambda1", 1)[1], "lambda1");
  lambdas.bigram = parse_double(keyed("lambda2", 1)[1], "lambda2");
  const auto boundary_fields = keyed("boundary", 2);
  keyed("unk", 2);
  const auto vocab_size =
      static_cast<std::size_t>(parse_int(keyed("vocab", 1)[1], "vocab size"));
  std::vector<std::string> words;
  words.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) words.emplace_back(next_line());
  Vocabulary vocab = Vocabulary::from_words(std::move(words));
  if (static_cast<std::size_t>(parse_int(boundary_fields[2], "boundary id")) != vocab.size()) {
    throw fail("boundary id must equal the vocabulary size");
  }

  TrigramCounts counts;
  counts.total_tokens =
      static_cast<std::uint64_t>(parse_int(keyed("total_tokens", 1)[1], "total_tokens"));
  const auto sizes = keyed("ngrams", 3);
  const std::int64_t n_entries[3] = {parse_int(sizes[1], "unigram entries"),
                                     parse_int(sizes[2], "bigram entries"),
                                     parse_int(sizes[3], "trigram entries")};
  auto id = [&](std::string_view s) {
    const auto v = parse_int(s, "word id");
    if (v < 0 || v > static_cast<std::int64_t>(vocab.size())) throw fail("word id out of range");
    return static_cast<WordId>(v);
  };
  auto count = [&](std::string_view s) {
    const auto v = parse_int(s, "count");
    if (v < 1) throw fail("counts must be positive");
    return static_cast<std::uint64_t>(v);
  };
  for (int order = 1; order <= 3; ++order) {
    for (std::int64_t k = 0; k < n_entries[order - 1]; ++k) {
      auto f = fields(next_line());
      if (f.size() != static_cast<std::size_t>(order) + 2 ||
          f[0] != std::to_string(order)) {
        throw fail("expected an order-" + std::to_string(order) + " entry");
      }
      bool inserted = false;
      if (order == 1) {
        inserted = counts.c1.emplace(id(f[1]), count(f[2])).second;
      } else if (order == 2) {
        inserted = counts.c2.emplace(pack_bigram(id(f[1]), id(f[2])), count(f[3])).second;
      } else {
        inserted = counts.c3.emplace(TrigramKey{id(f[1]), id(f[2]), id(f[3])}, count(f[4])).second;
      }
      if (!inserted) throw fail("duplicate entry");
    }
  }
  counts.recompute_contexts();
  return TrigramModel(std::move(vocab), std::move(counts), lambdas);
}

TrigramModel TrigramModel::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return load(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LmTokens lm_tokens(const Document& doc, TitleMode mode) {
  const RenderedDocument rendered = render_document(doc, mode);
  return LmTokens{tokenize(rendered.text, true), rendered.body_offset, rendered.title_fallback};
}

TrigramModel train_trigram(std::span<const Document> docs, const Vocabulary& vocab,
                           TitleMode mode, Lambdas lambdas, std::size_t workers) {
  std::vector<std::vector<WordId>> sequences(docs.size());
  parallel_for(docs.size(), workers, [&](std::size_t i) {
    sequences[i] = vocab.map(lm_tokens(docs[i], mode).tokens);
  });
  TrigramCounts counts =
      count_corpus(sequences, static_cast<WordId>(vocab.size()), workers);
  return TrigramModel(vocab, std::move(counts), lambdas);
}

}  // namespace infodensity
