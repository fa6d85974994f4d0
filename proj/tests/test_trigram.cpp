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

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "infodensity/error.hpp"
#include "infodensity/trigram.hpp"
#include "oracles.hpp"

using namespace infodensity;

namespace {

Document doc(std::string id, std::vector<std::string> body) {
  Document d;
  d.id = std::move(id);
  d.body = std::move(body);
  return d;
}

// Vocabulary <unk> a b, trained on the single document "a b a b".
TrigramModel abab_model(Lambdas lambdas = {}) {
  const std::vector<Document> docs = {doc("d", {"a", "b", "a", "b"})};
  const auto vocab = Vocabulary::from_words({"<unk>", "a", "b"});
  return train_trigram(docs, vocab, TitleMode::kOmit, lambdas);
}

std::vector<std::vector<WordId>> random_id_docs(std::mt19937_64& rng, std::size_t n,
                                                WordId vocab_size, std::size_t max_len) {
  std::vector<std::vector<WordId>> docs(n);
  for (auto& d : docs) {
    const std::size_t len = 1 + rng() % max_len;
    for (std::size_t i = 0; i < len; ++i) {
      // Skewed so that repeated n-grams are common.
      const auto r = rng() % (static_cast<std::uint64_t>(vocab_size) * vocab_size);
      d.push_back(static_cast<WordId>(std::sqrt(static_cast<double>(r))));
    }
  }
  return docs;
}

}  // namespace

TEST_CASE("worked example: a b a b") {
  const auto m = abab_model();
  const WordId s = m.boundary();
  CHECK(s == 3);
  const auto& c = m.counts();
  CHECK(c.total_tokens == 4);
  CHECK(c.unigram(1) == 2);
  CHECK(c.unigram(2) == 2);
  CHECK(c.bigram(s, 1) == 1);
  CHECK(c.bigram(1, 2) == 2);
  CHECK(c.bigram(2, 1) == 1);
  CHECK(c.trigram(s, s, 1) == 1);
  CHECK(c.trigram(1, 2, 1) == 1);
  CHECK(c.context(1) == 2);
  CHECK(c.context(2) == 1);
  CHECK(c.context(s, s) == 1);

  // 0.5 * 1 + 0.3 * 1 + 0.2 * 0.5
  CHECK(m.prob(s, s, 1) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(m.prob(s, 1, 2) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(m.prob(1, 2, 1) == doctest::Approx(0.9).epsilon(1e-15));
  // 0.5 * 0 + 0.3 * 0 + 0.2 * 0.5
  CHECK(m.prob(s, s, 2) == doctest::Approx(0.1).epsilon(1e-15));
  // Context (b, b) never occurred: the trigram term falls back to P(a | b) = 1.
  CHECK(m.prob(2, 2, 1) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(m.surprisal(s, s, 2) == doctest::Approx(std::log2(10.0)).epsilon(1e-15));
  CHECK(m.surprisal(s, s, 2, LogBase::kE) == doctest::Approx(std::log(10.0)).epsilon(1e-15));
  CHECK(m.total_probability(s, s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("an unseen <unk> has zero probability and surprisal is a numeric error") {
  const auto m = abab_model();
  CHECK(m.prob(m.boundary(), m.boundary(), Vocabulary::kUnkId) == 0.0);
  CHECK_THROWS_AS(m.surprisal(m.boundary(), m.boundary(), Vocabulary::kUnkId), NumericError);
}

TEST_CASE("lambda validation") {
  CHECK_THROWS_AS(abab_model({0.7, 0.4}), UsageError);
  CHECK_THROWS_AS(abab_model({-0.1, 0.3}), UsageError);
  CHECK_NOTHROW(abab_model({1.0, 0.0}));
  const auto pure = abab_model({1.0, 0.0});
  CHECK(pure.prob(pure.boundary(), pure.boundary(), 2) == 0.0);
}

TEST_CASE("counts and MLE match the naive window oracle") {
  std::mt19937_64 rng(11);
  const WordId v = 6;
  const auto docs = random_id_docs(rng, 50, v, 30);
  const auto counts = count_corpus(docs, v, 3);
  CHECK(counts.total_tokens == oracle::total_words(docs));
  for (WordId x = 0; x < v; ++x) {
    CHECK(counts.unigram(x) == oracle::ngram_count(docs, v, {x}));
    CHECK(mle(counts, 1, {}, x) == oracle::mle(docs, v, v, {}, x));
  }
  for (WordId a = 0; a <= v; ++a) {
    CHECK(counts.context(a) == oracle::context_count(docs, v, {a}, v));
    for (WordId x = 0; x < v; ++x) {
      CHECK(counts.bigram(a, x) == oracle::ngram_count(docs, v, {a, x}));
      const std::vector<WordId> ctx{a};
      CHECK(mle(counts, 2, ctx, x) == oracle::mle(docs, v, v, ctx, x));
      for (WordId b = 0; b <= v; ++b) {
        CHECK(counts.trigram(a, b, x) == oracle::ngram_count(docs, v, {a, b, x}));
        const std::vector<WordId> ctx2{a, b};
        CHECK(mle(counts, 3, ctx2, x) == oracle::mle(docs, v, v, ctx2, x));
      }
    }
  }
}

TEST_CASE("counting is independent of worker count") {
  std::mt19937_64 rng(3);
  const auto docs = random_id_docs(rng, 200, 9, 50);
  CHECK(count_corpus(docs, 9, 1) == count_corpus(docs, 9, 7));
  auto recomputed = count_corpus(docs, 9, 1);
  recomputed.recompute_contexts();
  CHECK(recomputed == count_corpus(docs, 9, 1));
}

TEST_CASE("mle argument checks") {
  TrigramCounts empty;
  CHECK_THROWS_AS(mle(empty, 1, {}, 0), DataError);
  const auto m = abab_model();
  const std::vector<WordId> one{1};
  CHECK_THROWS_AS(mle(m.counts(), 3, one, 1), UsageError);
  CHECK_THROWS_AS(mle(m.counts(), 4, {}, 1), UsageError);
}

TEST_CASE("every context distribution sums to one") {
  std::mt19937_64 rng(17);
  std::vector<Document> docs;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> body;
    const std::size_t len = 1 + rng() % 25;
    for (std::size_t k = 0; k < len; ++k) body.push_back("w" + std::to_string(rng() % 40));
    docs.push_back(doc("d" + std::to_string(i), body));
  }
  std::vector<std::vector<std::string>> tokens;
  for (const auto& d : docs) tokens.push_back(lm_tokens(d, TitleMode::kOmit).tokens);
  const auto vocab = Vocabulary::build(tokens, 8);
  const auto m = train_trigram(docs, vocab, TitleMode::kOmit, {}, 4);
  for (WordId a = 0; a <= m.boundary(); ++a) {
    for (WordId b = 0; b <= m.boundary(); ++b) {
      CHECK(std::abs(m.total_probability(a, b) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("model files round-trip byte for byte") {
  std::mt19937_64 rng(23);
  std::vector<Document> docs;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> body;
    for (int k = 0; k < 20; ++k) body.push_back(k % 5 == 0 ? "#tag" : "w" + std::to_string(rng() % 9));
    Document d = doc("d" + std::to_string(i), body);
    d.title = "Title " + std::to_string(i % 3);
    docs.push_back(d);
  }
  std::vector<std::vector<std::string>> tokens;
  for (const auto& d : docs) tokens.push_back(lm_tokens(d, TitleMode::kNewline).tokens);
  const auto vocab = Vocabulary::build(tokens, 2);
  const auto m = train_trigram(docs, vocab, TitleMode::kNewline, {0.6, 0.25}, 3);

  std::ostringstream first;
  m.save(first, "# header line\n");
  std::istringstream in(first.str());
  const auto back = TrigramModel::load(in);
  CHECK(back.vocab() == m.vocab());
  CHECK(back.counts() == m.counts());
  CHECK(back.lambdas().trigram == 0.6);
  CHECK(back.lambdas().bigram == 0.25);
  std::ostringstream second;
  back.save(second, "# header line\n");
  CHECK(second.str() == first.str());
}

TEST_CASE("model loader rejects corrupt files") {
  const auto m = abab_model();
  std::ostringstream out;
  m.save(out);
  const std::string good = out.str();

  std::istringstream truncated(good.substr(0, good.size() / 2));
  CHECK_THROWS_AS(TrigramModel::load(truncated), DataError);

  std::string dup = good;
  const auto pos = dup.find("\n1 1 2\n");
  REQUIRE(pos != std::string::npos);
  dup.insert(pos + 1, "1 1 2\n");
  dup.replace(dup.find("ngrams 2 3 4"), 12, "ngrams 3 3 4");
  std::istringstream dup_in(dup);
  CHECK_THROWS_AS(TrigramModel::load(dup_in), DataError);

  std::istringstream wrong("format something-else\n");
  CHECK_THROWS_AS(TrigramModel::load(wrong), DataError);
}
