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

#include <map>
#include <random>
#include <sstream>

#include "infodensity/error.hpp"
#include "infodensity/vocabulary.hpp"

using namespace infodensity;

TEST_CASE("words below min_count pool into <unk>") {
  const std::vector<std::vector<std::string>> seqs = {
      {"a", "a", "b", "c"}, {"a", "b", "d"}, {"<unk>", "b"}};
  const auto v = Vocabulary::build(seqs, 2);
  CHECK(v.words() == std::vector<std::string>{"<unk>", "a", "b"});
  CHECK(v.counts() == std::vector<std::uint64_t>{3, 3, 3});  // c, d and literal <unk>
  CHECK(v.lookup("a") == 1);
  CHECK(v.lookup("zzz") == Vocabulary::kUnkId);
  CHECK(v.lookup("<unk>") == Vocabulary::kUnkId);
  CHECK(v.contains("b"));
  CHECK_FALSE(v.contains("c"));
  CHECK(v.map(std::vector<std::string>{"b", "c", "a"}) == std::vector<WordId>{2, 0, 1});
  CHECK(v.min_count() == 2);
}

TEST_CASE("default threshold is five occurrences") {
  std::vector<std::vector<std::string>> seqs(1);
  for (int i = 0; i < 5; ++i) seqs[0].push_back("five");
  for (int i = 0; i < 4; ++i) seqs[0].push_back("four");
  const auto v = Vocabulary::build(seqs);
  CHECK(v.contains("five"));
  CHECK_FALSE(v.contains("four"));
}

TEST_CASE("vocabulary is independent of worker count and matches a direct tally") {
  std::mt19937_64 rng(5);
  std::geometric_distribution<int> word(0.08);
  std::vector<std::vector<std::string>> seqs(300);
  std::map<std::string, std::uint64_t> tally;
  for (auto& s : seqs) {
    const std::size_t len = 1 + rng() % 40;
    for (std::size_t i = 0; i < len; ++i) {
      s.push_back("t" + std::to_string(word(rng)));
      ++tally[s.back()];
    }
  }
  const auto v1 = Vocabulary::build(seqs, 3, 1);
  const auto v8 = Vocabulary::build(seqs, 3, 8);
  CHECK(v1 == v8);
  CHECK(v1.counts() == v8.counts());

  std::vector<std::string> expected{"<unk>"};
  std::uint64_t unk = 0;
  for (const auto& [w, n] : tally) {
    if (n >= 3) {
      expected.push_back(w);
    } else {
      unk += n;
    }
  }
  CHECK(v1.words() == expected);
  CHECK(v1.counts()[0] == unk);
}

TEST_CASE("vocabulary files round-trip") {
  const std::vector<std::vector<std::string>> seqs = {{"x", "y", "x", "#tag", "#tag"}};
  const auto v = Vocabulary::build(seqs, 1);
  std::ostringstream out;
  v.write(out);
  CHECK(out.str() == "<unk>\n#tag\nx\ny\n");
  std::istringstream in(out.str());
  const auto back = Vocabulary::read(in);
  CHECK(back == v);
  std::ostringstream again;
  back.write(again);
  CHECK(again.str() == out.str());
}

TEST_CASE("vocabulary errors") {
  const std::vector<std::vector<std::string>> none;
  CHECK_THROWS_WITH_AS(Vocabulary::build(none), "empty corpus", DataError);
  const std::vector<std::vector<std::string>> blank = {{}, {}};
  CHECK_THROWS_WITH_AS(Vocabulary::build(blank), "empty corpus", DataError);
  const std::vector<std::vector<std::string>> one = {{"a"}};
  CHECK_THROWS_AS(Vocabulary::build(one, 0), UsageError);
  CHECK_THROWS_AS(Vocabulary::from_words({"a", "<unk>"}), DataError);
  CHECK_THROWS_AS(Vocabulary::from_words({"<unk>", "a", "a"}), DataError);
  std::istringstream gap("<unk>\n\na\n");
  CHECK_THROWS_AS(Vocabulary::read(gap), DataError);
}
