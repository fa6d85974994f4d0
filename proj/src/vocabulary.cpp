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

#include "infodensity/vocabulary.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "infodensity/error.hpp"
#include "infodensity/io.hpp"
#include "infodensity/parallel.hpp"
#include "infodensity/text.hpp"

namespace infodensity {

Vocabulary::Vocabulary() : words_{std::string(kUnknown)} { index_words(); }

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> sequences,
                             std::uint64_t min_count, std::size_t workers) {
  if (min_count < 1) throw UsageError("min_count must be at least 1");
  if (sequences.empty()) throw DataError("empty corpus");

  using CountMap = std::unordered_map<std::string, std::uint64_t>;
  std::vector<CountMap> shards(std::max<std::size_t>(1, workers));
  const std::size_t used = parallel_shards(
      sequences.size(), workers, [&](std::size_t s, std::size_t begin, std::size_t end) {
        CountMap& local = shards[s];
        for (std::size_t i = begin; i < end; ++i) {
          for (const auto& token : sequences[i]) ++local[token];
        }
      });
  CountMap counts;
  for (std::size_t s = 0; s < used; ++s) {
    for (auto& [word, n] : shards[s]) counts[word] += n;
  }
  if (counts.empty()) throw DataError("empty corpus");

  std::vector<std::string> kept;
  std::uint64_t unk_count = 0;
  for (const auto& [word, n] : counts) {
    if (word != kUnknown && n >= min_count) {
      kept.push_back(word);
    } else {
      unk_count += n;
    }
  }
  std::sort(kept.begin(), kept.end());

  Vocabulary vocab;
  vocab.min_count_ = min_count;
  vocab.words_.reserve(kept.size() + 1);
  vocab.counts_.reserve(kept.size() + 1);
  vocab.counts_.push_back(unk_count);
  for (auto& word : kept) {
    vocab.counts_.push_back(counts.at(word));
    vocab.words_.push_back(std::move(word));
  }
  vocab.index_words();
  return vocab;
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
  if (words.empty() || words.front() != kUnknown) {
    throw DataError("vocabulary must start with " + std::string(kUnknown));
  }
  Vocabulary vocab;
  vocab.words_ = std::move(words);
  vocab.index_words();
  if (vocab.index_.size() != vocab.words_.size()) {
    throw DataError("vocabulary contains duplicate entries");
  }
  return vocab;
}

void Vocabulary::index_words() {
  index_.clear();
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i].empty()) throw DataError("empty vocabulary entry at id " + std::to_string(i));
    for (char c : words_[i]) {
      if (is_space(c)) throw DataError("vocabulary entry with whitespace at id " + std::to_string(i));
    }
    index_.emplace(words_[i], static_cast<WordId>(i));
  }
}

WordId Vocabulary::lookup(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  return index_.contains(std::string(word));
}

std::vector<WordId> Vocabulary::map(std::span<const std::string> tokens) const {
  std::vector<WordId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(lookup(t));
  return ids;
}

void Vocabulary::write(std::ostream& out) const {
  for (const auto& w : words_) out << w << '\n';
}

Vocabulary Vocabulary::read(std::istream& in) {
  std::vector<std::string> words;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    if (line.empty()) {
      throw DataError("vocabulary line " + std::to_string(number) + " is empty");
    }
    words.emplace_back(line);
  });
  return from_words(std::move(words));
}

Vocabulary Vocabulary::read(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace infodensity
