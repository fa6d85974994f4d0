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

#ifndef INFODENSITY_VOCABULARY_HPP_
#define INFODENSITY_VOCABULARY_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace infodensity {

using WordId = std::uint32_t;

// Closed vocabulary. Id 0 is always "<unk>"; the remaining ids are the
// words seen at least min_count times in training, in byte order.
class Vocabulary {
 public:
  static constexpr std::string_view kUnknown = "<unk>";
  static constexpr WordId kUnkId = 0;
  static constexpr std::uint64_t kDefaultMinCount = 5;

  Vocabulary();

  // Counts every token of `sequences`. Throws UsageError when min_count is
  // 0 and DataError("empty corpus") when there is nothing to count. A
  // literal "<unk>" token in the data pools into the unknown entry.
  static Vocabulary build(std::span<const std::vector<std::string>> sequences,
                          std::uint64_t min_count = kDefaultMinCount,
                          std::size_t workers = 1);

  // From an explicit word list whose first entry must be "<unk>".
  static Vocabulary from_words(std::vector<std::string> words);

  WordId lookup(std::string_view word) const;
  bool contains(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }
  WordId unk_id() const { return kUnkId; }
  std::uint64_t min_count() const { return min_count_; }
  const std::vector<std::string>& words() const { return words_; }

  // Training count per id with sub-threshold words pooled into <unk>.
  // Empty for a vocabulary loaded from a file.
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  std::vector<WordId> map(std::span<const std::string> tokens) const;

  // One token per line; line number (0-based) is the id.
  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in);
  static Vocabulary read(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.words_ == b.words_;
  }

 private:
  void index_words();

  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t min_count_ = kDefaultMinCount;
};

}  // namespace infodensity

#endif  // INFODENSITY_VOCABULARY_HPP_
