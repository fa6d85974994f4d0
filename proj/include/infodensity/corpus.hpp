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

// Documents, corpus files, title rendering and train/validation/test splits.
//
// A corpus file holds one JSON object per line with the fields
//
//   id      string, required, unique within the file
//   title   string, optional
//   text    string, required; split on whitespace into the body words
//   date    string, optional, ISO-8601 (YYYY-MM-DD...)
//   source  string, optional
//
// Blank lines and lines starting with '#' are skipped.

#ifndef INFODENSITY_CORPUS_HPP_
#define INFODENSITY_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infodensity {

struct Document {
  std::string id;
  std::optional<std::string> title;
  std::vector<std::string> body;  // raw-case whitespace tokens
  std::optional<std::string> date;
  std::optional<std::string> source;

  friend bool operator==(const Document&, const Document&) = default;
};

enum class TitleMode { kNewline, kColonNewline, kOmit };

TitleMode parse_title_mode(std::string_view name);
std::string_view title_mode_name(TitleMode mode);

struct RenderedDocument {
  std::string text;
  // Number of leading tokens of `text` (under tokenize) that belong to the
  // title; body word i is token body_offset + i.
  std::size_t body_offset = 0;
  // Set when a title mode was requested but the document has no title.
  bool title_fallback = false;
};

// newline: "title\nbody", colon_newline: "title:\nbody", omit: "body".
// Body words are joined with single spaces.
RenderedDocument render_document(const Document& doc, TitleMode mode);

// Parses one corpus record. `line_number` is used only for messages.
Document parse_document(std::string_view json_line, std::size_t line_number);
std::string serialize_document(const Document& doc);

std::vector<Document> read_corpus(std::istream& in);
std::vector<Document> read_corpus(const std::filesystem::path& path);

// Writes `header` (may be empty) then one record per line.
void write_corpus(std::ostream& out, std::span<const Document> docs,
                  std::string_view header = {});

// Throws DataError on an empty or repeated id.
void check_unique_ids(std::span<const Document> docs);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

struct CorpusSplit {
  std::vector<Document> train;
  std::vector<Document> validation;
  std::vector<Document> test;
  std::uint64_t seed = 0;
};

// Seeded Fisher-Yates permutation of the corpus (std::mt19937_64 with
// rejection-sampled bounded draws, so the result does not depend on the
// standard library), then the first `train`, next `validation`, next `test`
// documents. Each part keeps the original corpus order.
CorpusSplit split_corpus(std::span<const Document> docs, SplitSizes sizes,
                         std::uint64_t seed);

}  // namespace infodensity

#endif  // INFODENSITY_CORPUS_HPP_
