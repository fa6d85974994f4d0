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

#include "infodensity/corpus.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_set>

#include <json.hpp>

#include "infodensity/error.hpp"
#include "infodensity/io.hpp"
#include "infodensity/text.hpp"

namespace infodensity {
namespace {

using Json = nlohmann::ordered_json;

std::string join_words(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

std::optional<std::string> optional_string(const Json& obj, const char* key,
                                           std::size_t line_number) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw DataError("line " + std::to_string(line_number) + ": field '" + key +
                    "' must be a string");
  }
  return it->get<std::string>();
}

bool looks_like_iso_date(std::string_view s) {
  if (s.size() < 10) return false;
  for (std::size_t i = 0; i < 10; ++i) {
    const bool dash = (i == 4 || i == 7);
    if (dash ? s[i] != '-' : (s[i] < '0' || s[i] > '9')) return false;
  }
  return s.size() == 10 || s[10] == 'T' || s[10] == ' ';
}

// Unbiased draw from [0, bound) by rejection on the top of the range.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

}  // namespace

TitleMode parse_title_mode(std::string_view name) {
  if (name == "newline") return TitleMode::kNewline;
  if (name == "colon-newline" || name == "colon_newline") {
    return TitleMode::kColonNewline;
  }
  if (name == "omit") return TitleMode::kOmit;
  throw UsageError("unknown title mode '" + std::string(name) +
                   "' (expected newline, colon-newline or omit)");
}

std::string_view title_mode_name(TitleMode mode) {
  switch (mode) {
    case TitleMode::kNewline: return "newline";
    case TitleMode::kColonNewline: return "colon-newline";
    case TitleMode::kOmit: return "omit";
  }
  return "omit";
}

RenderedDocument render_document(const Document& doc, TitleMode mode) {
  RenderedDocument out;
  const std::string body = join_words(doc.body);
  if (mode == TitleMode::kOmit) {
    out.text = body;
    return out;
  }
  if (!doc.title) {
    out.text = body;
    out.title_fallback = true;
    return out;
  }
  std::string prefix = *doc.title;
  if (mode == TitleMode::kColonNewline) prefix += ':';
  prefix += '\n';
  out.body_offset = tokenize(prefix, false).size();
  out.text = prefix + body;
  return out;
}

Document parse_document(std::string_view json_line, std::size_t line_number) {
  const std::string where = "line " + std::to_string(line_number);
  Json obj;
  try {
    obj = Json::parse(json_line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(where + ": malformed record: " + e.what());
  }
  if (!obj.is_object()) throw DataError(where + ": record is not an object");

  Document doc;
  auto id = optional_string(obj, "id", line_number);
  if (!id || id->empty()) throw DataError(where + ": missing or empty 'id'");
  doc.id = std::move(*id);
  auto text = optional_string(obj, "text", line_number);
  if (!text) throw DataError(where + ": missing 'text'");
  doc.body = tokenize(*text, false);
  doc.title = optional_string(obj, "title", line_number);
  doc.date = optional_string(obj, "date", line_number);
  if (doc.date && !looks_like_iso_date(*doc.date)) {
    throw DataError(where + ": 'date' is not ISO-8601: '" + *doc.date + "'");
  }
  doc.source = optional_string(obj, "source", line_number);
  return doc;
}

std::string serialize_document(const Document& doc) {
  Json obj;
  obj["id"] = doc.id;
  if (doc.title) obj["title"] = *doc.title;
  obj["text"] = join_words(doc.body);
  if (doc.date) obj["date"] = *doc.date;
  if (doc.source) obj["source"] = *doc.source;
  return obj.dump();
}

std::vector<Document> read_corpus(std::istream& in) {
  std::vector<Document> docs;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    if (line.empty() || is_comment(line)) return;
    docs.push_back(parse_document(line, number));
  });
  check_unique_ids(docs);
  return docs;
}

std::vector<Document> read_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_corpus(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_corpus(std::ostream& out, std::span<const Document> docs,
                  std::string_view header) {
  out << header;
  for (const auto& doc : docs) out << serialize_document(doc) << '\n';
}

void check_unique_ids(std::span<const Document> docs) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(docs.size());
  for (const auto& doc : docs) {
    if (doc.id.empty()) throw DataError("document with empty id");
    if (!seen.insert(doc.id).second) {
      throw DataError("duplicate document id '" + doc.id + "'");
    }
  }
}

CorpusSplit split_corpus(std::span<const Document> docs, SplitSizes sizes,
                         std::uint64_t seed) {
  const std::size_t requested = sizes.train + sizes.validation + sizes.test;
  if (requested > docs.size()) {
    throw DataError("insufficient documents: requested " +
                    std::to_string(requested) + " but corpus has " +
                    std::to_string(docs.size()) + " (short by " +
                    std::to_string(requested - docs.size()) + ")");
  }
  check_unique_ids(docs);

  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(order[i - 1], order[j]);
  }

  auto take = [&](std::size_t begin, std::size_t count) {
    std::vector<std::size_t> picked(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                    order.begin() + static_cast<std::ptrdiff_t>(begin + count));
    std::sort(picked.begin(), picked.end());
    std::vector<Document> out;
    out.reserve(count);
    for (std::size_t idx : picked) out.push_back(docs[idx]);
    return out;
  };

  CorpusSplit split;
  split.seed = seed;
  split.train = take(0, sizes.train);
  split.validation = take(sizes.train, sizes.validation);
  split.test = take(sizes.train + sizes.validation, sizes.test);
  return split;
}

}  // namespace infodensity
