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

// Small file and number formatting helpers shared by every reader/writer.

#ifndef INFODENSITY_IO_HPP_
#define INFODENSITY_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>

namespace infodensity {

inline constexpr std::string_view kToolName = "infodensity";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Strict parse of a full field; throws DataError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
std::int64_t parse_int(std::string_view text, std::string_view what);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

// Calls `fn(line, line_number)` for every line (1-based), without the
// trailing newline or carriage return.
void for_each_line(std::istream& in,
                   const std::function<void(std::string_view, std::size_t)>& fn);

// Header comment lines start with this prefix in every text output except
// the vocabulary file.
inline constexpr std::string_view kCommentPrefix = "#";

inline bool is_comment(std::string_view line) {
  return line.starts_with(kCommentPrefix);
}

// "# infodensity 0.1.0 <kind>\n# config <json>\n"
std::string header_comment(std::string_view kind, std::string_view config_json);

// 64-bit FNV-1a; used for document-set fingerprints.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);

std::string to_hex(std::uint64_t value);

}  // namespace infodensity

#endif  // INFODENSITY_IO_HPP_
