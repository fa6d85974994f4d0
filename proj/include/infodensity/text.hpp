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

#ifndef INFODENSITY_TEXT_HPP_
#define INFODENSITY_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace infodensity {

// Splits on runs of ASCII whitespace (space, \t, \n, \v, \f, \r).
// Punctuation stays attached to its word.
std::vector<std::string> tokenize(std::string_view text, bool lowercase);

// Per-code-point lowercasing of UTF-8 text. Covers ASCII, Latin-1, Latin
// Extended-A, basic Greek and basic Cyrillic capitals; every other code
// point, and any byte that is not valid UTF-8, passes through unchanged.
// Unicameral scripts (Arabic, CJK, ...) are unaffected.
std::string lowercase_utf8(std::string_view text);

// The lowercase mapping of a single code point under the scheme above.
char32_t fold_code_point(char32_t cp);

// True when `text` contains a code point that fold_code_point changes.
bool has_uppercase(std::string_view text);

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' ||
         c == '\r';
}

}  // namespace infodensity

#endif  // INFODENSITY_TEXT_HPP_
