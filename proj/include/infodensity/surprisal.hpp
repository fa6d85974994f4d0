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

#ifndef INFODENSITY_SURPRISAL_HPP_
#define INFODENSITY_SURPRISAL_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infodensity {

enum class ScoreSource { kTrigram, kExternal };

std::string_view score_source_name(ScoreSource source);
ScoreSource parse_score_source(std::string_view name);

// Per-word surprisal of one document's body, in the run's log unit.
struct SurprisalSequence {
  std::string doc_id;
  std::vector<double> values;  // finite, >= 0
  ScoreSource source = ScoreSource::kTrigram;

  friend bool operator==(const SurprisalSequence&, const SurprisalSequence&) = default;
};

// One JSON object per line: {"doc_id":..,"source":..,"surprisal":[..]}.
// Numbers are written in shortest round-trip form.
void write_surprisals(std::ostream& out, std::span<const SurprisalSequence> seqs,
                      std::string_view header = {});
std::vector<SurprisalSequence> read_surprisals(std::istream& in);
std::vector<SurprisalSequence> read_surprisals(const std::filesystem::path& path);

}  // namespace infodensity

#endif  // INFODENSITY_SURPRISAL_HPP_
