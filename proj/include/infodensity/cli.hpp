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

// The `infodensity` command line: preprocess, train-ngram, score, curve,
// trend, migap and synth subcommands.

#ifndef INFODENSITY_CLI_HPP_
#define INFODENSITY_CLI_HPP_

#include <ostream>

namespace infodensity {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

// Runs one command line; never throws. Reports go to `out`, diagnostics to
// `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infodensity

#endif  // INFODENSITY_CLI_HPP_
