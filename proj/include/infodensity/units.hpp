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

#ifndef INFODENSITY_UNITS_HPP_
#define INFODENSITY_UNITS_HPP_

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "infodensity/error.hpp"

namespace infodensity {

// Surprisal unit. Bits everywhere unless a run switches to nats, which
// rescales every curve by ln 2 and leaves trend directions unchanged.
enum class LogBase { kTwo, kE };

inline LogBase parse_log_base(std::string_view name) {
  if (name == "2") return LogBase::kTwo;
  if (name == "e") return LogBase::kE;
  throw UsageError("unknown log base '" + std::string(name) + "' (expected 2 or e)");
}

inline std::string_view log_base_name(LogBase base) {
  return base == LogBase::kTwo ? "2" : "e";
}

// -log(p) in the requested unit.
inline double surprisal_of(double p, LogBase base) {
  return base == LogBase::kTwo ? -std::log2(p) : -std::log(p);
}

// Natural-log probability (as emitted by neural toolkits) to surprisal.
// The +0.0 turns a -0.0 result into +0.0.
inline double surprisal_from_nats(double logprob, LogBase base) {
  return (base == LogBase::kTwo ? -logprob / std::numbers::ln2 : -logprob) + 0.0;
}

}  // namespace infodensity

#endif  // INFODENSITY_UNITS_HPP_
