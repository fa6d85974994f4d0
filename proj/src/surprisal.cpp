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

#include "infodensity/surprisal.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "infodensity/error.hpp"
#include "infodensity/io.hpp"

namespace infodensity {

std::string_view score_source_name(ScoreSource source) {
  return source == ScoreSource::kTrigram ? "trigram" : "external";
}

ScoreSource parse_score_source(std::string_view name) {
  if (name == "trigram") return ScoreSource::kTrigram;
  if (name == "external") return ScoreSource::kExternal;
  throw DataError("unknown surprisal source '" + std::string(name) + "'");
}

void write_surprisals(std::ostream& out, std::span<const SurprisalSequence> seqs,
                      std::string_view header) {
  out << header;
  for (const auto& s : seqs) {
    out << "{\"doc_id\":" << nlohmann::json(s.doc_id).dump() << ",\"source\":\""
        << score_source_name(s.source) << "\",\"surprisal\":[";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i > 0) out << ',';
      out << format_double(s.values[i]);
    }
    out << "]}\n";
  }
}

std::vector<SurprisalSequence> read_surprisals(std::istream& in) {
  std::vector<SurprisalSequence> out;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    if (line.empty() || is_comment(line)) return;
    const std::string where = "surprisal line " + std::to_string(number);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": " + e.what());
    }
    try {
      SurprisalSequence s;
      s.doc_id = obj.at("doc_id").get<std::string>();
      s.source = parse_score_source(obj.at("source").get<std::string>());
      const auto& values = obj.at("surprisal");
      if (!values.is_array()) throw DataError("'surprisal' must be an array");
      s.values.reserve(values.size());
      for (const auto& v : values) {
        if (!v.is_number()) throw DataError("surprisal values must be numbers");
        const double x = v.get<double>();
        if (!std::isfinite(x) || x < 0.0) throw DataError("surprisal must be finite and >= 0");
        s.values.push_back(x);
      }
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  });
  return out;
}

std::vector<SurprisalSequence> read_surprisals(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_surprisals(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace infodensity
