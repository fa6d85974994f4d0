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

// Per-word surprisal from the trigram model or from an external scorer.
//
// External scorers hand over word-level scores in the score-record format,
// one JSON object per line:
//
//   {"doc_id": "d1",
//    "words": [{"word": "Title", "logprob": -7.1, "n_subtokens": 2, "is_title": true},
//              {"word": "a",     "logprob": -0.4, "n_subtokens": 1, "is_title": false}]}
//
// logprob is a natural-log probability (<= 0) already summed over the
// word's subtokens. A line whose object has a "header" member and no
// "doc_id" carries stream metadata; '#' lines are comments. Non-title words
// must equal the document's body words exactly, in order.

#ifndef INFODENSITY_SCORING_HPP_
#define INFODENSITY_SCORING_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infodensity/corpus.hpp"
#include "infodensity/curves.hpp"
#include "infodensity/surprisal.hpp"
#include "infodensity/trigram.hpp"
#include "infodensity/units.hpp"

namespace infodensity {

struct ScoredWord {
  std::string word;
  double logprob = 0.0;  // natural log
  int n_subtokens = 1;
  bool is_title = false;

  friend bool operator==(const ScoredWord&, const ScoredWord&) = default;
};

struct ScoreRecord {
  std::string doc_id;
  std::vector<ScoredWord> words;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

struct ScoreStream {
  std::string header_json;  // empty when the stream has no header record
  std::vector<ScoreRecord> records;
};

ScoreRecord parse_score_record(std::string_view json_line, std::size_t line_number);
std::string serialize_score_record(const ScoreRecord& record);

ScoreStream read_score_records(std::istream& in);
ScoreStream read_score_records(const std::filesystem::path& path);
void write_score_records(std::ostream& out, std::span<const ScoreRecord> records,
                         std::string_view header_json = {});

// Scores body word i given its two predecessors in the rendered token
// stream (title tokens and <s> padding included). Title tokens are scored
// as context but not emitted.
SurprisalSequence score_with_trigram(const TrigramModel& model, const Document& doc,
                                     TitleMode mode, LogBase base = LogBase::kTwo);

// Same, on an already vocabulary-mapped token stream. Throws DataError
// when an id is outside the model's vocabulary.
SurprisalSequence score_ids(const TrigramModel& model, std::string doc_id,
                            std::span<const WordId> ids, std::size_t body_offset,
                            LogBase base = LogBase::kTwo);

struct TrigramScoring {
  std::vector<SurprisalSequence> sequences;
  std::size_t title_fallbacks = 0;  // documents rendered without a title
};

TrigramScoring score_corpus_with_trigram(const TrigramModel& model,
                                         std::span<const Document> docs, TitleMode mode,
                                         LogBase base = LogBase::kTwo, std::size_t workers = 1);

// Converts one record against its document: drops title words, checks the
// alignment and converts natural-log probabilities to surprisal.
SurprisalSequence ingest_record(const ScoreRecord& record, const Document& doc,
                                LogBase base = LogBase::kTwo);

// Ingests every record; output follows record order. Throws DataError for
// an unknown or repeated doc_id, a misaligned word (naming the position and
// both strings), a positive logprob or n_subtokens < 1.
std::vector<SurprisalSequence> ingest_scores(std::span<const ScoreRecord> records,
                                             std::span<const Document> docs,
                                             LogBase base = LogBase::kTwo,
                                             std::size_t workers = 1);

// gap[i] = local.mean[i] - full.mean[i] at every position defined in both,
// an estimate of how much the long-range context tells about word i.
// n_docs is the smaller of the two counts; variance is the sum of the two
// variances (independent-scorer approximation). Throws DataError when the
// curves come from different document sets.
PositionCurve mi_gap(const PositionCurve& local, const PositionCurve& full);

}  // namespace infodensity

#endif  // INFODENSITY_SCORING_HPP_
