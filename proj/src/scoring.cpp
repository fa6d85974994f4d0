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

#include "infodensity/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "infodensity/error.hpp"
#include "infodensity/io.hpp"
#include "infodensity/parallel.hpp"
#include "infodensity/text.hpp"

namespace infodensity {
namespace {

using Json = nlohmann::ordered_json;

ScoredWord parse_word(const Json& w, const std::string& where, std::size_t index) {
  const std::string at = where + ": words[" + std::to_string(index) + "]";
  if (!w.is_object()) throw DataError(at + " is not an object");
  ScoredWord out;
  auto word = w.find("word");
  if (word == w.end() || !word->is_string()) throw DataError(at + ": missing 'word'");
  out.word = word->get<std::string>();
  auto lp = w.find("logprob");
  if (lp == w.end() || !lp->is_number()) throw DataError(at + ": missing 'logprob'");
  out.logprob = lp->get<double>();
  if (auto n = w.find("n_subtokens"); n != w.end()) {
    if (!n->is_number_integer()) throw DataError(at + ": 'n_subtokens' must be an integer");
    out.n_subtokens = n->get<int>();
  }
  if (auto t = w.find("is_title"); t != w.end()) {
    if (!t->is_boolean()) throw DataError(at + ": 'is_title' must be a boolean");
    out.is_title = t->get<bool>();
  }
  return out;
}

ScoreRecord record_from_json(const Json& obj, const std::string& where) {
  if (!obj.is_object()) throw DataError(where + ": record is not an object");
  ScoreRecord record;
  auto id = obj.find("doc_id");
  if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw DataError(where + ": missing 'doc_id'");
  }
  record.doc_id = id->get<std::string>();
  auto words = obj.find("words");
  if (words == obj.end() || !words->is_array()) throw DataError(where + ": missing 'words'");
  record.words.reserve(words->size());
  for (std::size_t i = 0; i < words->size(); ++i) {
    record.words.push_back(parse_word((*words)[i], where, i));
  }
  return record;
}

Json parse_line(std::string_view line, const std::string& where) {
  try {
    return Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(where + ": malformed record: " + e.what());
  }
}

}  // namespace

ScoreRecord parse_score_record(std::string_view json_line, std::size_t line_number) {
  const std::string where = "record line " + std::to_string(line_number);
  return record_from_json(parse_line(json_line, where), where);
}

std::string serialize_score_record(const ScoreRecord& record) {
  std::string out = "{\"doc_id\":" + nlohmann::json(record.doc_id).dump() + ",\"words\":[";
  for (std::size_t i = 0; i < record.words.size(); ++i) {
    const auto& w = record.words[i];
    if (i > 0) out += ',';
    out += "{\"word\":" + nlohmann::json(w.word).dump() +
           ",\"logprob\":" + format_double(w.logprob) +
           ",\"n_subtokens\":" + std::to_string(w.n_subtokens) +
           ",\"is_title\":" + (w.is_title ? "true" : "false") + "}";
  }
  out += "]}";
  return out;
}

ScoreStream read_score_records(std::istream& in) {
  ScoreStream stream;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    if (line.empty() || is_comment(line)) return;
    const std::string where = "record line " + std::to_string(number);
    const Json obj = parse_line(line, where);
    if (obj.is_object() && obj.contains("header") && !obj.contains("doc_id")) {
      if (!stream.header_json.empty() || !stream.records.empty()) {
        throw DataError(where + ": header must be the first record");
      }
      stream.header_json = obj.at("header").dump();
      return;
    }
    stream.records.push_back(record_from_json(obj, where));
  });
  return stream;
}

ScoreStream read_score_records(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_score_records(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_score_records(std::ostream& out, std::span<const ScoreRecord> records,
                         std::string_view header_json) {
  if (!header_json.empty()) out << "{\"header\":" << header_json << "}\n";
  for (const auto& r : records) out << serialize_score_record(r) << '\n';
}

SurprisalSequence score_ids(const TrigramModel& model, std::string doc_id,
                            std::span<const WordId> ids, std::size_t body_offset,
                            LogBase base) {
  const auto vocab_size = static_cast<WordId>(model.vocab().size());
  SurprisalSequence out;
  out.doc_id = std::move(doc_id);
  out.source = ScoreSource::kTrigram;
  if (body_offset > ids.size()) throw UsageError("body offset past the end of the document");
  out.values.reserve(ids.size() - body_offset);
  WordId prev2 = model.boundary();
  WordId prev1 = model.boundary();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const WordId x = ids[i];
    if (x >= vocab_size) {
      throw DataError("document '" + out.doc_id + "': token " + std::to_string(i) + " has id " +
                      std::to_string(x) + ", outside the model vocabulary");
    }
    if (i >= body_offset) out.values.push_back(model.surprisal(prev2, prev1, x, base) + 0.0);
    prev2 = prev1;
    prev1 = x;
  }
  return out;
}

SurprisalSequence score_with_trigram(const TrigramModel& model, const Document& doc,
                                     TitleMode mode, LogBase base) {
  const LmTokens lm = lm_tokens(doc, mode);
  return score_ids(model, doc.id, model.vocab().map(lm.tokens), lm.body_offset, base);
}

TrigramScoring score_corpus_with_trigram(const TrigramModel& model,
                                         std::span<const Document> docs, TitleMode mode,
                                         LogBase base, std::size_t workers) {
  TrigramScoring out;
  out.sequences.resize(docs.size());
  std::vector<char> fallback(docs.size(), 0);
  parallel_for(docs.size(), workers, [&](std::size_t i) {
    const LmTokens lm = lm_tokens(docs[i], mode);
    fallback[i] = lm.title_fallback ? 1 : 0;
    out.sequences[i] =
        score_ids(model, docs[i].id, model.vocab().map(lm.tokens), lm.body_offset, base);
  });
  out.title_fallbacks = static_cast<std::size_t>(std::count(fallback.begin(), fallback.end(), 1));
  return out;
}

SurprisalSequence ingest_record(const ScoreRecord& record, const Document& doc, LogBase base) {
  const std::string where = "record '" + record.doc_id + "'";
  SurprisalSequence out;
  out.doc_id = record.doc_id;
  out.source = ScoreSource::kExternal;
  out.values.reserve(doc.body.size());
  std::size_t body_index = 0;
  for (std::size_t k = 0; k < record.words.size(); ++k) {
    const ScoredWord& w = record.words[k];
    if (!std::isfinite(w.logprob)) {
      throw DataError(where + ": word " + std::to_string(k) + " has a non-finite logprob");
    }
    if (w.logprob > 0.0) {
      throw DataError(where + ": word " + std::to_string(k) + " has positive logprob " +
                      format_double(w.logprob));
    }
    if (w.n_subtokens < 1) {
      throw DataError(where + ": word " + std::to_string(k) + " has n_subtokens < 1");
    }
    if (w.is_title) {
      if (body_index > 0) {
        throw DataError(where + ": title word at record position " + std::to_string(k) +
                        " follows body words");
      }
      continue;
    }
    if (body_index >= doc.body.size() || w.word != doc.body[body_index]) {
      const std::string expected =
          body_index < doc.body.size() ? "'" + doc.body[body_index] + "'" : "<end of document>";
      throw DataError(where + ": body word " + std::to_string(body_index) + " mismatch: record '" +
                      w.word + "' vs corpus " + expected);
    }
    out.values.push_back(surprisal_from_nats(w.logprob, base));
    ++body_index;
  }
  if (body_index != doc.body.size()) {
    throw DataError(where + ": body word " + std::to_string(body_index) +
                    " mismatch: record <end of record> vs corpus '" + doc.body[body_index] + "'");
  }
  return out;
}

std::vector<SurprisalSequence> ingest_scores(std::span<const ScoreRecord> records,
                                             std::span<const Document> docs, LogBase base,
                                             std::size_t workers) {
  std::unordered_map<std::string_view, const Document*> by_id;
  by_id.reserve(docs.size());
  for (const auto& d : docs) by_id.emplace(d.id, &d);

  std::unordered_map<std::string_view, std::size_t> seen;
  std::vector<const Document*> matched(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto it = by_id.find(records[i].doc_id);
    if (it == by_id.end()) {
      throw DataError("record for unknown doc_id '" + records[i].doc_id + "'");
    }
    if (!seen.emplace(records[i].doc_id, i).second) {
      throw DataError("duplicate record for doc_id '" + records[i].doc_id + "'");
    }
    matched[i] = it->second;
  }

  std::vector<SurprisalSequence> out(records.size());
  parallel_for(records.size(), workers,
               [&](std::size_t i) { out[i] = ingest_record(records[i], *matched[i], base); });
  return out;
}

PositionCurve mi_gap(const PositionCurve& local, const PositionCurve& full) {
  if (local.doc_digest != full.doc_digest || local.n_docs != full.n_docs) {
    throw DataError("curves were computed over different document sets (" +
                    std::to_string(local.n_docs) + " docs, set " + to_hex(local.doc_digest) +
                    " vs " + std::to_string(full.n_docs) + " docs, set " +
                    to_hex(full.doc_digest) + ")");
  }
  PositionCurve gap;
  gap.max_position = std::min(local.max_position, full.max_position);
  gap.min_docs = std::max(local.min_docs, full.min_docs);
  gap.n_docs = local.n_docs;
  gap.doc_digest = local.doc_digest;
  for (const auto& p : local.points) {
    const CurvePoint* q = full.at(p.position);
    if (q == nullptr) continue;
    CurvePoint g;
    g.position = p.position;
    g.mean = p.mean - q->mean;
    g.variance = p.variance + q->variance;
    g.n_docs = std::min(p.n_docs, q->n_docs);
    g.sum = g.mean * static_cast<double>(g.n_docs);
    gap.points.push_back(g);
  }
  return gap;
}

}  // namespace infodensity
