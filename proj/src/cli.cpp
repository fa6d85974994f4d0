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

#include "infodensity/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infodensity/corpus.hpp"
#include "infodensity/curves.hpp"
#include "infodensity/error.hpp"
#include "infodensity/io.hpp"
#include "infodensity/parallel.hpp"
#include "infodensity/scoring.hpp"
#include "infodensity/surprisal.hpp"
#include "infodensity/synth.hpp"
#include "infodensity/trend.hpp"
#include "infodensity/trigram.hpp"
#include "infodensity/units.hpp"
#include "infodensity/vocabulary.hpp"

namespace infodensity {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Common {
  std::size_t workers = default_workers();
};

struct PreprocessArgs {
  std::string corpus;
  std::string sizes;
  std::string out_dir;
  std::string title_mode = "newline";
  std::uint64_t min_count = Vocabulary::kDefaultMinCount;
  std::uint64_t seed = 0;
};

struct TrainArgs {
  std::string train;
  std::string vocab;
  std::string out;
  std::string title_mode = "newline";
  std::uint64_t min_count = Vocabulary::kDefaultMinCount;
  double lambda1 = Lambdas{}.trigram;
  double lambda2 = Lambdas{}.bigram;
};

struct ScoreArgs {
  std::string test;
  std::string model;
  std::string records;
  std::string out;
  std::string title_mode = "newline";
  std::string log_base = "2";
};

struct CurveArgs {
  std::string input;
  std::string out;
  std::string histogram;
  std::size_t bucket = 50;
  std::size_t max_position = PositionCurve::kDefaultMaxPosition;
  std::uint64_t min_docs = PositionCurve::kDefaultMinDocs;
};

struct TrendArgs {
  std::string curve;
  std::string out;
  std::vector<std::size_t> cutoffs;
  std::size_t start = 0;
  double alpha = kDefaultAlpha;
  std::string dataset;
  std::string model;
  std::string fine_tuned = "n/a";
};

struct MigapArgs {
  std::string local;
  std::string full;
  std::string out;
};

struct SynthArgs {
  std::string source;
  std::string out;
  std::string entropy;
  std::string oracle_records;
  std::size_t n_docs = 0;
  std::size_t max_position = PositionCurve::kDefaultMaxPosition;
  std::uint64_t seed = 0;
};

std::string with_header(std::string_view kind, const Json& config) {
  return header_comment(kind, config.dump());
}

SplitSizes parse_sizes(const std::string& text) {
  std::vector<std::size_t> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const std::int64_t x = parse_int(part, "--sizes");
    if (x < 0) throw UsageError("--sizes entries must be non-negative");
    v.push_back(static_cast<std::size_t>(x));
  }
  if (v.size() != 3) throw UsageError("--sizes expects train,val,test");
  return SplitSizes{v[0], v[1], v[2]};
}

std::vector<std::vector<std::string>> lm_token_lists(std::span<const Document> docs,
                                                     TitleMode mode) {
  std::vector<std::vector<std::string>> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(lm_tokens(d, mode).tokens);
  return out;
}

std::string read_source_spec(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;
  auto in = open_input(arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_preprocess(const PreprocessArgs& a, const Common& c, std::ostream& err) {
  const TitleMode mode = parse_title_mode(a.title_mode);
  const SplitSizes sizes = parse_sizes(a.sizes);
  if (a.min_count < 1) throw UsageError("--min-count must be at least 1");
  const auto docs = read_corpus(fs::path(a.corpus));
  const CorpusSplit split = split_corpus(docs, sizes, a.seed);

  Json config;
  config["corpus"] = a.corpus;
  config["sizes"] = {sizes.train, sizes.validation, sizes.test};
  config["seed"] = a.seed;
  config["min_count"] = a.min_count;
  config["title_mode"] = title_mode_name(mode);

  const fs::path dir(a.out_dir);
  auto write_part = [&](const char* name, const std::vector<Document>& part) {
    Json cfg = config;
    cfg["part"] = name;
    auto out = open_output(dir / (std::string(name) + ".jsonl"));
    write_corpus(out, part, with_header("manifest", cfg));
  };
  write_part("train", split.train);
  write_part("val", split.validation);
  write_part("test", split.test);

  const auto tokens = lm_token_lists(split.train, mode);
  const Vocabulary vocab = Vocabulary::build(tokens, a.min_count, c.workers);
  auto vout = open_output(dir / "vocab.txt");
  vocab.write(vout);
  err << "preprocess: " << split.train.size() << " train, " << split.validation.size()
      << " val, " << split.test.size() << " test documents; vocabulary " << vocab.size()
      << " words\n";
  return kExitOk;
}

int cmd_train(const TrainArgs& a, const Common& c, std::ostream& err) {
  const TitleMode mode = parse_title_mode(a.title_mode);
  if (a.min_count < 1) throw UsageError("--min-count must be at least 1");
  const auto docs = read_corpus(fs::path(a.train));
  const Vocabulary vocab = a.vocab.empty()
                               ? Vocabulary::build(lm_token_lists(docs, mode), a.min_count,
                                                   c.workers)
                               : Vocabulary::read(fs::path(a.vocab));
  const Lambdas lambdas{a.lambda1, a.lambda2};
  const TrigramModel model = train_trigram(docs, vocab, mode, lambdas, c.workers);

  Json config;
  config["train"] = a.train;
  config["vocab"] = a.vocab.empty() ? Json(nullptr) : Json(a.vocab);
  if (a.vocab.empty()) config["min_count"] = a.min_count;
  config["lambda1"] = a.lambda1;
  config["lambda2"] = a.lambda2;
  config["title_mode"] = title_mode_name(mode);
  auto out = open_output(a.out);
  model.save(out, with_header("trigram-model", config));
  err << "train-ngram: " << docs.size() << " documents, " << model.counts().total_tokens
      << " tokens, vocabulary " << vocab.size() << " words\n";
  return kExitOk;
}

int cmd_score(const ScoreArgs& a, const Common& c, std::ostream& err) {
  if (a.model.empty() == a.records.empty()) {
    throw UsageError("score needs exactly one of --model or --records");
  }
  const TitleMode mode = parse_title_mode(a.title_mode);
  const LogBase base = parse_log_base(a.log_base);
  const auto docs = read_corpus(fs::path(a.test));

  Json config;
  config["test"] = a.test;
  config["log_base"] = log_base_name(base);
  std::vector<SurprisalSequence> seqs;
  if (!a.model.empty()) {
    const TrigramModel model = TrigramModel::load(fs::path(a.model));
    TrigramScoring scoring = score_corpus_with_trigram(model, docs, mode, base, c.workers);
    seqs = std::move(scoring.sequences);
    config["model"] = a.model;
    config["title_mode"] = title_mode_name(mode);
    config["title_fallbacks"] = scoring.title_fallbacks;
    if (scoring.title_fallbacks > 0) {
      err << "score: " << scoring.title_fallbacks
          << " documents had no title and were scored body-only\n";
    }
  } else {
    const ScoreStream stream = read_score_records(fs::path(a.records));
    seqs = ingest_scores(stream.records, docs, base, c.workers);
    config["records"] = a.records;
    config["records_header"] =
        stream.header_json.empty() ? Json(nullptr) : Json::parse(stream.header_json);
  }
  auto out = open_output(a.out);
  write_surprisals(out, seqs, with_header("surprisal", config));
  err << "score: " << seqs.size() << " documents\n";
  return kExitOk;
}

int cmd_curve(const CurveArgs& a, const Common& c, std::ostream& err) {
  if (a.bucket < 1) throw UsageError("--bucket must be at least 1");
  const auto seqs = read_surprisals(fs::path(a.input));
  const PositionCurve curve = build_curve(seqs, a.max_position, a.min_docs, c.workers);
  Json config;
  config["input"] = a.input;
  config["max_position"] = a.max_position;
  config["min_docs"] = a.min_docs;
  {
    auto out = open_output(a.out);
    write_curve_csv(out, curve, with_header("curve", config));
  }
  if (!a.histogram.empty()) {
    const auto lengths = sequence_lengths(seqs);
    Json hcfg;
    hcfg["input"] = a.input;
    hcfg["bucket"] = a.bucket;
    auto out = open_output(a.histogram);
    write_histogram_csv(out, length_histogram(lengths, a.bucket), with_header("histogram", hcfg));
  }
  err << "curve: " << seqs.size() << " documents, " << curve.points.size()
      << " defined positions\n";
  return kExitOk;
}

int cmd_trend(const TrendArgs& a, std::ostream& out) {
  const PositionCurve curve = read_curve_csv(fs::path(a.curve));
  std::vector<std::size_t> cutoffs = a.cutoffs;
  if (cutoffs.empty()) cutoffs.push_back(curve.max_position);
  const TrendLabels labels{a.dataset, a.model, a.fine_tuned};

  std::vector<TrendReport> reports;
  for (std::size_t cutoff : cutoffs) {
    reports.push_back(trend_of_curve(curve, cutoff, a.alpha, a.start));
  }
  for (const auto& r : reports) out << trend_report_text(r, labels) << '\n';
  if (!a.out.empty()) {
    Json config;
    config["curve"] = a.curve;
    config["cutoffs"] = cutoffs;
    config["start"] = a.start;
    config["alpha"] = a.alpha;
    auto file = open_output(a.out);
    file << with_header("trend", config);
    for (const auto& r : reports) file << trend_report_json(r, labels) << '\n';
  }
  return kExitOk;
}

int cmd_migap(const MigapArgs& a, std::ostream& err) {
  const PositionCurve local = read_curve_csv(fs::path(a.local));
  const PositionCurve full = read_curve_csv(fs::path(a.full));
  const PositionCurve gap = mi_gap(local, full);
  Json config;
  config["local"] = a.local;
  config["full"] = a.full;
  auto out = open_output(a.out);
  write_curve_csv(out, gap, with_header("migap", config));
  err << "migap: " << gap.points.size() << " positions\n";
  return kExitOk;
}

int cmd_synth(const SynthArgs& a, const Common& c, std::ostream& err) {
  if (a.n_docs < 1) throw UsageError("--n-docs must be at least 1");
  const SynthSource source = parse_source_json(read_source_spec(a.source));
  const auto* markov = std::get_if<MarkovSource>(&source);
  if (markov == nullptr && (!a.entropy.empty() || !a.oracle_records.empty())) {
    throw UsageError("--entropy and --oracle-records need a markov source");
  }
  const auto docs = generate(source, a.n_docs, a.seed, c.workers);

  Json config;
  config["source"] = Json::parse(source_to_json(source));
  config["n_docs"] = a.n_docs;
  config["seed"] = a.seed;
  {
    auto out = open_output(a.out);
    write_corpus(out, docs, with_header("synth-corpus", config));
  }
  if (!a.entropy.empty()) {
    Json ecfg = config;
    ecfg["max_position"] = a.max_position;
    auto out = open_output(a.entropy);
    out << with_header("true-entropy", ecfg) << "position,entropy_bits\n";
    const auto h = true_entropy_curve(*markov, a.max_position);
    for (std::size_t i = 0; i < h.size(); ++i) out << i << ',' << format_double(h[i]) << '\n';
  }
  if (!a.oracle_records.empty()) {
    const auto records = oracle_records(*markov, docs);
    Json hdr;
    hdr["scorer"] = "markov-oracle";
    hdr["context"] = "full";
    hdr["first_token"] = "initial distribution";
    hdr["source"] = config["source"];
    hdr["seed"] = a.seed;
    auto out = open_output(a.oracle_records);
    write_score_records(out, records, hdr.dump());
  }
  err << "synth: " << docs.size() << " documents\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Per-position surprisal curves and trend tests for document corpora",
               std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Common common;
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", common.workers, "Worker threads (default: all cores)")
        ->check(CLI::PositiveNumber);
  };

  PreprocessArgs pre;
  auto* s_pre = app.add_subcommand("preprocess", "Split a corpus and build the vocabulary");
  s_pre->add_option("--corpus", pre.corpus, "Corpus JSONL")->required();
  s_pre->add_option("--sizes", pre.sizes, "train,val,test document counts")->required();
  s_pre->add_option("--out-dir", pre.out_dir, "Output directory")->required();
  s_pre->add_option("--seed", pre.seed, "Split seed")->capture_default_str();
  s_pre->add_option("--min-count", pre.min_count, "Vocabulary threshold")->capture_default_str();
  s_pre->add_option("--title-mode", pre.title_mode, "newline, colon-newline or omit")
      ->capture_default_str();
  add_workers(s_pre);

  TrainArgs tr;
  auto* s_tr = app.add_subcommand("train-ngram", "Train the interpolated trigram model");
  s_tr->add_option("--train", tr.train, "Training manifest")->required();
  s_tr->add_option("--vocab", tr.vocab, "Vocabulary file (default: build from --train)");
  s_tr->add_option("--out", tr.out, "Model file")->required();
  s_tr->add_option("--min-count", tr.min_count, "Vocabulary threshold without --vocab")
      ->capture_default_str();
  s_tr->add_option("--lambda1", tr.lambda1, "Trigram weight")->capture_default_str();
  s_tr->add_option("--lambda2", tr.lambda2, "Bigram weight")->capture_default_str();
  s_tr->add_option("--title-mode", tr.title_mode, "newline, colon-newline or omit")
      ->capture_default_str();
  add_workers(s_tr);

  ScoreArgs sc;
  auto* s_sc = app.add_subcommand("score", "Per-word surprisal of a test manifest");
  s_sc->add_option("--test", sc.test, "Test manifest")->required();
  s_sc->add_option("--model", sc.model, "Trigram model file");
  s_sc->add_option("--records", sc.records, "External score-record JSONL");
  s_sc->add_option("--out", sc.out, "Surprisal JSONL")->required();
  s_sc->add_option("--title-mode", sc.title_mode, "newline, colon-newline or omit")
      ->capture_default_str();
  s_sc->add_option("--log-base", sc.log_base, "2 (bits) or e (nats)")->capture_default_str();
  add_workers(s_sc);

  CurveArgs cu;
  auto* s_cu = app.add_subcommand("curve", "Mean surprisal by word position");
  s_cu->add_option("--input", cu.input, "Surprisal JSONL")->required();
  s_cu->add_option("--out", cu.out, "Curve CSV")->required();
  s_cu->add_option("--histogram", cu.histogram, "Document length histogram CSV");
  s_cu->add_option("--bucket", cu.bucket, "Histogram bucket width")->capture_default_str();
  s_cu->add_option("--max-position", cu.max_position, "Positions kept")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  s_cu->add_option("--min-docs", cu.min_docs, "Minimum documents per position")
      ->capture_default_str();
  add_workers(s_cu);

  TrendArgs te;
  auto* s_te = app.add_subcommand("trend", "Mann-Kendall test on a curve");
  s_te->add_option("--curve", te.curve, "Curve CSV")->required();
  s_te->add_option("--cutoff", te.cutoffs,
                   "Exclusive position cutoff; repeat for sensitivity mode (default: max_position)");
  s_te->add_option("--start", te.start, "First position tested")->capture_default_str();
  s_te->add_option("--alpha", te.alpha, "Significance level")->capture_default_str();
  s_te->add_option("--out", te.out, "JSONL report file");
  s_te->add_option("--dataset", te.dataset, "Dataset label");
  s_te->add_option("--model", te.model, "Model label");
  s_te->add_option("--fine-tuned", te.fine_tuned, "Fine-tuned label")->capture_default_str();

  MigapArgs mg;
  auto* s_mg = app.add_subcommand("migap", "Local minus full-context curve");
  s_mg->add_option("--local", mg.local, "Local-context curve CSV")->required();
  s_mg->add_option("--full", mg.full, "Full-context curve CSV")->required();
  s_mg->add_option("--out", mg.out, "Gap curve CSV")->required();

  SynthArgs sy;
  auto* s_sy = app.add_subcommand("synth", "Generate a synthetic corpus");
  s_sy->add_option("--source", sy.source, "Source spec JSON file or inline JSON")->required();
  s_sy->add_option("--n-docs", sy.n_docs, "Number of documents")->required();
  s_sy->add_option("--seed", sy.seed, "Master seed")->capture_default_str();
  s_sy->add_option("--out", sy.out, "Corpus JSONL")->required();
  s_sy->add_option("--entropy", sy.entropy, "True entropy CSV (markov sources)");
  s_sy->add_option("--max-position", sy.max_position, "Positions in the entropy CSV")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  s_sy->add_option("--oracle-records", sy.oracle_records,
                   "Exact full-context score records (markov sources)");
  add_workers(s_sy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (s_pre->parsed()) return cmd_preprocess(pre, common, err);
    if (s_tr->parsed()) return cmd_train(tr, common, err);
    if (s_sc->parsed()) return cmd_score(sc, common, err);
    if (s_cu->parsed()) return cmd_curve(cu, common, err);
    if (s_te->parsed()) return cmd_trend(te, out);
    if (s_mg->parsed()) return cmd_migap(mg, err);
    if (s_sy->parsed()) return cmd_synth(sy, common, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace infodensity
