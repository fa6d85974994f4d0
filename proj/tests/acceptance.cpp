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

// Acceptance suite: one PASS/FAIL line per primary criterion. Seeds are
// fixed constants; nothing is retried.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "infodensity/cli.hpp"
#include "infodensity/corpus.hpp"
#include "infodensity/curves.hpp"
#include "infodensity/io.hpp"
#include "infodensity/parallel.hpp"
#include "infodensity/scoring.hpp"
#include "infodensity/surprisal.hpp"
#include "infodensity/synth.hpp"
#include "infodensity/trend.hpp"
#include "infodensity/trigram.hpp"
#include "oracles.hpp"

#ifndef INFODENSITY_FIXTURE_DIR
#error "INFODENSITY_FIXTURE_DIR must point at tests/fixtures"
#endif

using namespace infodensity;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::size_t kWorkers = default_workers();

TrigramModel train(std::span<const Document> docs, std::uint64_t min_count, TitleMode mode,
                   Lambdas lambdas) {
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(docs.size());
  for (const auto& d : docs) tokens.push_back(lm_tokens(d, mode).tokens);
  const auto vocab = Vocabulary::build(tokens, min_count, kWorkers);
  return train_trigram(docs, vocab, mode, lambdas, kWorkers);
}

PositionCurve trigram_curve(const TrigramModel& m, std::span<const Document> docs,
                            TitleMode mode, std::size_t max_position, std::uint64_t min_docs) {
  const auto scored = score_corpus_with_trigram(m, docs, mode, LogBase::kTwo, kWorkers);
  return build_curve(scored.sequences, max_position, min_docs, kWorkers);
}

MarkovSource sticky_binary(std::size_t length) {
  MarkovSource s;
  s.transition = {{0.9, 0.1}, {0.1, 0.9}};
  s.initial = {0.5, 0.5};
  s.length.fixed = length;
  return s;
}

// Trigram normalization over 1000 contexts of a 5k-document corpus.
Outcome trigram_normalization() {
  ZipfWarmupSource z;
  const auto docs = generate(z, 5000, 1, kWorkers);
  const auto m = train(docs, Vocabulary::kDefaultMinCount, TitleMode::kNewline, {});

  // Half the contexts are observed bigram contexts, half arbitrary pairs
  // (including the boundary and never-seen combinations).
  std::vector<std::pair<WordId, WordId>> observed;
  for (const auto& [key, n] : m.counts().context2) {
    observed.emplace_back(static_cast<WordId>(key >> 32), static_cast<WordId>(key));
  }
  std::sort(observed.begin(), observed.end());
  std::mt19937_64 rng(1);
  std::vector<std::pair<WordId, WordId>> contexts;
  for (int i = 0; i < 500; ++i) contexts.push_back(observed[rng() % observed.size()]);
  const WordId span = m.boundary() + 1;
  for (int i = 0; i < 500; ++i) {
    contexts.emplace_back(static_cast<WordId>(rng() % span), static_cast<WordId>(rng() % span));
  }
  std::vector<double> dev(contexts.size());
  parallel_for(contexts.size(), kWorkers, [&](std::size_t i) {
    dev[i] = std::abs(m.total_probability(contexts[i].first, contexts[i].second) - 1.0);
  });
  const double worst = *std::max_element(dev.begin(), dev.end());
  return {worst <= 1e-9, fmt("max |sum_x P(x|ctx) - 1| = %.3g over %zu contexts, V = %zu",
                             worst, contexts.size(), m.vocab().size())};
}

// Counts and MLE ratios against the naive window oracle on 50 documents.
Outcome count_mle_oracle() {
  std::mt19937_64 rng(1);
  std::vector<Document> docs;
  for (int i = 0; i < 50; ++i) {
    Document d;
    d.id = "m" + std::to_string(i);
    const std::size_t len = 1 + rng() % 40;
    for (std::size_t k = 0; k < len; ++k) {
      const auto r = rng() % 49;  // skewed toward high symbols
      d.body.push_back("s" + std::to_string(static_cast<int>(std::sqrt(static_cast<double>(r)))));
    }
    docs.push_back(d);
  }
  const auto m = train(docs, 1, TitleMode::kOmit, {});
  const WordId v = static_cast<WordId>(m.vocab().size());
  const WordId s = m.boundary();
  std::vector<std::vector<WordId>> ids;
  for (const auto& d : docs) ids.push_back(m.vocab().map(lm_tokens(d, TitleMode::kOmit).tokens));

  const auto& c = m.counts();
  std::size_t checked = 0, mismatches = 0;
  auto expect = [&](bool ok) {
    ++checked;
    if (!ok) ++mismatches;
  };
  expect(c.total_tokens == oracle::total_words(ids));
  for (WordId x = 0; x < v; ++x) {
    expect(c.unigram(x) == oracle::ngram_count(ids, s, {x}));
    expect(mle(c, 1, {}, x) == oracle::mle(ids, s, v, {}, x));
  }
  for (WordId a = 0; a <= s; ++a) {
    for (WordId x = 0; x < v; ++x) {
      const std::vector<WordId> c1{a};
      expect(c.bigram(a, x) == oracle::ngram_count(ids, s, {a, x}));
      expect(mle(c, 2, c1, x) == oracle::mle(ids, s, v, c1, x));
      for (WordId b = 0; b <= s; ++b) {
        const std::vector<WordId> c2{a, b};
        expect(c.trigram(a, b, x) == oracle::ngram_count(ids, s, {a, b, x}));
        expect(mle(c, 3, c2, x) == oracle::mle(ids, s, v, c2, x));
      }
    }
  }
  return {mismatches == 0, fmt("%zu/%zu counts and MLE ratios identical (V = %u)",
                               checked - mismatches, checked, v)};
}

// Mann-Kendall S against the O(n^2) oracle, plus the [1,2,3,4] example.
Outcome mann_kendall_oracle() {
  std::mt19937_64 rng(1);
  std::size_t mismatches = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 3 + rng() % 498;
    const auto v = oracle::tied_sequence(rng, n);
    if (mann_kendall(v).s_statistic != oracle::mann_kendall_s(v)) ++mismatches;
  }
  const std::vector<double> ex = {1, 2, 3, 4};
  const auto r = mann_kendall(ex);
  // Independent implementation (pymannkendall): Z = 1.6984155512168937,
  // p = 0.08942935902899363.
  const bool reference = r.s_statistic == 6 && std::abs(r.variance_s - 26.0 / 3.0) < 1e-12 &&
                         std::abs(r.z_score - 1.6984155512168937) < 1e-12 &&
                         std::abs(r.p_value - 0.08942935902899363) < 1e-12 &&
                         r.direction == TrendDirection::kNone;
  const bool quoted = std::abs(r.z_score - 1.6977) < 1e-3 && std::abs(r.p_value - 0.0896) < 1e-3;
  return {mismatches == 0 && reference && quoted,
          fmt("S exact on %d/500 sequences; [1,2,3,4]: S=%lld Var=%.6f Z=%.6f p=%.6f "
              "(quoted Z~1.6977 p~0.0896, |dZ|=%.1e |dp|=%.1e)",
              500 - static_cast<int>(mismatches), static_cast<long long>(r.s_statistic),
              r.variance_s, r.z_score, r.p_value, std::abs(r.z_score - 1.6977),
              std::abs(r.p_value - 0.0896))};
}

// Stationary source: curve within 3 SE of the true entropy, no trend.
Outcome synthetic_constancy() {
  const auto src = sticky_binary(200);
  const double h = true_entropy(src, 100);
  const auto train_docs = generate(src, 10000, 1, kWorkers, "train");
  const auto test_docs = generate(src, 2000, 2, kWorkers, "test");
  // Unsmoothed trigram: correctly specified for a first-order chain.
  const auto m = train(train_docs, 1, TitleMode::kOmit, {1.0, 0.0});
  const auto curve = trigram_curve(m, test_docs, TitleMode::kOmit, 200, 50);

  std::size_t outside = 0, tested = 0;
  double worst = 0.0;
  std::size_t worst_pos = 0;
  for (const auto& p : curve.points) {
    if (p.position < 2) continue;
    ++tested;
    const double z = std::abs(p.mean - h) / p.standard_error();
    if (z > worst) {
      worst = z;
      worst_pos = p.position;
    }
    if (z > 3.0) ++outside;
  }
  const auto trend = trend_of_curve(curve, 200, 0.05, 2);
  const bool pass = tested == 198 && outside == 0 && trend.direction == TrendDirection::kNone;
  return {pass, fmt("H = %.6f bits; %zu/%zu positions within 3 SE (max %.2f SE at %zu); "
                    "trend %s, p = %.3f",
                    h, tested - outside, tested, worst, worst_pos,
                    std::string(trend_direction_name(trend.direction)).c_str(), trend.p_value)};
}

// Modulated sources: increasing and decreasing entropy are both detected.
Outcome synthetic_direction() {
  std::string detail;
  bool pass = true;
  for (bool rising : {true, false}) {
    auto src = sticky_binary(100);
    src.modulation = rising ? PositionSchedule({{0, 0.0}, {100, 1.0}})
                            : PositionSchedule({{0, 1.0}, {100, 0.0}});
    const auto train_docs = generate(src, 5000, rising ? 11 : 21, kWorkers, "train");
    const auto test_docs = generate(src, 2000, rising ? 12 : 22, kWorkers, "test");
    const auto m = train(train_docs, 1, TitleMode::kOmit, {});
    const auto curve = trigram_curve(m, test_docs, TitleMode::kOmit, 100, 50);
    const auto t = trend_of_curve(curve, 100, 0.01, 2);
    const auto want = rising ? TrendDirection::kIncreasing : TrendDirection::kDecreasing;
    pass = pass && t.direction == want && t.p_value < 0.01;
    detail += fmt("%s: %s p = %.2g; ", rising ? "0->1" : "1->0",
                  std::string(trend_direction_name(t.direction)).c_str(), t.p_value);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// Zipf warm-up corpus: trigram curve over positions 2-500 increases.
Outcome zipf_trigram_increasing() {
  ZipfWarmupSource z;
  const auto train_docs = generate(z, 6000, 1, kWorkers, "train");
  const auto test_docs = generate(z, 3000, 2, kWorkers, "test");
  const auto m = train(train_docs, Vocabulary::kDefaultMinCount, TitleMode::kNewline, {});
  const auto curve = trigram_curve(m, test_docs, TitleMode::kNewline, 500, 50);
  const auto t = trend_of_curve(curve, 500, 0.05, 2);
  return {t.direction == TrendDirection::kIncreasing && t.p_value < 0.05,
          fmt("6000 training docs, V = %zu; %zu positions tested: %s, S = %lld, p = %.2g",
              m.vocab().size(), t.n, std::string(trend_direction_name(t.direction)).c_str(),
              static_cast<long long>(t.s_statistic), t.p_value)};
}

MarkovSource topic_source() {
  const std::size_t k = 8;
  MarkovSource s;
  s.transition.assign(k, std::vector<double>(k, 0.3 / static_cast<double>(k - 1)));
  for (std::size_t a = 0; a < k; ++a) s.transition[a][(a + 1) % k] = 0.7;
  s.initial.assign(k, 1.0 / static_cast<double>(k));
  s.topic_copy = PositionSchedule({{0, 0.0}, {200, 0.5}});
  s.length.fixed = 210;
  return s;
}

// Topic-token source: local trigram minus full-context oracle is positive
// and non-decreasing over positions 10-200.
Outcome mi_gap_sanity() {
  const auto src = topic_source();
  const auto train_docs = generate(src, 3000, 1, kWorkers, "train");
  const auto test_docs = generate(src, 1500, 2, kWorkers, "test");
  const auto m = train(train_docs, 1, TitleMode::kOmit, {});
  const auto local = trigram_curve(m, test_docs, TitleMode::kOmit, 201, 50);

  // The full-context scorer goes through the score-record wire format.
  std::stringstream wire;
  write_score_records(wire, oracle_records(src, test_docs), R"({"scorer":"oracle"})");
  const auto stream = read_score_records(wire);
  const auto full_seqs = ingest_scores(stream.records, test_docs, LogBase::kTwo, kWorkers);
  const auto full = build_curve(full_seqs, 201, 50, kWorkers);
  const auto gap = mi_gap(local, full);

  std::vector<double> window;
  double lowest = INFINITY;
  for (const auto& p : gap.points) {
    if (p.position < 10 || p.position > 200) continue;
    window.push_back(p.mean);
    lowest = std::min(lowest, p.mean);
  }
  const auto t = mann_kendall(window, 0.05);
  // Five equal blocks of the window must have non-decreasing means.
  std::vector<double> blocks;
  const std::size_t per = window.size() / 5;
  for (std::size_t b = 0; b < 5; ++b) {
    double sum = 0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) sum += window[i];
    blocks.push_back(sum / static_cast<double>(per));
  }
  const bool monotone_blocks = std::is_sorted(blocks.begin(), blocks.end());
  const bool pass = window.size() == 191 && lowest > 0.0 && monotone_blocks &&
                    t.direction == TrendDirection::kIncreasing;
  return {pass, fmt("min gap %.3f bits; block means %.3f %.3f %.3f %.3f %.3f; trend %s p = %.2g",
                    lowest, blocks[0], blocks[1], blocks[2], blocks[3], blocks[4],
                    std::string(trend_direction_name(t.direction)).c_str(), t.p_value)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "infodensity");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

// Every file type round-trips through its reader and writer, and a rerun
// with the same seed (and a different worker count) is byte-identical.
Outcome round_trip_and_rerun() {
  const fs::path root = fs::temp_directory_path() / "infodensity_acceptance";
  fs::remove_all(root);
  const std::string d = (root / "run").string();
  const std::string src =
      R"({"kind":"zipf-warmup","vocab_size":800,"length":{"kind":"geometric","p":0.02,"min":5,"max":300}})";
  const std::string markov =
      R"({"kind":"markov","transition":[[0.9,0.1],[0.1,0.9]],"initial":[0.5,0.5],"length":{"kind":"fixed","value":80}})";

  auto pipeline = [&](const std::string& workers) {
    int rc = 0;
    rc |= cli({"synth", "--source", src, "--n-docs", "1200", "--seed", "9", "--out",
               d + "/corpus.jsonl", "--workers", workers});
    rc |= cli({"synth", "--source", markov, "--n-docs", "100", "--seed", "9", "--out",
               d + "/markov.jsonl", "--entropy", d + "/entropy.csv", "--oracle-records",
               d + "/oracle.jsonl", "--workers", workers});
    rc |= cli({"preprocess", "--corpus", d + "/corpus.jsonl", "--sizes", "1000,100,100", "--seed",
               "4", "--out-dir", d + "/split", "--workers", workers});
    rc |= cli({"train-ngram", "--train", d + "/split/train.jsonl", "--vocab",
               d + "/split/vocab.txt", "--out", d + "/model.txt", "--workers", workers});
    rc |= cli({"score", "--test", d + "/split/test.jsonl", "--model", d + "/model.txt", "--out",
               d + "/scores.jsonl", "--workers", workers});
    rc |= cli({"score", "--test", d + "/markov.jsonl", "--records", d + "/oracle.jsonl", "--out",
               d + "/oracle_scores.jsonl", "--workers", workers});
    rc |= cli({"curve", "--input", d + "/scores.jsonl", "--out", d + "/curve.csv", "--histogram",
               d + "/hist.csv", "--min-docs", "5", "--workers", workers});
    rc |= cli({"curve", "--input", d + "/oracle_scores.jsonl", "--out", d + "/oracle_curve.csv",
               "--min-docs", "5", "--workers", workers});
    rc |= cli({"trend", "--curve", d + "/curve.csv", "--cutoff", "50", "--cutoff", "500",
               "--out", d + "/trend.jsonl"});
    rc |= cli({"migap", "--local", d + "/curve.csv", "--full", d + "/curve.csv", "--out",
               d + "/selfgap.csv"});
    return rc;
  };
  const std::vector<std::string> files = {
      "corpus.jsonl", "markov.jsonl",      "entropy.csv",       "oracle.jsonl",
      "split/train.jsonl", "split/val.jsonl", "split/test.jsonl", "split/vocab.txt",
      "model.txt",    "scores.jsonl",      "oracle_scores.jsonl", "curve.csv",
      "hist.csv",     "oracle_curve.csv",  "trend.jsonl",       "selfgap.csv"};

  if (pipeline("1") != 0) return {false, "pipeline failed on the first run"};
  fs::rename(d, root / "first");
  if (pipeline(std::to_string(std::max<std::size_t>(kWorkers, 3))) != 0) {
    return {false, "pipeline failed on the rerun"};
  }
  std::size_t identical = 0;
  std::string diffs;
  for (const auto& f : files) {
    const std::string a = slurp(root / "first" / f);
    if (!a.empty() && a == slurp(fs::path(d) / f)) {
      ++identical;
    } else {
      diffs += " " + f;
    }
  }

  // Reader/writer round trips, byte for byte.
  std::size_t round_trips = 0;
  std::string rt_fail;
  auto check = [&](const std::string& name, const std::function<std::string(const std::string&)>& fn) {
    const std::string original = slurp(fs::path(d) / name);
    if (fn(original) == original) {
      ++round_trips;
    } else {
      rt_fail += " " + name;
    }
  };
  auto config_header = [&](const std::string& text) {
    std::istringstream in(text);
    std::string a, b;
    std::getline(in, a);
    std::getline(in, b);
    return a + "\n" + b + "\n";
  };
  for (const char* f : {"corpus.jsonl", "markov.jsonl", "split/train.jsonl", "split/val.jsonl",
                        "split/test.jsonl"}) {
    check(f, [&](const std::string& text) {
      std::istringstream in(text);
      const auto docs = read_corpus(in);
      std::ostringstream out;
      write_corpus(out, docs, config_header(text));
      return out.str();
    });
  }
  check("split/vocab.txt", [](const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    Vocabulary::read(in).write(out);
    return out.str();
  });
  check("model.txt", [&](const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    TrigramModel::load(in).save(out, config_header(text));
    return out.str();
  });
  for (const char* f : {"scores.jsonl", "oracle_scores.jsonl"}) {
    check(f, [&](const std::string& text) {
      std::istringstream in(text);
      std::ostringstream out;
      write_surprisals(out, read_surprisals(in), config_header(text));
      return out.str();
    });
  }
  check("oracle.jsonl", [](const std::string& text) {
    std::istringstream in(text);
    const auto s = read_score_records(in);
    std::ostringstream out;
    write_score_records(out, s.records, s.header_json);
    return out.str();
  });
  for (const char* f : {"curve.csv", "oracle_curve.csv", "selfgap.csv"}) {
    check(f, [&](const std::string& text) {
      std::istringstream in(text);
      std::ostringstream out;
      write_curve_csv(out, read_curve_csv(in), config_header(text));
      return out.str();
    });
  }
  check("hist.csv", [&](const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    write_histogram_csv(out, read_histogram_csv(in), config_header(text));
    return out.str();
  });
  const std::size_t expected_round_trips = 14;
  fs::remove_all(root);
  const bool pass = identical == files.size() && round_trips == expected_round_trips;
  return {pass, fmt("%zu/%zu outputs byte-identical on rerun%s; %zu/%zu files round-trip%s",
                    identical, files.size(), diffs.empty() ? "" : (" (differ:" + diffs + ")").c_str(),
                    round_trips, expected_round_trips,
                    rt_fail.empty() ? "" : (" (differ:" + rt_fail + ")").c_str())};
}

// Frozen 10-document fixture with toy two-subtoken records reproduces the
// checked-in curve CSV.
Outcome handoff_fixture() {
  const fs::path dir(INFODENSITY_FIXTURE_DIR);
  const auto docs = read_corpus(dir / "handoff_corpus.jsonl");
  const auto stream = read_score_records(dir / "handoff_records.jsonl");
  const auto seqs = ingest_scores(stream.records, docs);
  const auto curve = build_curve(seqs, 60, 3);
  std::ostringstream out;
  write_curve_csv(out, curve);
  const std::string expected = slurp(dir / "handoff_curve.csv");
  return {out.str() == expected,
          fmt("%zu records, %zu curve rows, %zu bytes %s", stream.records.size(),
              curve.points.size(), out.str().size(),
              out.str() == expected ? "identical to handoff_curve.csv" : "DIFFER from handoff_curve.csv")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_seconds;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"trigram_normalization", 60, trigram_normalization},
      {"count_mle_oracle", 10, count_mle_oracle},
      {"mann_kendall_oracle", 10, mann_kendall_oracle},
      {"synthetic_constancy", 120, synthetic_constancy},
      {"synthetic_direction", 120, synthetic_direction},
      {"zipf_trigram_increasing", 600, zipf_trigram_increasing},
      {"mi_gap_sanity", 300, mi_gap_sanity},
      {"round_trip_and_rerun", 60, round_trip_and_rerun},
      {"handoff_fixture", 10, handoff_fixture},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs <= c.budget_seconds;
    if (!pass) ++failures;
    std::printf("%s %s: %s [%.1f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
