// Copyright 2026 The wmlab Authors
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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wmlab/corpus.h"
#include "wmlab/detector.h"
#include "wmlab/error.h"
#include "wmlab/harness.h"
#include "wmlab/hash.h"
#include "wmlab/lexicon.h"
#include "wmlab/python_runtime.h"
#include "wmlab/report.h"
#include "wmlab/syntax_tree.h"
#include "wmlab/transforms.h"

namespace fs = std::filesystem;
using namespace wmlab;

namespace {

// Criterion 1
constexpr double kUnigramZTolerance = 1e-4;
// Criterion 2
constexpr size_t kNullControls = 1000;
constexpr double kMaxFpr = 0.01;
// Criterion 3
constexpr size_t kPowerTrials = 300;
constexpr double kMinTpr = 0.70;
// Criterion 4
constexpr double kMaxRenameChange = 0.15;
constexpr double kMinDeadCodeChange = 0.20;
// Criterion 5
constexpr size_t kSweepTrials = 400;
constexpr size_t kSweepDMax = 5;
constexpr double kMaxUpwardStep = 0.03;
// Criterion 6
constexpr size_t kPerturbations = 1000;
// Criterion 8
constexpr size_t kOracleKeys = 100;

size_t Threads() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, a);
  return buf;
}

std::string Rate(const std::optional<double>& x) { return x ? Fmt("%.4f", *x) : "NA"; }

ExperimentConfig Pipeline() {
  ExperimentConfig c;
  c.schemes = {Scheme::kUmd, Scheme::kUnigram};
  c.gamma = 0.25;
  c.delta = 2.0;
  c.group_size = 3;
  c.z_threshold = 3.0;
  c.repetitions = 1;
  c.threads = Threads();
  c.transforms.clear();
  return c;
}

Outcome FormulaOracles() {
  const double literal = ZScoreUmd(75, 100, UmdFormula::kLiteral, 0.25);
  const double unigram = ZScoreUnigram(40, 100, 0.25);
  const double zero_umd = ZScoreUmd(50, 100, UmdFormula::kLiteral, 0.25);
  const double zero_uni = ZScoreUnigram(25, 100, 0.25);
  Outcome o;
  o.pass = literal == 5.0 && std::fabs(unigram - 3.4641) <= kUnigramZTolerance &&
           zero_umd == 0.0 && zero_uni == 0.0;
  o.detail = "zUMD(75,100)=" + Fmt("%.6f", literal) + " zUnigram(40,100,0.25)=" +
             Fmt("%.6f", unigram) + " zero cases " + Fmt("%g", zero_umd) + "," +
             Fmt("%g", zero_uni);
  return o;
}

Outcome NullCalibration() {
  ExperimentConfig c = Pipeline();
  c.trials = 0;
  c.controls = kNullControls;
  const auto records = Experiment(c).RunAll();
  const auto rates = ComputeRates(records);
  Outcome o{true, ""};
  for (const RateSummary& s : rates) {
    double scored = 0, raw = 0;
    for (const TrialRecord& r : records) {
      if (r.scheme == s.scheme) scored += r.scored, raw += r.tokens_after;
    }
    const double n = static_cast<double>(s.controls);
    o.pass = o.pass && s.controls >= kNullControls && s.failed == 0 && s.fpr && *s.fpr <= kMaxFpr;
    o.detail += std::string(SchemeName(s.scheme)) + " FPR=" + Rate(s.fpr) + " over " +
                std::to_string(s.controls) + " controls (group tokens " + Fmt("%.0f", raw / n) +
                ", scored T " + Fmt("%.0f", scored / n) + "); ";
  }
  return o;
}

Outcome Power() {
  ExperimentConfig c = Pipeline();
  c.trials = kPowerTrials;
  c.controls = 0;
  const auto rates = ComputeRates(Experiment(c).RunAll());
  Outcome o{true, ""};
  for (const RateSummary& s : rates) {
    o.pass = o.pass && s.watermarked >= kPowerTrials && s.tpr && *s.tpr >= kMinTpr;
    o.detail += std::string(SchemeName(s.scheme)) + " TPR=" + Rate(s.tpr) + " over " +
                std::to_string(s.watermarked) + " trials; ";
  }
  return o;
}

Outcome CorpusOrdering() {
  ExperimentConfig c = Pipeline();
  c.schemes = {Scheme::kUmd};
  c.source = ProgramSource::kCorpus;
  c.corpus_path = WMLAB_TEST_CORPUS_DIR;
  c.group_size = 1;
  c.trials = 0;
  c.controls = 320;
  c.include_original = false;
  c.transforms = {TransformKind::kAddDeadCode, TransformKind::kWrapTryCatch,
                  TransformKind::kInsertPrint, TransformKind::kRename};
  c.d_values = {5};
  std::map<std::string, double> change;
  for (const RateSummary& s : ComputeRates(Experiment(c).RunAll())) {
    change[s.transform] = s.mean_token_change;
  }
  const double dead = change["AddDeadCode"], wrap = change["WrapTryCatch"],
               print = change["InsertPrint"], rename = change["Rename"];
  Outcome o;
  o.pass = dead > wrap && wrap > print && print > rename && rename <= kMaxRenameChange &&
           dead >= kMinDeadCodeChange;
  o.detail = "AddDeadCode=" + Fmt("%.4f", dead) + " WrapTryCatch=" + Fmt("%.4f", wrap) +
             " InsertPrint=" + Fmt("%.4f", print) + " Rename=" + Fmt("%.4f", rename);
  return o;
}

Outcome Degradation() {
  ExperimentConfig c = Pipeline();
  c.trials = kSweepTrials;
  c.controls = 0;
  c.transforms = {TransformKind::kAddDeadCode, TransformKind::kRename,
                  TransformKind::kInsertPrint, TransformKind::kWrapTryCatch,
                  TransformKind::kMixed};
  std::map<std::pair<Scheme, std::string>, std::vector<double>> curves;
  for (const RateSummary& s : ComputeRates(SweepTransformCount(c, kSweepDMax))) {
    auto& curve = curves[{s.scheme, s.transform}];
    if (curve.size() <= s.d) curve.resize(s.d + 1, std::nan(""));
    curve[s.d] = s.tpr.value_or(std::nan(""));
  }
  Outcome o{true, ""};
  std::string failures;
  for (Scheme scheme : c.schemes) {
    o.detail += std::string(SchemeName(scheme)) + " [";
    for (const auto& [key, curve] : curves) {
      if (key.first != scheme) continue;
      o.detail += key.second + ":";
      for (size_t d = 0; d < curve.size(); ++d) o.detail += (d ? "," : "") + Fmt("%.3f", curve[d]);
      o.detail += " ";
      for (size_t d = 1; d < curve.size(); ++d) {
        if (!(curve[d] <= curve[d - 1] + kMaxUpwardStep)) {
          failures += std::string(SchemeName(scheme)) + " " + key.second + " rises at d=" +
                      std::to_string(d) + "; ";
        }
      }
      if (!(curve.back() < curve.front())) {
        failures += std::string(SchemeName(scheme)) + " " + key.second + " d=5 not below d=0; ";
      }
    }
    o.detail += "] ";
    const double rename = curves[{scheme, "Rename"}].back();
    for (const char* heavy : {"AddDeadCode", "WrapTryCatch"}) {
      const double v = curves[{scheme, heavy}].back();
      if (!(v < rename)) {
        failures += std::string(SchemeName(scheme)) + " " + heavy + " d=5 (" + Fmt("%.3f", v) +
                    ") not below Rename (" + Fmt("%.3f", rename) + "); ";
      }
    }
  }
  o.pass = failures.empty();
  if (!failures.empty()) o.detail += "| violations: " + failures;
  return o;
}

Outcome SemanticPreservation() {
  std::optional<PythonRuntime> runtime;
  try {
    runtime = PythonRuntime::Discover();
  } catch (const RuntimeUnavailableError& e) {
    return {false, std::string("no Python runtime: ") + e.what()};
  }
  const auto items = IngestCorpus(WMLAB_TEST_CORPUS_DIR, &*runtime);
  const WordLexicon lexicon = WordLexicon::Load(DefaultLexiconPath());
  const TransformKind kinds[] = {TransformKind::kAddDeadCode, TransformKind::kRename,
                                 TransformKind::kInsertPrint, TransformKind::kWrapTryCatch,
                                 TransformKind::kMixed};
  std::vector<ExecJob> jobs;
  std::vector<const CorpusItem*> owners;
  size_t parse_failures = 0;
  std::string first_failure;
  for (size_t i = 0; i < kPerturbations; ++i) {
    const CorpusItem& item = items[i % items.size()];
    const TransformKind kind = kinds[(i / items.size()) % 5];
    try {
      const std::string out = Perturb(item.source, 5, kind, lexicon, DeriveSeed(0xacce55, i)).source;
      ParseProgram(out);
      jobs.push_back({out, item.entry, item.args});
      owners.push_back(&item);
    } catch (const Error& e) {
      if (parse_failures++ == 0) first_failure = item.id + ": " + e.what();
    }
  }
  const auto results = runtime->Run(jobs);
  size_t equal = 0, timeouts = 0, mismatches = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    if (results[i].status == ExecStatus::kTimeout) {
      ++timeouts;
    } else if (results[i].status == ExecStatus::kOk && results[i].values == owners[i]->expected) {
      ++equal;
    } else {
      if (mismatches++ == 0 && first_failure.empty()) first_failure = owners[i]->id;
    }
  }
  Outcome o;
  o.pass = parse_failures == 0 && mismatches == 0 && jobs.size() == kPerturbations;
  o.detail = std::to_string(kPerturbations) + " perturbations: " +
             std::to_string(kPerturbations - parse_failures) + " parse, " + std::to_string(equal) +
             " equal, " + std::to_string(timeouts) + " timeouts, " + std::to_string(mismatches) +
             " mismatches";
  if (!first_failure.empty()) o.detail += " (first: " + first_failure + ")";
  return o;
}

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome Determinism() {
  ExperimentConfig c = Pipeline();
  c.transforms = {TransformKind::kAddDeadCode, TransformKind::kRename,
                  TransformKind::kInsertPrint, TransformKind::kWrapTryCatch,
                  TransformKind::kMixed};
  c.trials = 60;
  c.controls = 60;
  c.repetitions = 3;
  const fs::path root = fs::temp_directory_path() / "wmlab_acceptance_determinism";
  fs::remove_all(root);
  std::string files[2];
  size_t threads[2] = {1, std::max<size_t>(4, Threads())};
  for (int run = 0; run < 2; ++run) {
    c.threads = threads[run];
    const auto records = Experiment(c).RunAll();
    const fs::path dir = root / std::to_string(run);
    EmitReport(dir, ComputeRates(records), records);
    files[run] = ReadAll(dir / "trials.csv");
  }
  fs::remove_all(root);
  Outcome o;
  o.pass = !files[0].empty() && files[0] == files[1];
  o.detail = "trials.csv " + std::to_string(files[0].size()) + " bytes, threads " +
             std::to_string(threads[0]) + " vs " + std::to_string(threads[1]) +
             (o.pass ? ", identical" : ", different");
  return o;
}

Outcome SmallOracle() {
  SplitMix64 rng(8);
  size_t checked = 0, mismatches = 0;
  for (size_t k = 0; k < kOracleKeys; ++k) {
    const WatermarkKey key{rng.Next()};
    std::vector<std::string> texts(6);
    for (auto& t : texts) t = "tok" + std::to_string(rng.UniformIndex(50));
    const TokenStream stream = TokenStream::FromTexts(texts);
    for (Scheme scheme : {Scheme::kUmd, Scheme::kUnigram}) {
      SchemeConfig sc;
      sc.scheme = scheme;
      size_t brute = 0;
      for (size_t i = 0; i < texts.size(); ++i) {
        brute += IsGreen(key, sc, i == 0 ? std::string(kBoundaryContext) : texts[i - 1], texts[i]);
      }
      ++checked;
      mismatches += CountGreen(stream, key, sc) != brute;
    }
  }
  return {mismatches == 0, std::to_string(checked) + " (key, scheme) cases, " +
                               std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"formula oracles", FormulaOracles},     {"null calibration", NullCalibration},
      {"watermark power", Power},              {"token-change ordering", CorpusOrdering},
      {"degradation trend", Degradation},      {"semantic preservation", SemanticPreservation},
      {"determinism", Determinism},            {"small-instance oracle", SmallOracle},
  };
  int failed = 0;
  for (size_t i = 0; i < std::size(criteria); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria failed\n", failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
