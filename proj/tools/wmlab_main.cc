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

// Command-line front end: generate, perturb, detect, corpus, experiment and
// sweep. Exit codes: 0 success, 1 usage, 2 bad data or internal error,
// 3 runtime unavailable.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wmlab/corpus.h"
#include "wmlab/detector.h"
#include "wmlab/error.h"
#include "wmlab/generator.h"
#include "wmlab/harness.h"
#include "wmlab/hash.h"
#include "wmlab/lexicon.h"
#include "wmlab/python_runtime.h"
#include "wmlab/report.h"
#include "wmlab/transforms.h"

namespace fs = std::filesystem;
using namespace wmlab;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

std::optional<std::string> Flag(const std::string& value) {
  return value.empty() ? std::nullopt : std::optional<std::string>(value);
}

// Files are taken as given; directories contribute their .py files in name order.
std::vector<fs::path> ExpandInputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> paths;
  for (const std::string& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".py") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      paths.insert(paths.end(), found.begin(), found.end());
    } else {
      paths.emplace_back(in);
    }
  }
  if (paths.empty()) throw ConfigError("no input programs");
  return paths;
}

void PrintRates(const std::vector<RateSummary>& summaries) {
  for (const RateSummary& s : summaries) {
    std::cout << SchemeName(s.scheme) << ' ' << s.transform << " d=" << s.d
              << " tpr=" << (s.tpr ? std::to_string(*s.tpr) : "NA")
              << " fpr=" << (s.fpr ? std::to_string(*s.fpr) : "NA")
              << " change=" << s.mean_token_change << " failed=" << s.failed << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness of green-list watermarks on Python code"};
  app.require_subcommand(1);

  // generate
  std::string gen_config, gen_out, gen_python;
  size_t gen_count = 10, gen_controls = 0;
  std::string gen_scheme = "UMD";
  auto* generate = app.add_subcommand("generate", "Write a bundle of generated programs");
  generate->add_option("--config", gen_config, "Experiment config for grammar and watermark");
  generate->add_option("--out", gen_out, "Output bundle directory")->required();
  generate->add_option("--count", gen_count, "Watermarked programs");
  generate->add_option("--controls", gen_controls, "Unwatermarked programs");
  generate->add_option("--scheme", gen_scheme, "UMD or Unigram");
  generate->add_option("--python", gen_python, "Python interpreter");

  // perturb
  std::string per_in, per_out, per_trace, per_lexicon, per_transform = "Mixed";
  std::string per_handler = "raise";
  size_t per_d = 5;
  uint64_t per_seed = 0;
  auto* perturb = app.add_subcommand("perturb", "Apply d random transformations to a program");
  perturb->add_option("--in", per_in, "Input program")->required();
  perturb->add_option("--transform", per_transform,
                      "AddDeadCode, Rename, InsertPrint, WrapTryCatch or Mixed");
  perturb->add_option("--d", per_d, "Number of transformations");
  perturb->add_option("--seed", per_seed, "Perturbation seed");
  perturb->add_option("--lexicon", per_lexicon, "Word list for fillers");
  perturb->add_option("--out", per_out, "Output program (default stdout)");
  perturb->add_option("--trace", per_trace, "Write the JSON-lines trace here");
  perturb->add_option("--handler", per_handler, "Except body: raise or pass");

  // detect
  std::vector<std::string> det_in;
  std::string det_key = "deadbeef", det_scheme = "UMD", det_formula = "general", det_out;
  double det_gamma = 0.25, det_z = 3.0;
  size_t det_group = 1;
  uint64_t det_grouping_seed = 0;
  bool det_layout = false, det_repeated = false;
  auto* detect = app.add_subcommand("detect", "Score programs for the watermark");
  detect->add_option("--in", det_in, "Program files or directories")->required();
  detect->add_option("--key", det_key, "Watermark key (hex)");
  detect->add_option("--scheme", det_scheme, "UMD or Unigram");
  detect->add_option("--gamma", det_gamma, "Green fraction");
  detect->add_option("--z-threshold", det_z, "Decision threshold");
  detect->add_option("--group", det_group, "Programs pooled per report");
  detect->add_option("--grouping-seed", det_grouping_seed, "Seed of the grouping shuffle");
  detect->add_option("--umd-formula", det_formula, "general or literal");
  detect->add_flag("--count-layout", det_layout, "Score NEWLINE/INDENT/DEDENT");
  detect->add_flag("--count-repeated", det_repeated, "Score every occurrence of a unit");
  detect->add_option("--out", det_out, "CSV output (default stdout)");

  // corpus
  std::string cor_dir, cor_python;
  bool cor_refresh = false;
  auto* corpus = app.add_subcommand("corpus", "Verify a bundle or recompute its expected values");
  corpus->add_option("--dir", cor_dir, "Bundle directory")->required();
  corpus->add_flag("--refresh", cor_refresh, "Recompute expected values and rewrite the manifest");
  corpus->add_option("--python", cor_python, "Python interpreter");

  // experiment
  std::string exp_config, exp_out, exp_python;
  size_t exp_threads = 0;
  auto* experiment = app.add_subcommand("experiment", "Run a configured experiment");
  experiment->add_option("--config", exp_config, "Experiment config (JSON)")->required();
  experiment->add_option("--out", exp_out, "Output directory (overrides the config)");
  experiment->add_option("--threads", exp_threads, "Worker threads (overrides the config)");
  experiment->add_option("--python", exp_python, "Python interpreter");

  // sweep
  std::string sw_config, sw_out;
  size_t sw_d_max = 5, sw_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "TPR against the number of transformations");
  sweep->add_option("--config", sw_config, "Experiment config (JSON)")->required();
  sweep->add_option("--d-max", sw_d_max, "Largest d");
  sweep->add_option("--out", sw_out, "Output directory (overrides the config)");
  sweep->add_option("--threads", sw_threads, "Worker threads (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) {
      ExperimentConfig config =
          gen_config.empty() ? ExperimentConfig{} : ExperimentConfig::Load(gen_config);
      config.check_equivalence = false;
      config.source = ProgramSource::kGenerator;
      const PythonRuntime runtime =
          PythonRuntime::Discover(Flag(gen_python.empty() ? config.python : gen_python));
      const Experiment exp(config);
      const WatermarkSpec spec{config.key, config.SchemeFor(ParseScheme(gen_scheme))};
      std::vector<CorpusItem> items;
      for (size_t i = 0; i < gen_count + gen_controls; ++i) {
        const bool marked = i < gen_count;
        const uint64_t seed = DeriveSeed(config.base_seed, i);
        GeneratedProgram g = GenerateProgram(
            exp.grammar(), exp.provider(),
            marked ? std::optional<WatermarkSpec>(spec) : std::nullopt, seed);
        CorpusItem item;
        char id[32];
        std::snprintf(id, sizeof(id), "%s%04zu", marked ? "wm" : "ctl", i);
        item.id = id;
        item.source = std::move(g.source);
        item.entry = std::move(g.entry);
        for (const auto& tuple : g.args) item.args.push_back(FormatArgs(tuple));
        item.seed = seed;
        item.watermarked = marked;
        items.push_back(std::move(item));
      }
      ComputeExpected(items, runtime);
      WriteBundle(gen_out, items);
      std::cout << "wrote " << items.size() << " programs to " << gen_out << '\n';
    } else if (*perturb) {
      const WordLexicon lexicon =
          WordLexicon::Load(per_lexicon.empty() ? DefaultLexiconPath() : fs::path(per_lexicon));
      TransformOptions options;
      options.handler = ParseHandlerMode(per_handler);
      const PerturbResult result = Perturb(ReadText(per_in), per_d,
                                           ParseTransformKind(per_transform), lexicon,
                                           per_seed, options);
      if (per_out.empty()) {
        std::cout << result.source;
      } else {
        WriteText(per_out, result.source);
      }
      if (!per_trace.empty()) WriteText(per_trace, TraceToJsonLines(result.trace));
    } else if (*detect) {
      SchemeConfig scheme;
      scheme.scheme = ParseScheme(det_scheme);
      scheme.gamma = det_gamma;
      scheme.Validate();
      DetectorConfig det;
      det.z_threshold = det_z;
      det.group_size = det_group;
      det.grouping_seed = det_grouping_seed;
      det.umd_formula = ParseUmdFormula(det_formula);
      det.count_layout = det_layout;
      det.ignore_repeated = !det_repeated;
      std::vector<TokenStream> streams;
      for (const fs::path& p : ExpandInputs(det_in)) streams.push_back(Tokenize(ReadText(p)));
      const auto reports =
          DetectGrouped(streams, WatermarkKey::FromHex(det_key), scheme, det);
      if (det_out.empty()) {
        WriteReportsCsv(std::cout, reports);
      } else {
        std::ofstream out(det_out, std::ios::binary);
        WriteReportsCsv(out, reports);
        if (!out) throw IoError("cannot write " + det_out);
      }
    } else if (*corpus) {
      const PythonRuntime runtime = PythonRuntime::Discover(Flag(cor_python));
      if (cor_refresh) {
        std::vector<CorpusItem> items = IngestCorpus(cor_dir, nullptr, false);
        ComputeExpected(items, runtime);
        WriteBundle(cor_dir, items);
        std::cout << "refreshed " << items.size() << " programs\n";
      } else {
        const auto items = IngestCorpus(cor_dir, &runtime);
        std::cout << items.size() << " programs verified\n";
      }
    } else if (*experiment) {
      ExperimentConfig config = ExperimentConfig::Load(exp_config);
      if (!exp_out.empty()) config.output_dir = exp_out;
      if (exp_threads > 0) config.threads = exp_threads;
      if (!exp_python.empty()) config.python = exp_python;
      const Experiment exp(config);
      const std::vector<TrialRecord> records = exp.RunAll();
      const std::vector<RateSummary> summaries = ComputeRates(records);
      EmitReport(config.output_dir, summaries, records);
      PrintRates(summaries);
    } else if (*sweep) {
      ExperimentConfig config = ExperimentConfig::Load(sw_config);
      if (!sw_out.empty()) config.output_dir = sw_out;
      if (sw_threads > 0) config.threads = sw_threads;
      const std::vector<TrialRecord> records = SweepTransformCount(config, sw_d_max);
      const std::vector<RateSummary> summaries = ComputeRates(records);
      EmitReport(config.output_dir, summaries, records);
      PrintRates(summaries);
    }
  } catch (const Error& e) {
    std::cerr << "wmlab: " << e.what() << '\n';
    switch (e.category()) {
      case ErrorCategory::kUsage: return kExitUsage;
      case ErrorCategory::kRuntime: return kExitRuntime;
      case ErrorCategory::kData:
      case ErrorCategory::kInternal: return kExitData;
    }
  } catch (const std::exception& e) {
    std::cerr << "wmlab: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
