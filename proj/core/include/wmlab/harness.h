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

#ifndef WMLAB_HARNESS_H_
#define WMLAB_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wmlab/corpus.h"
#include "wmlab/detector.h"
#include "wmlab/generator.h"
#include "wmlab/python_runtime.h"
#include "wmlab/transforms.h"
#include "wmlab/watermark.h"

namespace wmlab {

enum class ProgramSource { kGenerator, kCorpus };
enum class ProviderKind { kUniform, kNGram };

struct GeneratorSettings {
  size_t identifier_count = 200;
  uint64_t identifier_seed = 0;
  ProviderKind provider = ProviderKind::kUniform;
  // The n-gram provider is trained on `ngram_programs` unwatermarked
  // programs drawn from the grammar under the uniform provider.
  size_t ngram_order = 2;
  double ngram_smoothing = 0.1;
  size_t ngram_programs = 200;
  size_t min_statements = 5;
  size_t max_statements = 8;
  double p_literal = 0.6;
  bool free_operators = false;
  bool watermark_signature = false;
};

// JSON keys match the field names below one for one.
struct ExperimentConfig {
  std::vector<Scheme> schemes = {Scheme::kUmd};
  double gamma = 0.25;
  double delta = 2.0;
  WatermarkKey key{0xdeadbeef};
  double z_threshold = 3.0;
  size_t group_size = 3;
  UmdFormula umd_formula = UmdFormula::kGeneral;
  bool ignore_repeated = true;
  bool count_layout = false;
  std::vector<TransformKind> transforms = {
      TransformKind::kAddDeadCode, TransformKind::kRename,
      TransformKind::kInsertPrint, TransformKind::kWrapTryCatch,
      TransformKind::kMixed};
  std::vector<size_t> d_values = {5};
  bool include_original = true;  // adds an untransformed d = 0 row
  size_t trials = 100;    // watermarked trials per repetition
  size_t controls = 100;  // unwatermarked trials per repetition
  size_t repetitions = 3;
  uint64_t base_seed = 1;
  ProgramSource source = ProgramSource::kGenerator;
  std::string corpus_path;
  std::string lexicon_path;  // empty: the bundled word list
  GeneratorSettings generator;
  HandlerMode handler = HandlerMode::kRaise;
  bool check_equivalence = false;
  std::string python;  // interpreter override for equivalence checks
  size_t threads = 1;
  std::string output_dir = "results";

  // Throws ConfigError on unknown keys, bad values or missing paths.
  static ExperimentConfig FromJson(const nlohmann::json& json);
  static ExperimentConfig Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
  void Validate() const;

  SchemeConfig SchemeFor(wmlab::Scheme scheme) const;
  DetectorConfig DetectorFor(uint64_t grouping_seed) const;
};

// The bundled lexicon shipped with the sources or the install tree.
std::filesystem::path DefaultLexiconPath();

// One (transform, d) cell of an experiment. No transform means the
// untransformed baseline.
struct Cell {
  std::optional<TransformKind> transform;
  size_t d = 0;

  std::string TransformLabel() const;
  bool operator==(const Cell&) const = default;
};

enum class Equivalence { kSkipped, kEqual, kDifferent, kTimeout, kError };

std::string_view EquivalenceName(Equivalence e);
Equivalence ParseEquivalence(std::string_view name);

struct TrialRecord {
  uint64_t trial_id = 0;
  size_t repetition = 0;
  uint64_t seed = 0;
  wmlab::Scheme scheme = wmlab::Scheme::kUmd;
  std::string transform;  // TransformKindName or "Original"
  size_t d = 0;
  bool watermarked = false;
  size_t programs = 0;
  size_t tokens_before = 0;
  size_t tokens_after = 0;
  double token_change = 0.0;  // mean over the trial's programs
  size_t scored = 0;          // T
  size_t green_count = 0;
  double z = 0.0;
  double p = 1.0;
  bool decision = false;
  Equivalence equivalence = Equivalence::kSkipped;
  std::string error;  // non-empty for a failed trial

  bool operator==(const TrialRecord&) const = default;
};

// Ids are laid out repetition-major: watermarked trials first, then controls.
struct TrialIdentity {
  size_t repetition = 0;
  size_t index = 0;
  bool watermarked = false;
};

class Experiment {
 public:
  // Loads the lexicon, corpus and provider. Throws ConfigError/IngestError.
  explicit Experiment(ExperimentConfig config);
  ~Experiment();
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;

  const ExperimentConfig& config() const { return config_; }
  const GrammarSpec& grammar() const { return grammar_; }
  const WordLexicon& lexicon() const { return lexicon_; }
  const DistributionProvider& provider() const { return *provider_; }

  std::vector<Cell> Cells() const;
  size_t TrialCount() const;
  TrialIdentity Identify(uint64_t trial_id) const;
  uint64_t TrialSeed(uint64_t trial_id) const;

  // One record per (scheme, cell) for this trial, in config order. Module
  // errors become failed records instead of exceptions. Equivalence is left
  // as kSkipped; RunAll fills it in batches.
  std::vector<TrialRecord> RunTrial(uint64_t trial_id) const;
  TrialRecord RunTrial(const Cell& cell, wmlab::Scheme scheme, uint64_t trial_id) const;

  // All trials on `config.threads` workers, sorted by trial id. The result
  // does not depend on the thread count.
  std::vector<TrialRecord> RunAll() const;

  struct Outcome;

 private:
  struct Program;
  std::vector<Program> Programs(uint64_t trial_id, wmlab::Scheme scheme) const;
  std::vector<Outcome> RunTrialOutcomes(uint64_t trial_id, bool keep_sources) const;

  ExperimentConfig config_;
  WordLexicon lexicon_;
  GrammarSpec grammar_;
  std::vector<CorpusItem> corpus_;
  std::unique_ptr<DistributionProvider> provider_;
  std::optional<PythonRuntime> runtime_;
};

struct EquivalenceCheck {
  Equivalence verdict = Equivalence::kEqual;
  std::string detail;
};

// Runs both programs on every argument tuple of `original`. Return values
// must match; printed output is ignored.
EquivalenceCheck CheckEquivalence(const CorpusItem& original,
                                  std::string_view perturbed,
                                  const PythonRuntime& runtime);

struct RateSummary {
  wmlab::Scheme scheme = wmlab::Scheme::kUmd;
  std::string transform;
  size_t d = 0;
  size_t watermarked = 0;
  size_t detected = 0;
  size_t controls = 0;
  size_t false_alarms = 0;
  size_t failed = 0;
  std::optional<double> tpr;
  std::optional<double> fpr;  // undefined without controls
  double mean_token_change = 0.0;
  // Across repetitions.
  std::optional<double> tpr_mean, tpr_stddev, fpr_mean, fpr_stddev;
  size_t equivalence_checked = 0;
  size_t equivalence_equal = 0;
  size_t equivalence_timeout = 0;
};

// Groups by (scheme, transform, d) in order of first appearance. Failed
// trials are counted but excluded from every rate.
std::vector<RateSummary> ComputeRates(std::span<const TrialRecord> records);

// Runs the config once per d in 0..d_max (transforms only, no separate
// baseline) and returns the records; seeds do not depend on d, and the
// perturbation at d is a prefix of the one at d + 1.
std::vector<TrialRecord> SweepTransformCount(ExperimentConfig config, size_t d_max);

}  // namespace wmlab

#endif  // WMLAB_HARNESS_H_
