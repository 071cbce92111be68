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

#include "wmlab/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "wmlab/error.h"
#include "wmlab/hash.h"

namespace wmlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Reads known keys from a JSON object and rejects the rest.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string where)
      : object_(object), where_(std::move(where)) {
    if (!object_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  template <typename T>
  void Read(const char* key, T& out) {
    if (!Has(key)) return;
    try {
      out = object_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + " has the wrong type");
    }
  }

  bool Has(const char* key) {
    seen_.insert(key);
    return object_.contains(key);
  }

  const json& At(const char* key) const { return object_.at(key); }

  void Finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key " + where_ + "." + key);
    }
  }

 private:
  const json& object_;
  std::string where_;
  std::set<std::string> seen_;
};

std::string ProgramSourceName(ProgramSource source) {
  return source == ProgramSource::kCorpus ? "corpus" : "generator";
}

ProgramSource ParseProgramSource(std::string_view name) {
  if (name == "corpus") return ProgramSource::kCorpus;
  if (name == "generator") return ProgramSource::kGenerator;
  throw ConfigError("unknown source '" + std::string(name) + "' (expected generator or corpus)");
}

std::string ProviderName(ProviderKind kind) {
  return kind == ProviderKind::kNGram ? "ngram" : "uniform";
}

ProviderKind ParseProvider(std::string_view name) {
  if (name == "ngram") return ProviderKind::kNGram;
  if (name == "uniform") return ProviderKind::kUniform;
  throw ConfigError("unknown provider '" + std::string(name) + "' (expected uniform or ngram)");
}

std::vector<size_t> ParseDValues(const json& value) {
  std::vector<size_t> out;
  try {
    if (value.is_array()) {
      for (const json& d : value) out.push_back(d.get<size_t>());
    } else {
      out.push_back(value.get<size_t>());
    }
  } catch (const json::exception&) {
    throw ConfigError("d values must be non-negative integers");
  }
  return out;
}

GeneratorSettings ParseGenerator(const json& value) {
  GeneratorSettings g;
  ObjectReader r(value, "generator");
  r.Read("identifier_count", g.identifier_count);
  r.Read("identifier_seed", g.identifier_seed);
  if (r.Has("provider")) g.provider = ParseProvider(r.At("provider").get<std::string>());
  r.Read("ngram_order", g.ngram_order);
  r.Read("ngram_smoothing", g.ngram_smoothing);
  r.Read("ngram_programs", g.ngram_programs);
  r.Read("min_statements", g.min_statements);
  r.Read("max_statements", g.max_statements);
  r.Read("p_literal", g.p_literal);
  r.Read("free_operators", g.free_operators);
  r.Read("watermark_signature", g.watermark_signature);
  r.Finish();
  return g;
}

}  // namespace

ExperimentConfig ExperimentConfig::FromJson(const json& value) {
  ExperimentConfig c;
  ObjectReader r(value, "config");
  if (r.Has("schemes")) {
    c.schemes.clear();
    const json& s = r.At("schemes");
    if (s.is_string()) {
      c.schemes.push_back(ParseScheme(s.get<std::string>()));
    } else if (s.is_array()) {
      for (const json& name : s) {
        if (!name.is_string()) throw ConfigError("config.schemes entries must be strings");
        c.schemes.push_back(ParseScheme(name.get<std::string>()));
      }
    } else {
      throw ConfigError("config.schemes must be a string or an array");
    }
  }
  r.Read("gamma", c.gamma);
  r.Read("delta", c.delta);
  if (r.Has("key")) {
    const json& k = r.At("key");
    if (k.is_string()) {
      c.key = WatermarkKey::FromHex(k.get<std::string>());
    } else if (k.is_number_unsigned()) {
      c.key = WatermarkKey{k.get<uint64_t>()};
    } else {
      throw ConfigError("config.key must be a hex string or an unsigned integer");
    }
  }
  r.Read("z_threshold", c.z_threshold);
  r.Read("group_size", c.group_size);
  if (r.Has("umd_formula")) c.umd_formula = ParseUmdFormula(r.At("umd_formula").get<std::string>());
  r.Read("ignore_repeated", c.ignore_repeated);
  r.Read("count_layout", c.count_layout);
  if (r.Has("transforms")) {
    c.transforms.clear();
    for (const json& name : r.At("transforms")) {
      if (!name.is_string()) throw ConfigError("config.transforms entries must be strings");
      c.transforms.push_back(ParseTransformKind(name.get<std::string>()));
    }
  }
  const bool has_d = r.Has("d");
  const bool has_d_values = r.Has("d_values");
  if (has_d && has_d_values) throw ConfigError("config sets both d and d_values");
  if (has_d) c.d_values = ParseDValues(r.At("d"));
  if (has_d_values) c.d_values = ParseDValues(r.At("d_values"));
  r.Read("include_original", c.include_original);
  r.Read("trials", c.trials);
  r.Read("controls", c.controls);
  r.Read("repetitions", c.repetitions);
  r.Read("base_seed", c.base_seed);
  if (r.Has("source")) c.source = ParseProgramSource(r.At("source").get<std::string>());
  r.Read("corpus_path", c.corpus_path);
  r.Read("lexicon_path", c.lexicon_path);
  if (r.Has("generator")) c.generator = ParseGenerator(r.At("generator"));
  if (r.Has("handler")) c.handler = ParseHandlerMode(r.At("handler").get<std::string>());
  r.Read("check_equivalence", c.check_equivalence);
  r.Read("python", c.python);
  r.Read("threads", c.threads);
  r.Read("output_dir", c.output_dir);
  r.Finish();
  return c;
}

ExperimentConfig ExperimentConfig::Load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json value;
  try {
    value = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  ExperimentConfig c = FromJson(value);
  // Relative data paths resolve against the config's directory.
  const fs::path base = path.parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && fs::path(p).is_relative()) p = (base / p).lexically_normal().string();
  };
  resolve(c.corpus_path);
  resolve(c.lexicon_path);
  return c;
}

json ExperimentConfig::ToJson() const {
  json j;
  j["schemes"] = json::array();
  for (wmlab::Scheme s : schemes) j["schemes"].push_back(SchemeName(s));
  j["gamma"] = gamma;
  j["delta"] = delta;
  j["key"] = key.ToHex();
  j["z_threshold"] = z_threshold;
  j["group_size"] = group_size;
  j["umd_formula"] = UmdFormulaName(umd_formula);
  j["ignore_repeated"] = ignore_repeated;
  j["count_layout"] = count_layout;
  j["transforms"] = json::array();
  for (TransformKind t : transforms) j["transforms"].push_back(TransformKindName(t));
  j["d_values"] = d_values;
  j["include_original"] = include_original;
  j["trials"] = trials;
  j["controls"] = controls;
  j["repetitions"] = repetitions;
  j["base_seed"] = base_seed;
  j["source"] = ProgramSourceName(source);
  j["corpus_path"] = corpus_path;
  j["lexicon_path"] = lexicon_path;
  j["generator"] = {
      {"identifier_count", generator.identifier_count},
      {"identifier_seed", generator.identifier_seed},
      {"provider", ProviderName(generator.provider)},
      {"ngram_order", generator.ngram_order},
      {"ngram_smoothing", generator.ngram_smoothing},
      {"ngram_programs", generator.ngram_programs},
      {"min_statements", generator.min_statements},
      {"max_statements", generator.max_statements},
      {"p_literal", generator.p_literal},
      {"free_operators", generator.free_operators},
      {"watermark_signature", generator.watermark_signature}};
  j["handler"] = HandlerModeName(handler);
  j["check_equivalence"] = check_equivalence;
  j["python"] = python;
  j["threads"] = threads;
  j["output_dir"] = output_dir;
  return j;
}

void ExperimentConfig::Validate() const {
  if (schemes.empty()) throw ConfigError("at least one scheme is required");
  for (wmlab::Scheme s : schemes) SchemeFor(s).Validate();
  DetectorFor(0).Validate();
  if (!include_original && transforms.empty()) {
    throw ConfigError("no cells: transforms is empty and include_original is false");
  }
  if (!transforms.empty() && d_values.empty()) throw ConfigError("d_values is empty");
  if (trials + controls == 0) throw ConfigError("trial count must be at least 1");
  if (repetitions == 0) throw ConfigError("repetitions must be at least 1");
  if (threads == 0) throw ConfigError("threads must be at least 1");
  if (source == ProgramSource::kCorpus) {
    if (corpus_path.empty()) throw ConfigError("source corpus needs corpus_path");
    if (!fs::is_directory(corpus_path)) {
      throw ConfigError("corpus_path " + corpus_path + " is not a directory");
    }
  }
  if (!lexicon_path.empty() && !fs::is_regular_file(lexicon_path)) {
    throw ConfigError("lexicon_path " + lexicon_path + " does not exist");
  }
  if (generator.provider == ProviderKind::kNGram) {
    if (generator.ngram_order == 0) throw ConfigError("ngram_order must be at least 1");
    if (generator.ngram_programs == 0) throw ConfigError("ngram_programs must be at least 1");
  }
}

SchemeConfig ExperimentConfig::SchemeFor(wmlab::Scheme scheme) const {
  SchemeConfig s;
  s.scheme = scheme;
  s.gamma = gamma;
  s.delta = delta;
  return s;
}

DetectorConfig ExperimentConfig::DetectorFor(uint64_t grouping_seed) const {
  DetectorConfig d;
  d.z_threshold = z_threshold;
  d.group_size = group_size;
  d.umd_formula = umd_formula;
  d.grouping_seed = grouping_seed;
  d.ignore_repeated = ignore_repeated;
  d.count_layout = count_layout;
  return d;
}

fs::path DefaultLexiconPath() {
  if (const char* env = std::getenv("WMLAB_DATA_DIR"); env && *env) {
    return fs::path(env) / "lexicon.txt";
  }
  const fs::path source = fs::path(WMLAB_SOURCE_DATA_DIR) / "lexicon.txt";
  if (fs::is_regular_file(source)) return source;
  return fs::path(WMLAB_INSTALL_DATA_DIR) / "lexicon.txt";
}

std::string Cell::TransformLabel() const {
  return transform ? std::string(TransformKindName(*transform)) : "Original";
}

std::string_view EquivalenceName(Equivalence e) {
  switch (e) {
    case Equivalence::kSkipped: return "skipped";
    case Equivalence::kEqual: return "equal";
    case Equivalence::kDifferent: return "different";
    case Equivalence::kTimeout: return "timeout";
    case Equivalence::kError: return "error";
  }
  return "skipped";
}

Equivalence ParseEquivalence(std::string_view name) {
  for (Equivalence e : {Equivalence::kSkipped, Equivalence::kEqual, Equivalence::kDifferent,
                        Equivalence::kTimeout, Equivalence::kError}) {
    if (EquivalenceName(e) == name) return e;
  }
  throw ConfigError("unknown equivalence verdict '" + std::string(name) + "'");
}

namespace {

// Severity order used to fold per-program verdicts into one per trial.
int Severity(Equivalence e) {
  switch (e) {
    case Equivalence::kSkipped: return 0;
    case Equivalence::kEqual: return 1;
    case Equivalence::kTimeout: return 2;
    case Equivalence::kDifferent: return 3;
    case Equivalence::kError: return 4;
  }
  return 0;
}

Equivalence Worse(Equivalence a, Equivalence b) {
  return Severity(a) >= Severity(b) ? a : b;
}

std::vector<std::string> ArgLiterals(const std::vector<std::vector<int64_t>>& args) {
  std::vector<std::string> out;
  out.reserve(args.size());
  for (const auto& tuple : args) out.push_back(FormatArgs(tuple));
  return out;
}

}  // namespace

struct Experiment::Program {
  CorpusItem item;
  uint64_t seed = 0;
};

struct Experiment::Outcome {
  TrialRecord record;
  // Original and perturbed program pairs, kept for equivalence checks.
  std::vector<std::pair<CorpusItem, std::string>> pairs;
};

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  config_.Validate();
  lexicon_ = WordLexicon::Load(config_.lexicon_path.empty() ? DefaultLexiconPath()
                                                            : fs::path(config_.lexicon_path));
  const GeneratorSettings& g = config_.generator;
  grammar_ = GrammarSpec::Default(lexicon_, g.identifier_count, g.identifier_seed);
  grammar_.min_statements = g.min_statements;
  grammar_.max_statements = g.max_statements;
  grammar_.p_literal = g.p_literal;
  grammar_.free_operators = g.free_operators;
  grammar_.watermark_signature = g.watermark_signature;
  grammar_.Validate();

  if (config_.check_equivalence) {
    runtime_ = PythonRuntime::Discover(config_.python.empty()
                                           ? std::optional<std::string>()
                                           : std::optional<std::string>(config_.python));
  }
  if (config_.source == ProgramSource::kCorpus) {
    corpus_ = IngestCorpus(config_.corpus_path, runtime_ ? &*runtime_ : nullptr);
    const size_t marked = static_cast<size_t>(std::count_if(
        corpus_.begin(), corpus_.end(),
        [](const CorpusItem& i) { return i.watermarked.value_or(false); }));
    if (config_.trials > 0 && marked == 0) {
      throw ConfigError("corpus " + config_.corpus_path +
                        " has no watermarked programs; set trials to 0");
    }
    if (config_.controls > 0 && marked == corpus_.size()) {
      throw ConfigError("corpus " + config_.corpus_path +
                        " has no unwatermarked programs; set controls to 0");
    }
  }

  UniformProvider uniform(GrammarVocabulary(grammar_));
  if (g.provider == ProviderKind::kNGram) {
    std::vector<TokenStream> training;
    const uint64_t seed = DeriveSeed(config_.base_seed, "ngram");
    for (size_t i = 0; i < g.ngram_programs; ++i) {
      training.push_back(
          GenerateProgram(grammar_, uniform, std::nullopt, DeriveSeed(seed, i)).tokens);
    }
    provider_ = std::make_unique<NGramModel>(
        TrainNGram(training, g.ngram_order, g.ngram_smoothing));
  } else {
    provider_ = std::make_unique<UniformProvider>(std::move(uniform));
  }
}

Experiment::~Experiment() = default;

std::vector<Cell> Experiment::Cells() const {
  std::vector<Cell> cells;
  if (config_.include_original) cells.push_back(Cell{});
  for (TransformKind t : config_.transforms) {
    for (size_t d : config_.d_values) cells.push_back(Cell{t, d});
  }
  return cells;
}

size_t Experiment::TrialCount() const {
  return config_.repetitions * (config_.trials + config_.controls);
}

TrialIdentity Experiment::Identify(uint64_t trial_id) const {
  const size_t per = config_.trials + config_.controls;
  TrialIdentity id;
  id.repetition = static_cast<size_t>(trial_id / per);
  const size_t offset = static_cast<size_t>(trial_id % per);
  id.watermarked = offset < config_.trials;
  id.index = id.watermarked ? offset : offset - config_.trials;
  return id;
}

uint64_t Experiment::TrialSeed(uint64_t trial_id) const {
  return Mix64(config_.base_seed ^ trial_id);
}

std::vector<Experiment::Program> Experiment::Programs(uint64_t trial_id,
                                                      wmlab::Scheme scheme) const {
  const TrialIdentity id = Identify(trial_id);
  const uint64_t trial_seed = TrialSeed(trial_id);
  std::vector<Program> programs;
  if (config_.source == ProgramSource::kCorpus) {
    std::vector<const CorpusItem*> pool;
    for (const CorpusItem& item : corpus_) {
      if (item.watermarked.value_or(false) == id.watermarked) pool.push_back(&item);
    }
    SplitMix64 rng(DeriveSeed(trial_seed, "draw"));
    for (size_t j = 0; j < config_.group_size; ++j) {
      programs.push_back({*pool[rng.UniformIndex(pool.size())], DeriveSeed(trial_seed, j)});
    }
    return programs;
  }
  std::optional<WatermarkSpec> spec;
  if (id.watermarked) spec = WatermarkSpec{config_.key, config_.SchemeFor(scheme)};
  for (size_t j = 0; j < config_.group_size; ++j) {
    const uint64_t seed = DeriveSeed(trial_seed, j);
    GeneratedProgram g = GenerateProgram(grammar_, *provider_, spec, seed);
    CorpusItem item;
    item.id = "t" + std::to_string(trial_id) + "p" + std::to_string(j);
    item.source = std::move(g.source);
    item.entry = std::move(g.entry);
    item.args = ArgLiterals(g.args);
    item.seed = seed;
    item.watermarked = id.watermarked;
    programs.push_back({std::move(item), seed});
  }
  return programs;
}

std::vector<Experiment::Outcome> Experiment::RunTrialOutcomes(uint64_t trial_id,
                                                              bool keep_sources) const {
  const TrialIdentity id = Identify(trial_id);
  const uint64_t trial_seed = TrialSeed(trial_id);
  const std::vector<Cell> cells = Cells();
  const DetectorConfig det = config_.DetectorFor(trial_seed);
  TransformOptions options;
  options.handler = config_.handler;

  std::vector<Outcome> outcomes;
  // Unwatermarked and corpus programs do not depend on the scheme.
  const bool shared = !id.watermarked || config_.source == ProgramSource::kCorpus;
  std::vector<Program> programs;
  std::string program_error;
  for (size_t s = 0; s < config_.schemes.size(); ++s) {
    const wmlab::Scheme scheme = config_.schemes[s];
    if (s == 0 || !shared) {
      program_error.clear();
      try {
        programs = Programs(trial_id, scheme);
      } catch (const std::exception& e) {
        programs.clear();
        program_error = std::string("generation: ") + e.what();
      }
    }
    for (const Cell& cell : cells) {
      Outcome out;
      TrialRecord& r = out.record;
      r.trial_id = trial_id;
      r.repetition = id.repetition;
      r.seed = trial_seed;
      r.scheme = scheme;
      r.transform = cell.TransformLabel();
      r.d = cell.d;
      r.watermarked = id.watermarked;
      r.programs = programs.size();
      r.error = program_error;
      if (r.error.empty()) {
        try {
          std::vector<TokenStream> after;
          double change = 0.0;
          for (const Program& p : programs) {
            std::string perturbed = p.item.source;
            if (cell.transform && cell.d > 0) {
              const uint64_t seed = DeriveSeed(p.seed, TransformKindName(*cell.transform));
              perturbed = Perturb(p.item.source, cell.d, *cell.transform, lexicon_, seed, options)
                              .source;
            }
            const TokenStream before = Tokenize(p.item.source);
            after.push_back(Tokenize(perturbed));
            r.tokens_before += before.size();
            r.tokens_after += after.back().size();
            change += TokenChangeProportion(before, after.back());
            if (keep_sources) out.pairs.emplace_back(p.item, std::move(perturbed));
          }
          r.token_change = programs.empty() ? 0.0 : change / static_cast<double>(programs.size());
          const SchemeConfig sc = config_.SchemeFor(scheme);
          const GreenTally tally = TallyGreen(after, config_.key, sc, det);
          if (tally.tokens == 0) throw UndefinedStatisticError("no scored tokens in trial");
          r.scored = tally.tokens;
          r.green_count = tally.green;
          r.z = ZScore(tally.green, tally.tokens, sc, det);
          r.p = PValue(r.z);
          r.decision = Decide(r.z, r.p, det);
        } catch (const std::exception& e) {
          r.error = e.what();
          out.pairs.clear();
        }
      }
      if (!r.error.empty()) {
        r.scored = r.green_count = 0;
        r.z = 0.0;
        r.p = 1.0;
        r.decision = false;
      }
      outcomes.push_back(std::move(out));
    }
  }
  return outcomes;
}

std::vector<TrialRecord> Experiment::RunTrial(uint64_t trial_id) const {
  std::vector<TrialRecord> records;
  for (Outcome& o : RunTrialOutcomes(trial_id, false)) records.push_back(std::move(o.record));
  return records;
}

TrialRecord Experiment::RunTrial(const Cell& cell, wmlab::Scheme scheme,
                                 uint64_t trial_id) const {
  for (TrialRecord& r : RunTrial(trial_id)) {
    if (r.scheme == scheme && r.transform == cell.TransformLabel() && r.d == cell.d) return r;
  }
  throw ConfigError("cell " + cell.TransformLabel() + " d=" + std::to_string(cell.d) +
                    " is not part of this experiment");
}

std::vector<TrialRecord> Experiment::RunAll() const {
  const size_t count = TrialCount();
  std::vector<std::vector<Outcome>> slots(count);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < count; i = next++) {
      slots[i] = RunTrialOutcomes(i, runtime_.has_value());
    }
  };
  const size_t n = std::min(config_.threads, std::max<size_t>(count, 1));
  std::vector<std::thread> pool;
  for (size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<Outcome> outcomes;
  for (auto& slot : slots) {
    for (Outcome& o : slot) outcomes.push_back(std::move(o));
  }
  if (runtime_) {
    // One interpreter batch for every program pair; identical pairs run once.
    std::map<std::pair<std::string, std::string>, size_t> index;
    std::vector<ExecJob> jobs;
    std::vector<const CorpusItem*> originals;
    auto job_for = [&](const CorpusItem& item, const std::string& source) {
      auto [it, inserted] = index.try_emplace({item.id + '\n' + item.source, source}, jobs.size());
      if (inserted) {
        jobs.push_back({source, item.entry, item.args});
        originals.push_back(&item);
      }
      return it->second;
    };
    std::vector<std::vector<std::pair<size_t, size_t>>> refs(outcomes.size());
    for (size_t o = 0; o < outcomes.size(); ++o) {
      for (const auto& [item, perturbed] : outcomes[o].pairs) {
        refs[o].push_back({job_for(item, item.source), job_for(item, perturbed)});
      }
    }
    const std::vector<ExecResult> results = runtime_->Run(jobs);
    for (size_t o = 0; o < outcomes.size(); ++o) {
      if (refs[o].empty()) continue;
      Equivalence verdict = Equivalence::kEqual;
      for (const auto& [a, b] : refs[o]) {
        const ExecResult& x = results[a];
        const ExecResult& y = results[b];
        Equivalence v = Equivalence::kEqual;
        if (x.status == ExecStatus::kTimeout || y.status == ExecStatus::kTimeout) {
          v = Equivalence::kTimeout;
        } else if (x.status != ExecStatus::kOk || y.status != ExecStatus::kOk) {
          // Both raising counts as agreement only when the original raised too.
          v = x.status == y.status && x.message == y.message ? Equivalence::kEqual
                                                             : Equivalence::kError;
        } else if (x.values != y.values) {
          v = Equivalence::kDifferent;
        }
        verdict = Worse(verdict, v);
      }
      outcomes[o].record.equivalence = verdict;
    }
  }
  std::vector<TrialRecord> records;
  records.reserve(outcomes.size());
  for (Outcome& o : outcomes) records.push_back(std::move(o.record));
  return records;
}

EquivalenceCheck CheckEquivalence(const CorpusItem& original, std::string_view perturbed,
                                  const PythonRuntime& runtime) {
  EquivalenceCheck check;
  try {
    Tokenize(perturbed);
  } catch (const std::exception& e) {
    check.verdict = Equivalence::kError;
    check.detail = std::string("perturbed program does not lex: ") + e.what();
    return check;
  }
  const ExecJob jobs[] = {{original.source, original.entry, original.args},
                          {std::string(perturbed), original.entry, original.args}};
  const std::vector<ExecResult> results = runtime.Run(jobs);
  const ExecResult& x = results[0];
  const ExecResult& y = results[1];
  if (x.status == ExecStatus::kTimeout || y.status == ExecStatus::kTimeout) {
    check.verdict = Equivalence::kTimeout;
    check.detail = "execution timed out";
  } else if (x.status != ExecStatus::kOk || y.status != ExecStatus::kOk) {
    const bool same = x.status == y.status && x.message == y.message;
    check.verdict = same ? Equivalence::kEqual : Equivalence::kError;
    check.detail = x.status != ExecStatus::kOk ? x.message : y.message;
  } else if (x.values != y.values) {
    check.verdict = Equivalence::kDifferent;
    for (size_t i = 0; i < x.values.size() && i < y.values.size(); ++i) {
      if (x.values[i] != y.values[i]) {
        check.detail = "args " + original.args[i] + ": " + x.values[i] + " != " + y.values[i];
        break;
      }
    }
  }
  return check;
}

namespace {

struct Mean {
  std::optional<double> mean, stddev;
};

Mean MeanStd(const std::vector<double>& xs) {
  Mean m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - *m.mean) * (x - *m.mean);
  if (xs.size() > 1) m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

}  // namespace

std::vector<RateSummary> ComputeRates(std::span<const TrialRecord> records) {
  using Key = std::tuple<wmlab::Scheme, std::string, size_t>;
  struct Counts {
    size_t watermarked = 0, detected = 0, controls = 0, alarms = 0;
  };
  std::vector<Key> order;
  std::map<Key, RateSummary> rows;
  std::map<Key, std::map<size_t, Counts>> reps;
  std::map<Key, std::pair<double, size_t>> change;
  for (const TrialRecord& r : records) {
    const Key key{r.scheme, r.transform, r.d};
    auto [it, inserted] = rows.try_emplace(key);
    RateSummary& s = it->second;
    if (inserted) {
      order.push_back(key);
      s.scheme = r.scheme;
      s.transform = r.transform;
      s.d = r.d;
    }
    if (!r.error.empty()) {
      ++s.failed;
      continue;
    }
    Counts& c = reps[key][r.repetition];
    if (r.watermarked) {
      ++s.watermarked;
      ++c.watermarked;
      if (r.decision) ++s.detected, ++c.detected;
    } else {
      ++s.controls;
      ++c.controls;
      if (r.decision) ++s.false_alarms, ++c.alarms;
    }
    auto& [sum, n] = change[key];
    sum += r.token_change;
    ++n;
    if (r.equivalence != Equivalence::kSkipped) {
      ++s.equivalence_checked;
      if (r.equivalence == Equivalence::kEqual) ++s.equivalence_equal;
      if (r.equivalence == Equivalence::kTimeout) ++s.equivalence_timeout;
    }
  }
  std::vector<RateSummary> out;
  for (const Key& key : order) {
    RateSummary s = rows[key];
    if (s.watermarked > 0) s.tpr = static_cast<double>(s.detected) / s.watermarked;
    if (s.controls > 0) s.fpr = static_cast<double>(s.false_alarms) / s.controls;
    if (const auto& [sum, n] = change[key]; n > 0) s.mean_token_change = sum / n;
    std::vector<double> tprs, fprs;
    for (const auto& [rep, c] : reps[key]) {
      if (c.watermarked > 0) tprs.push_back(static_cast<double>(c.detected) / c.watermarked);
      if (c.controls > 0) fprs.push_back(static_cast<double>(c.alarms) / c.controls);
    }
    const Mean t = MeanStd(tprs), f = MeanStd(fprs);
    s.tpr_mean = t.mean;
    s.tpr_stddev = t.stddev;
    s.fpr_mean = f.mean;
    s.fpr_stddev = f.stddev;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<TrialRecord> SweepTransformCount(ExperimentConfig config, size_t d_max) {
  config.include_original = false;
  config.d_values.clear();
  for (size_t d = 0; d <= d_max; ++d) config.d_values.push_back(d);
  return Experiment(std::move(config)).RunAll();
}

}  // namespace wmlab
