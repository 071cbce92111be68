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

// Microbenchmarks for the hot paths of a trial.

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "wmlab/detector.h"
#include "wmlab/generator.h"
#include "wmlab/harness.h"
#include "wmlab/lexicon.h"
#include "wmlab/lexing.h"
#include "wmlab/transforms.h"

namespace {

using namespace wmlab;

const WordLexicon& Lexicon() {
  static const WordLexicon lexicon = WordLexicon::Load(DefaultLexiconPath());
  return lexicon;
}

const GrammarSpec& Grammar() {
  static const GrammarSpec grammar = GrammarSpec::Default(Lexicon());
  return grammar;
}

const UniformProvider& Provider() {
  static const UniformProvider provider(GrammarVocabulary(Grammar()));
  return provider;
}

WatermarkSpec Spec() {
  SchemeConfig sc;
  sc.scheme = Scheme::kUmd;
  return {WatermarkKey{0xdeadbeef}, sc};
}

const std::string& Sample() {
  static const std::string source = GenerateProgram(Grammar(), Provider(), Spec(), 7).source;
  return source;
}

void BM_Tokenize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Tokenize(Sample()));
  state.SetBytesProcessed(state.iterations() * Sample().size());
}
BENCHMARK(BM_Tokenize);

void BM_TokenEditDistance(benchmark::State& state) {
  const auto before = Tokenize(Sample()).Texts();
  const auto after =
      Tokenize(Perturb(Sample(), 5, TransformKind::kMixed, Lexicon(), 3).source).Texts();
  for (auto _ : state) benchmark::DoNotOptimize(TokenEditDistance(before, after));
}
BENCHMARK(BM_TokenEditDistance);

void BM_TallyGreen(benchmark::State& state) {
  std::vector<TokenStream> group;
  for (uint64_t seed = 0; seed < 3; ++seed) {
    group.push_back(GenerateProgram(Grammar(), Provider(), Spec(), seed).tokens);
  }
  const WatermarkSpec spec = Spec();
  for (auto _ : state) {
    benchmark::DoNotOptimize(TallyGreen(group, spec.key, spec.config, DetectorConfig{}));
  }
}
BENCHMARK(BM_TallyGreen);

void BM_Perturb(benchmark::State& state) {
  const size_t d = static_cast<size_t>(state.range(0));
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Perturb(Sample(), d, TransformKind::kMixed, Lexicon(), ++seed));
  }
}
BENCHMARK(BM_Perturb)->Arg(1)->Arg(5);

void BM_GenerateProgram(benchmark::State& state) {
  const WatermarkSpec spec = Spec();
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(GenerateProgram(Grammar(), Provider(), spec, ++seed));
  }
}
BENCHMARK(BM_GenerateProgram);

}  // namespace

BENCHMARK_MAIN();
