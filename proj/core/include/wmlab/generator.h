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

#ifndef WMLAB_GENERATOR_H_
#define WMLAB_GENERATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmlab/lexicon.h"
#include "wmlab/lexing.h"
#include "wmlab/watermark.h"

namespace wmlab {

// Uniform over a fixed pool, whatever the context.
class UniformProvider : public DistributionProvider {
 public:
  explicit UniformProvider(std::vector<std::string> pool);
  Distribution Next(std::span<const std::string> context) const override;

 private:
  Distribution dist_;
};

// Count-based n-gram model with add-k smoothing. Contexts shorter than
// `order` are padded with the boundary token; unseen contexts back off one
// token at a time down to the unigram table.
class NGramModel : public DistributionProvider {
 public:
  using Context = std::vector<std::string>;
  using Table = std::map<std::string, uint64_t>;

  size_t order() const { return order_; }
  double smoothing() const { return smoothing_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::map<Context, Table>& counts() const { return counts_; }

  Distribution Next(std::span<const std::string> context) const override;

 private:
  friend NGramModel TrainNGram(std::span<const TokenStream>, size_t, double);

  size_t order_ = 1;
  double smoothing_ = 0.0;
  std::vector<std::string> vocabulary_;  // sorted
  std::map<Context, Table> counts_;      // every context length 0..order
};

// Throws TrainingError for an empty corpus and ConfigError for order 0 or a
// negative smoothing constant.
NGramModel TrainNGram(std::span<const TokenStream> corpus, size_t order,
                      double smoothing);

// Shape of the generated Python subset:
//
//   def NAME(PARAMS):
//       NAME = EXPR           fresh binding
//       NAME = EXPR           rebinding of a bound name
//       if TERM CMP TERM:     bodies only rebind, so every name stays bound
//           ...
//       else:
//           ...
//       return EXPR
//
// EXPR is TERM (OP TERM)*, a TERM is a bound name or an integer literal in
// [0, 99]. `*` only ever takes a literal right operand, which keeps values
// small enough for any Python build.
struct GrammarSpec {
  std::vector<std::string> identifiers;  // pool for fresh names
  size_t min_params = 1;
  size_t max_params = 3;
  size_t min_statements = 5;
  size_t max_statements = 8;
  double p_rebind = 0.1;
  double p_if = 0.3;
  double p_else = 0.5;
  size_t max_if_body = 2;
  double p_literal = 0.6;  // chance that a term is a literal
  size_t max_terms = 3;
  // When false, operators and comparisons are structural choices (forced
  // tokens); only names and literals are sampled.
  bool free_operators = false;
  // When false the signature acts as the prompt: its names are sampled from
  // the provider without watermark bias.
  bool watermark_signature = false;
  size_t arg_tuples = 3;
  int64_t arg_min = -20;
  int64_t arg_max = 20;

  // Identifier pool: `identifier_count` lexicon words chosen by `seed`.
  static GrammarSpec Default(const WordLexicon& lexicon,
                             size_t identifier_count = 200, uint64_t seed = 0);

  // Throws ConfigError.
  void Validate() const;
};

inline constexpr std::string_view kArithmeticOps[] = {"+", "-", "*"};
inline constexpr std::string_view kComparisonOps[] = {"<", ">", "<=",
                                                      ">=", "==", "!="};

// Every token text the grammar can emit, sorted.
std::vector<std::string> GrammarVocabulary(const GrammarSpec& grammar);

struct WatermarkSpec {
  WatermarkKey key;
  SchemeConfig config;
};

struct GeneratedProgram {
  std::string source;
  TokenStream tokens;
  // forced[i]: token i was the only legal choice, so it was neither sampled
  // nor biased.
  std::vector<bool> forced;
  std::string entry;  // function name
  std::vector<std::vector<int64_t>> args;
};

// Derives one function. Statement shapes and the bound name used at each
// reference come from a structural stream; the provider (optionally biased by
// the watermark) picks every token with more than one legal value. The hash
// context is the previous non-layout token, matching the detector default. The
// structural stream does not depend on the watermark, so paired runs with and
// without it share the program skeleton. Throws GenerationError on a dead end.
GeneratedProgram GenerateProgram(const GrammarSpec& grammar,
                                 const DistributionProvider& provider,
                                 const std::optional<WatermarkSpec>& watermark,
                                 uint64_t seed);

// Python literal for an argument tuple, e.g. "(3, -1)".
std::string FormatArgs(std::span<const int64_t> args);

}  // namespace wmlab

#endif  // WMLAB_GENERATOR_H_
