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

#include "wmlab/generator.h"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "wmlab/error.h"
#include "wmlab/hash.h"

namespace wmlab {

UniformProvider::UniformProvider(std::vector<std::string> pool)
    : dist_(Distribution::Uniform(std::move(pool))) {}

Distribution UniformProvider::Next(std::span<const std::string>) const {
  return dist_;
}

NGramModel TrainNGram(std::span<const TokenStream> corpus, size_t order,
                      double smoothing) {
  if (order == 0) throw ConfigError("n-gram order must be at least 1");
  if (!(smoothing >= 0.0)) throw ConfigError("smoothing must be non-negative");
  NGramModel model;
  model.order_ = order;
  model.smoothing_ = smoothing;
  std::set<std::string> vocab;
  size_t total = 0;
  for (const TokenStream& stream : corpus) {
    std::vector<std::string> padded(order, std::string(kBoundaryContext));
    for (const CodeToken& tok : stream.tokens()) padded.push_back(tok.text);
    for (size_t i = order; i < padded.size(); ++i) {
      vocab.insert(padded[i]);
      ++total;
      for (size_t n = 0; n <= order; ++n) {
        NGramModel::Context ctx(padded.begin() + static_cast<long>(i - n),
                                padded.begin() + static_cast<long>(i));
        ++model.counts_[std::move(ctx)][padded[i]];
      }
    }
  }
  if (total == 0) throw TrainingError("cannot train an n-gram model on an empty corpus");
  model.vocabulary_.assign(vocab.begin(), vocab.end());
  return model;
}

Distribution NGramModel::Next(std::span<const std::string> context) const {
  Context padded(order_, std::string(kBoundaryContext));
  const size_t take = std::min(order_, context.size());
  std::copy(context.end() - static_cast<long>(take), context.end(),
            padded.end() - static_cast<long>(take));
  for (size_t n = order_ + 1; n-- > 0;) {
    Context ctx(padded.end() - static_cast<long>(n), padded.end());
    auto it = counts_.find(ctx);
    if (it == counts_.end()) continue;
    const Table& table = it->second;
    uint64_t seen = 0;
    for (const auto& [_, c] : table) seen += c;
    std::vector<std::string> support;
    std::vector<double> probs;
    if (smoothing_ > 0.0) {
      const double denom = static_cast<double>(seen) +
                           smoothing_ * static_cast<double>(vocabulary_.size());
      for (const std::string& tok : vocabulary_) {
        auto c = table.find(tok);
        const double count = c == table.end() ? 0.0 : static_cast<double>(c->second);
        support.push_back(tok);
        probs.push_back((count + smoothing_) / denom);
      }
    } else {
      for (const auto& [tok, c] : table) {
        support.push_back(tok);
        probs.push_back(static_cast<double>(c) / static_cast<double>(seen));
      }
    }
    return Distribution(std::move(support), std::move(probs));
  }
  throw GenerationError("n-gram model has no unigram table");
}

GrammarSpec GrammarSpec::Default(const WordLexicon& lexicon,
                                 size_t identifier_count, uint64_t seed) {
  GrammarSpec spec;
  spec.identifiers = lexicon.Slice(identifier_count, seed);
  return spec;
}

void GrammarSpec::Validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("grammar: " + msg); };
  const size_t needed = 1 + max_params + max_statements;
  if (identifiers.size() < needed + 1) {
    fail("identifier pool needs more than " + std::to_string(needed) + " words");
  }
  for (const std::string& id : identifiers) {
    if (!IsValidIdentifier(id) || IsPythonBuiltin(id)) {
      fail("'" + id + "' is not a usable identifier");
    }
  }
  if (min_params < 1 || min_params > max_params) fail("bad parameter range");
  if (min_statements > max_statements) fail("bad statement range");
  if (max_terms < 1 || max_if_body < 1) fail("expressions and if bodies need at least one element");
  for (double p : {p_rebind, p_if, p_else, p_literal}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
  if (p_rebind + p_if > 1.0) fail("p_rebind + p_if exceeds 1");
  if (arg_min > arg_max) fail("bad argument range");
}

namespace {

std::vector<std::string> Literals() {
  std::vector<std::string> out;
  for (int i = 0; i < 100; ++i) out.push_back(std::to_string(i));
  return out;
}

std::vector<std::string> Texts(std::span<const std::string_view> views) {
  return {views.begin(), views.end()};
}

class Builder {
 public:
  Builder(const GrammarSpec& grammar, const DistributionProvider& provider,
          const std::optional<WatermarkSpec>& watermark, uint64_t seed)
      : grammar_(grammar),
        provider_(provider),
        watermark_(watermark),
        structure_(DeriveSeed(seed, "structure")),
        sample_(DeriveSeed(seed, "sample")),
        literals_(Literals()) {}

  GeneratedProgram Run(uint64_t seed) {
    GeneratedProgram out;
    bias_ = grammar_.watermark_signature;
    Forced("def", TokenClass::kKeyword);
    out.entry = Fresh("function name");
    Forced("(", TokenClass::kPunctuation);
    const size_t params = Range(grammar_.min_params, grammar_.max_params);
    for (size_t i = 0; i < params; ++i) {
      if (i > 0) Forced(",", TokenClass::kPunctuation);
      bound_.push_back(Fresh("parameter"));
    }
    Forced(")", TokenClass::kPunctuation);
    OpenBlock();
    bias_ = true;
    const size_t statements = Range(grammar_.min_statements, grammar_.max_statements);
    for (size_t i = 0; i < statements; ++i) {
      const double r = structure_.NextDouble();
      if (r < grammar_.p_if) {
        If();
      } else if (r < grammar_.p_if + grammar_.p_rebind) {
        Assign(false);
      } else {
        Assign(true);
      }
    }
    Forced("return", TokenClass::kKeyword);
    Expression("return value");
    Forced(std::string(kNewlineText), TokenClass::kNewline);
    Forced(std::string(kDedentText), TokenClass::kDedent);

    out.tokens = TokenStream(std::move(tokens_), {});
    out.source = RenderTokens(out.tokens.tokens());
    TokenStream relexed = Tokenize(out.source);
    if (relexed.Texts() != texts_) {
      throw GenerationError("generated program does not re-lex to its tokens");
    }
    out.tokens = std::move(relexed);
    out.forced = std::move(forced_);

    SplitMix64 args_rng(DeriveSeed(seed, "args"));
    for (size_t t = 0; t < grammar_.arg_tuples; ++t) {
      std::vector<int64_t> tuple;
      for (size_t i = 0; i < params; ++i) {
        tuple.push_back(args_rng.UniformInt(grammar_.arg_min, grammar_.arg_max));
      }
      out.args.push_back(std::move(tuple));
    }
    return out;
  }

 private:
  size_t Range(size_t lo, size_t hi) {
    return static_cast<size_t>(structure_.UniformInt(static_cast<int64_t>(lo),
                                                     static_cast<int64_t>(hi)));
  }

  void Push(std::string text, TokenClass cls, bool forced) {
    texts_.push_back(text);
    tokens_.push_back(CodeToken{std::move(text), cls, Span{}});
    forced_.push_back(forced);
  }

  void Forced(std::string text, TokenClass cls) { Push(std::move(text), cls, true); }

  std::string Choose(const std::vector<std::string>& legal, TokenClass cls,
                     std::string_view state) {
    if (legal.empty()) {
      throw GenerationError("no legal token at " + std::string(state) +
                            " after " + std::to_string(texts_.size()) + " tokens");
    }
    if (legal.size() == 1) {
      Forced(legal[0], cls);
      return legal[0];
    }
    const Distribution full = provider_.Next(texts_);
    std::unordered_map<std::string_view, double> mass;
    mass.reserve(full.size());
    for (size_t i = 0; i < full.size(); ++i) mass[full.support()[i]] = full.probs()[i];
    std::vector<double> probs(legal.size(), 0.0);
    double total = 0.0;
    for (size_t i = 0; i < legal.size(); ++i) {
      auto it = mass.find(legal[i]);
      if (it != mass.end()) probs[i] = it->second;
      total += probs[i];
    }
    if (total <= 0.0) {
      std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(legal.size()));
    } else {
      for (double& p : probs) p /= total;
    }
    Distribution dist(legal, std::move(probs));
    if (watermark_ && bias_) {
      std::string_view context = kBoundaryContext;
      for (size_t i = tokens_.size(); i-- > 0;) {
        if (tokens_[i].IsLayout()) continue;
        context = tokens_[i].text;
        break;
      }
      dist = ApplyGreenBias(dist, watermark_->key, watermark_->config, context);
    }
    const size_t index = dist.SampleIndex(sample_.NextDouble());
    Push(legal[index], cls, false);
    return legal[index];
  }

  std::string Fresh(std::string_view state) {
    std::vector<std::string> legal;
    for (const std::string& id : grammar_.identifiers) {
      if (!used_.contains(id)) legal.push_back(id);
    }
    std::string name = Choose(legal, TokenClass::kIdentifier, state);
    used_.insert(name);
    return name;
  }

  void OpenBlock() {
    Forced(":", TokenClass::kPunctuation);
    Forced(std::string(kNewlineText), TokenClass::kNewline);
    Forced(std::string(kIndentText), TokenClass::kIndent);
  }

  void Reference() {
    Forced(bound_[structure_.UniformIndex(bound_.size())], TokenClass::kIdentifier);
  }

  void Operator(const std::vector<std::string>& legal, std::string_view state) {
    if (grammar_.free_operators) {
      Choose(legal, TokenClass::kOperator, state);
    } else {
      Forced(legal[structure_.UniformIndex(legal.size())], TokenClass::kOperator);
    }
  }

  void Term(bool literal, std::string_view state) {
    if (literal) {
      Choose(literals_, TokenClass::kInteger, state);
    } else {
      Reference();
    }
  }

  void Expression(std::string_view state) {
    const size_t terms = Range(1, grammar_.max_terms);
    for (size_t i = 0; i < terms; ++i) {
      const bool literal = structure_.NextDouble() < grammar_.p_literal;
      if (i > 0) {
        // `*` by a literal only, so values grow at most geometrically.
        static const std::vector<std::string> all = Texts(kArithmeticOps);
        static const std::vector<std::string> additive = {"+", "-"};
        Operator(literal ? all : additive, "operator");
      }
      Term(literal, state);
    }
  }

  void Assign(bool fresh) {
    std::string target;
    if (fresh) {
      target = Fresh("assignment target");
    } else {
      Reference();
    }
    Forced("=", TokenClass::kOperator);
    Expression("assignment value");
    Forced(std::string(kNewlineText), TokenClass::kNewline);
    if (fresh) bound_.push_back(std::move(target));
  }

  void Body() {
    const size_t n = Range(1, grammar_.max_if_body);
    for (size_t i = 0; i < n; ++i) Assign(false);
    Forced(std::string(kDedentText), TokenClass::kDedent);
  }

  void If() {
    Forced("if", TokenClass::kKeyword);
    Reference();
    static const std::vector<std::string> comparisons = Texts(kComparisonOps);
    Operator(comparisons, "comparison");
    Term(structure_.NextDouble() < grammar_.p_literal, "comparison operand");
    OpenBlock();
    Body();
    if (structure_.NextDouble() < grammar_.p_else) {
      Forced("else", TokenClass::kKeyword);
      OpenBlock();
      Body();
    }
  }

  const GrammarSpec& grammar_;
  const DistributionProvider& provider_;
  const std::optional<WatermarkSpec>& watermark_;
  SplitMix64 structure_;
  SplitMix64 sample_;
  std::vector<std::string> literals_;
  std::vector<std::string> texts_;
  std::vector<CodeToken> tokens_;
  std::vector<bool> forced_;
  std::vector<std::string> bound_;
  std::set<std::string> used_;
  bool bias_ = true;
};

}  // namespace

std::vector<std::string> GrammarVocabulary(const GrammarSpec& grammar) {
  std::set<std::string> vocab(grammar.identifiers.begin(), grammar.identifiers.end());
  for (std::string& lit : Literals()) vocab.insert(std::move(lit));
  for (std::string_view op : kArithmeticOps) vocab.emplace(op);
  for (std::string_view op : kComparisonOps) vocab.emplace(op);
  for (std::string_view t : {"def", "if", "else", "return", "(", ")", ",", ":", "="}) {
    vocab.emplace(t);
  }
  for (std::string_view t : {kNewlineText, kIndentText, kDedentText}) vocab.emplace(t);
  return {vocab.begin(), vocab.end()};
}

GeneratedProgram GenerateProgram(const GrammarSpec& grammar,
                                 const DistributionProvider& provider,
                                 const std::optional<WatermarkSpec>& watermark,
                                 uint64_t seed) {
  return Builder(grammar, provider, watermark, seed).Run(seed);
}

std::string FormatArgs(std::span<const int64_t> args) {
  std::string out = "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(args[i]);
  }
  if (args.size() == 1) out += ",";
  return out + ")";
}

}  // namespace wmlab
