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

#ifndef WMLAB_WATERMARK_H_
#define WMLAB_WATERMARK_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmlab/lexing.h"

namespace wmlab {

enum class Scheme {
  kUmd,      // green set re-derived per position from the previous token
  kUnigram,  // one fixed green set derived from the key alone
};

std::string_view SchemeName(Scheme scheme);
// Accepts "UMD" / "Unigram" (case-insensitive). Throws ConfigError.
Scheme ParseScheme(std::string_view name);

// The secret watermark key. Serialized as 16 lowercase hex digits.
struct WatermarkKey {
  uint64_t value = 0;

  std::string ToHex() const;
  // Accepts 1-16 hex digits with an optional 0x prefix. Throws ConfigError.
  static WatermarkKey FromHex(std::string_view hex);

  bool operator==(const WatermarkKey&) const = default;
};

struct SchemeConfig {
  Scheme scheme = Scheme::kUmd;
  double gamma = 0.25;  // green fraction of the vocabulary
  double delta = 2.0;   // logit bias added to green tokens

  // Throws ConfigError unless 0 < gamma < 1 and delta >= 0.
  void Validate() const;
};

// Context used for the first token of every completion.
inline constexpr std::string_view kBoundaryContext = "<s>";
// Context hashed for every position under the Unigram scheme.
inline constexpr std::string_view kUnigramContext = "<unigram>";

// Keyed green-list test:
//   green <=> upper32(Mix64(Mix64(key ^ Fnv1a64(ctx)) ^ Fnv1a64(token))) / 2^32
//             < gamma
// with ctx = `context` under UMD and kUnigramContext under Unigram.
bool IsGreen(WatermarkKey key, const SchemeConfig& config,
             std::string_view context, std::string_view token);

// A categorical distribution over token strings.
class Distribution {
 public:
  Distribution() = default;

  // Throws std::invalid_argument unless the support is distinct, sizes
  // match, probabilities are non-negative and sum to 1 within 1e-9.
  Distribution(std::vector<std::string> support, std::vector<double> probs);

  static Distribution Uniform(std::vector<std::string> support);

  const std::vector<std::string>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  size_t size() const { return support_.size(); }
  bool empty() const { return support_.empty(); }

  // Total probability of tokens satisfying `pred`.
  template <typename Pred>
  double MassWhere(Pred pred) const {
    double mass = 0.0;
    for (size_t i = 0; i < support_.size(); ++i) {
      if (pred(support_[i])) mass += probs_[i];
    }
    return mass;
  }

  // Index of the token selected by inverse-CDF sampling at u in [0, 1).
  size_t SampleIndex(double u) const;

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<std::string> support_;
  std::vector<double> probs_;
};

// Gamma(key, p): multiplies green-token probabilities by e^delta and
// renormalizes. Support is unchanged; delta = 0 returns `dist` as is.
Distribution ApplyGreenBias(const Distribution& dist, WatermarkKey key,
                            const SchemeConfig& config,
                            std::string_view context);

// Source of next-token distributions (the language model stand-in).
class DistributionProvider {
 public:
  virtual ~DistributionProvider() = default;
  // Must be a deterministic function of `context` (oldest token first).
  virtual Distribution Next(std::span<const std::string> context) const = 0;
};

// Samples up to `max_tokens` tokens from Gamma(key, provider(context)) with a
// seeded multinomial draw per step. Throws GenerationError if the provider
// returns an empty distribution.
TokenStream WatermarkGenerate(const DistributionProvider& provider,
                              const TokenStream& prompt, WatermarkKey key,
                              const SchemeConfig& config, size_t max_tokens,
                              uint64_t seed);

}  // namespace wmlab

#endif  // WMLAB_WATERMARK_H_
