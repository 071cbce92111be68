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

#include "wmlab/watermark.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

#include "wmlab/error.h"
#include "wmlab/hash.h"

namespace wmlab {

std::string_view SchemeName(Scheme scheme) {
  return scheme == Scheme::kUmd ? "UMD" : "Unigram";
}

Scheme ParseScheme(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(c)));
  if (lower == "umd") return Scheme::kUmd;
  if (lower == "unigram") return Scheme::kUnigram;
  throw ConfigError("unknown watermark scheme '" + std::string(name) +
                    "' (expected UMD or Unigram)");
}

std::string WatermarkKey::ToHex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

WatermarkKey WatermarkKey::FromHex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.empty() || hex.size() > 16) {
    throw ConfigError("watermark key must be 1-16 hex digits");
  }
  uint64_t v = 0;
  for (char c : hex) {
    int digit;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      digit = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      digit = c - 'A' + 10;
    } else {
      throw ConfigError("watermark key contains non-hex character '" +
                        std::string(1, c) + "'");
    }
    v = (v << 4) | static_cast<uint64_t>(digit);
  }
  return WatermarkKey{v};
}

void SchemeConfig::Validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ConfigError("gamma must lie strictly between 0 and 1");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ConfigError("delta must be a finite non-negative number");
  }
}

bool IsGreen(WatermarkKey key, const SchemeConfig& config,
             std::string_view context, std::string_view token) {
  const std::string_view ctx =
      config.scheme == Scheme::kUnigram ? kUnigramContext : context;
  const uint64_t seeded = Mix64(key.value ^ Fnv1a64(ctx));
  const uint64_t h = Mix64(seeded ^ Fnv1a64(token));
  const double u = static_cast<double>(h >> 32) / 4294967296.0;
  return u < config.gamma;
}

Distribution::Distribution(std::vector<std::string> support,
                           std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.size() != probs_.size()) {
    throw std::invalid_argument("distribution support/probability size mismatch");
  }
  std::unordered_set<std::string_view> seen;
  double total = 0.0;
  for (size_t i = 0; i < support_.size(); ++i) {
    if (!seen.insert(support_[i]).second) {
      throw std::invalid_argument("duplicate token in distribution support: " +
                                  support_[i]);
    }
    if (!(probs_[i] >= 0.0)) {
      throw std::invalid_argument("negative probability in distribution");
    }
    total += probs_[i];
  }
  if (!support_.empty() && std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("distribution probabilities do not sum to 1");
  }
}

Distribution Distribution::Uniform(std::vector<std::string> support) {
  const size_t n = support.size();
  std::vector<double> probs(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  // Absorb rounding so the invariant check holds for any n.
  if (n > 0) {
    double rest = 0.0;
    for (size_t i = 1; i < n; ++i) rest += probs[i];
    probs[0] = 1.0 - rest;
  }
  return Distribution(std::move(support), std::move(probs));
}

size_t Distribution::SampleIndex(double u) const {
  double cumulative = 0.0;
  size_t last_positive = 0;
  for (size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] <= 0.0) continue;
    cumulative += probs_[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

Distribution ApplyGreenBias(const Distribution& dist, WatermarkKey key,
                            const SchemeConfig& config,
                            std::string_view context) {
  if (config.delta == 0.0 || dist.empty()) return dist;
  const double boost = std::exp(config.delta);
  std::vector<double> probs = dist.probs();
  double total = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0 && IsGreen(key, config, context, dist.support()[i])) {
      probs[i] *= boost;
    }
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return Distribution(dist.support(), std::move(probs));
}

TokenStream WatermarkGenerate(const DistributionProvider& provider,
                              const TokenStream& prompt, WatermarkKey key,
                              const SchemeConfig& config, size_t max_tokens,
                              uint64_t seed) {
  config.Validate();
  SplitMix64 rng(seed);
  std::vector<std::string> context = prompt.Texts();
  std::vector<std::string> generated;
  generated.reserve(max_tokens);
  for (size_t t = 0; t < max_tokens; ++t) {
    const Distribution p = provider.Next(context);
    if (p.empty()) {
      throw GenerationError(
          "provider returned an empty distribution after context '" +
          (context.empty() ? std::string(kBoundaryContext) : context.back()) +
          "' at step " + std::to_string(t));
    }
    const std::string_view umd_context =
        generated.empty() ? kBoundaryContext : std::string_view(generated.back());
    const Distribution biased = ApplyGreenBias(p, key, config, umd_context);
    const std::string& token = biased.support()[biased.SampleIndex(rng.NextDouble())];
    generated.push_back(token);
    context.push_back(token);
  }
  return TokenStream::FromTexts(generated);
}

}  // namespace wmlab
