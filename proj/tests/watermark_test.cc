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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "wmlab/detector.h"
#include "wmlab/error.h"
#include "wmlab/hash.h"

namespace wmlab {
namespace {

SchemeConfig Config(Scheme scheme, double gamma = 0.25, double delta = 2.0) {
  SchemeConfig c;
  c.scheme = scheme;
  c.gamma = gamma;
  c.delta = delta;
  return c;
}

std::vector<std::string> RandomTokens(size_t n, uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    out.push_back("t" + std::to_string(i) + "_" + std::to_string(rng.Next() % 100000));
  }
  return out;
}

// Hash-chain draws computed by a separate Python implementation:
// key=1 ctx="<s>" tok="def" -> 0.924390638480, key=0xdeadbeef ctx="x" tok="="
// -> 0.581332009984, key=0xdeadbeef Unigram tok="return" -> 0.014043759787.
TEST(GreenMembership, PinnedVectors) {
  EXPECT_TRUE(IsGreen(WatermarkKey{1}, Config(Scheme::kUmd, 0.925), "<s>", "def"));
  EXPECT_FALSE(IsGreen(WatermarkKey{1}, Config(Scheme::kUmd, 0.924), "<s>", "def"));
  EXPECT_TRUE(IsGreen(WatermarkKey{0xdeadbeef}, Config(Scheme::kUmd, 0.582), "x", "="));
  EXPECT_FALSE(IsGreen(WatermarkKey{0xdeadbeef}, Config(Scheme::kUmd, 0.581), "x", "="));
  EXPECT_TRUE(IsGreen(WatermarkKey{0xdeadbeef}, Config(Scheme::kUnigram, 0.015), "any", "return"));
  EXPECT_FALSE(IsGreen(WatermarkKey{0xdeadbeef}, Config(Scheme::kUnigram, 0.014), "any", "return"));
}

TEST(GreenMembership, Deterministic) {
  const SchemeConfig c = Config(Scheme::kUmd);
  for (const std::string& t : RandomTokens(100, 1)) {
    EXPECT_EQ(IsGreen(WatermarkKey{9}, c, "ctx", t), IsGreen(WatermarkKey{9}, c, "ctx", t));
  }
}

TEST(GreenMembership, UnigramFractionNearGamma) {
  const auto tokens = RandomTokens(10000, 2);
  size_t green = 0;
  for (const std::string& t : tokens) green += IsGreen(WatermarkKey{1}, Config(Scheme::kUnigram), "", t);
  EXPECT_NEAR(green / 10000.0, 0.25, 0.02);
}

TEST(GreenMembership, UmdContextFlipRate) {
  // Two independent Bernoulli(0.25) draws disagree with probability 2 * 0.25 * 0.75.
  const auto tokens = RandomTokens(10000, 3);
  size_t flips = 0;
  for (const std::string& t : tokens) {
    flips += IsGreen(WatermarkKey{1}, Config(Scheme::kUmd), "alpha", t) !=
             IsGreen(WatermarkKey{1}, Config(Scheme::kUmd), "beta", t);
  }
  EXPECT_NEAR(flips / 10000.0, 0.375, 0.02);
}

TEST(GreenMembership, KeyAgreement) {
  const auto tokens = RandomTokens(10000, 4);
  size_t agree = 0;
  for (const std::string& t : tokens) {
    agree += IsGreen(WatermarkKey{11}, Config(Scheme::kUmd), "c", t) ==
             IsGreen(WatermarkKey{12}, Config(Scheme::kUmd), "c", t);
  }
  EXPECT_NEAR(agree / 10000.0, 0.625, 0.02);
}

TEST(GreenMembership, UnigramIgnoresContext) {
  for (const std::string& t : RandomTokens(500, 5)) {
    EXPECT_EQ(IsGreen(WatermarkKey{3}, Config(Scheme::kUnigram), "one", t),
              IsGreen(WatermarkKey{3}, Config(Scheme::kUnigram), "two", t));
  }
}

TEST(SchemeConfig, Validation) {
  EXPECT_THROW(Config(Scheme::kUmd, 0.0).Validate(), ConfigError);
  EXPECT_THROW(Config(Scheme::kUmd, 1.0).Validate(), ConfigError);
  EXPECT_THROW(Config(Scheme::kUmd, 0.25, -1.0).Validate(), ConfigError);
  EXPECT_NO_THROW(Config(Scheme::kUmd).Validate());
  EXPECT_EQ(ParseScheme("UMD"), Scheme::kUmd);
  EXPECT_EQ(ParseScheme("Unigram"), Scheme::kUnigram);
  EXPECT_THROW(ParseScheme("nope"), ConfigError);
}

TEST(WatermarkKey, HexRoundTrip) {
  EXPECT_EQ(WatermarkKey{0xdeadbeef}.ToHex(), "00000000deadbeef");
  EXPECT_EQ(WatermarkKey::FromHex("00000000deadbeef"), WatermarkKey{0xdeadbeef});
  EXPECT_EQ(WatermarkKey::FromHex("0xFF"), WatermarkKey{255});
  EXPECT_THROW(WatermarkKey::FromHex("xyz"), ConfigError);
  EXPECT_THROW(WatermarkKey::FromHex(""), ConfigError);
}

TEST(Distribution, RejectsInvalidInput) {
  EXPECT_THROW(Distribution({"a", "a"}, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Distribution({"a", "b"}, {0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(Distribution({"a", "b"}, {1.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(Distribution({"a"}, {0.5, 0.5}), std::invalid_argument);
}

TEST(Distribution, InverseCdfSampling) {
  const Distribution d({"a", "b", "c"}, {0.2, 0.5, 0.3});
  EXPECT_EQ(d.SampleIndex(0.0), 0u);
  EXPECT_EQ(d.SampleIndex(0.19), 0u);
  EXPECT_EQ(d.SampleIndex(0.21), 1u);
  EXPECT_EQ(d.SampleIndex(0.69), 1u);
  EXPECT_EQ(d.SampleIndex(0.71), 2u);
  EXPECT_EQ(d.SampleIndex(0.999999), 2u);
}

TEST(GreenBias, DeltaZeroIsIdentity) {
  const Distribution d = Distribution::Uniform(RandomTokens(50, 6));
  EXPECT_EQ(ApplyGreenBias(d, WatermarkKey{1}, Config(Scheme::kUmd, 0.25, 0.0), "c"), d);
}

TEST(GreenBias, ClosedFormGreenMass) {
  // Exactly 250 green and 750 red tokens under the context "c".
  const WatermarkKey key{77};
  const SchemeConfig c = Config(Scheme::kUmd);
  std::vector<std::string> green, red;
  for (const std::string& t : RandomTokens(20000, 7)) {
    auto& bucket = IsGreen(key, c, "c", t) ? green : red;
    if ((&bucket == &green && green.size() < 250) || (&bucket == &red && red.size() < 750)) {
      bucket.push_back(t);
    }
  }
  ASSERT_EQ(green.size(), 250u);
  ASSERT_EQ(red.size(), 750u);
  std::vector<std::string> support = green;
  support.insert(support.end(), red.begin(), red.end());
  const Distribution biased = ApplyGreenBias(Distribution::Uniform(support), key, c, "c");
  const double mass =
      biased.MassWhere([&](const std::string& t) { return IsGreen(key, c, "c", t); });
  // 0.25 e^2 / (0.25 e^2 + 0.75) with e^2 = 7.38906.
  EXPECT_NEAR(mass, 0.7112, 1e-4);
  EXPECT_EQ(biased.support(), support);
  double total = 0.0;
  for (double p : biased.probs()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(GreenBias, NoGreenMassIsUnchanged) {
  const WatermarkKey key{5};
  const SchemeConfig c = Config(Scheme::kUnigram);
  std::vector<std::string> support, all = RandomTokens(40, 8);
  std::vector<double> probs;
  for (const std::string& t : all) {
    if (!IsGreen(key, c, "", t) && support.size() < 3) support.push_back(t);
  }
  for (const std::string& t : all) {
    if (IsGreen(key, c, "", t)) {
      support.push_back(t);
      break;
    }
  }
  ASSERT_EQ(support.size(), 4u);
  const Distribution d(support, {0.5, 0.25, 0.25, 0.0});
  EXPECT_EQ(ApplyGreenBias(d, key, c, ""), d);
}

TEST(GreenBias, NeverReducesGreenMass) {
  const WatermarkKey key{6};
  const SchemeConfig c = Config(Scheme::kUmd);
  SplitMix64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto support = RandomTokens(20, 100 + trial);
    std::vector<double> w(support.size());
    double total = 0.0;
    for (double& x : w) total += (x = rng.NextDouble());
    for (double& x : w) x /= total;
    const Distribution d(support, w);
    auto green = [&](const std::string& t) { return IsGreen(key, c, "q", t); };
    EXPECT_GE(ApplyGreenBias(d, key, c, "q").MassWhere(green), d.MassWhere(green) - 1e-12);
  }
}

class PoolProvider : public DistributionProvider {
 public:
  explicit PoolProvider(std::vector<std::string> pool) : dist_(Distribution::Uniform(pool)) {}
  Distribution Next(std::span<const std::string>) const override { return dist_; }

 private:
  Distribution dist_;
};

class EmptyProvider : public DistributionProvider {
 public:
  Distribution Next(std::span<const std::string>) const override { return {}; }
};

TEST(WatermarkGenerate, ZeroTokens) {
  const PoolProvider p(RandomTokens(10, 1));
  EXPECT_TRUE(WatermarkGenerate(p, {}, WatermarkKey{1}, Config(Scheme::kUmd), 0, 1).empty());
}

TEST(WatermarkGenerate, EmptyProviderThrows) {
  EXPECT_THROW(WatermarkGenerate(EmptyProvider(), {}, WatermarkKey{1}, Config(Scheme::kUmd), 5, 1),
               GenerationError);
}

TEST(WatermarkGenerate, GreenCountMatchesBinomial) {
  const PoolProvider p(RandomTokens(1000, 10));
  const SchemeConfig c = Config(Scheme::kUmd);
  const TokenStream out = WatermarkGenerate(p, {}, WatermarkKey{42}, c, 300, 1);
  ASSERT_EQ(out.size(), 300u);
  const double sigma = std::sqrt(300 * 0.7112 * 0.2888);
  EXPECT_NEAR(static_cast<double>(CountGreen(out, WatermarkKey{42}, c)), 0.7112 * 300, 3 * sigma);
}

TEST(WatermarkGenerate, DeterministicPerSeed) {
  const PoolProvider p(RandomTokens(100, 11));
  const SchemeConfig c = Config(Scheme::kUnigram);
  EXPECT_EQ(WatermarkGenerate(p, {}, WatermarkKey{1}, c, 50, 3),
            WatermarkGenerate(p, {}, WatermarkKey{1}, c, 50, 3));
}

TEST(WatermarkGenerate, BiasRaisesGreenCountOnPairedSeeds) {
  const PoolProvider p(RandomTokens(1000, 12));
  const SchemeConfig off = Config(Scheme::kUmd, 0.25, 0.0), on = Config(Scheme::kUmd);
  int higher = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const size_t g0 = CountGreen(WatermarkGenerate(p, {}, WatermarkKey{8}, off, 100, seed),
                                 WatermarkKey{8}, on);
    const size_t g2 = CountGreen(WatermarkGenerate(p, {}, WatermarkKey{8}, on, 100, seed),
                                 WatermarkKey{8}, on);
    higher += g2 > g0;
  }
  EXPECT_GE(higher, 190);
}

}  // namespace
}  // namespace wmlab
