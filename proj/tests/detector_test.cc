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

#include "wmlab/detector.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "wmlab/error.h"
#include "wmlab/hash.h"

namespace wmlab {
namespace {

SchemeConfig Config(Scheme scheme, double gamma = 0.25) {
  SchemeConfig c;
  c.scheme = scheme;
  c.gamma = gamma;
  return c;
}

// Distinct Unigram tokens with exactly `green` green and `red` red members.
TokenStream UnigramStream(WatermarkKey key, size_t green, size_t red, uint64_t seed) {
  std::vector<std::string> texts;
  size_t g = 0, r = 0;
  SplitMix64 rng(seed);
  while (g < green || r < red) {
    const std::string t = "w" + std::to_string(rng.Next() % 100000000);
    const bool is_green = IsGreen(key, Config(Scheme::kUnigram), "", t);
    if (is_green && g < green) {
      texts.push_back(t);
      ++g;
    } else if (!is_green && r < red) {
      texts.push_back(t);
      ++r;
    }
  }
  return TokenStream::FromTexts(texts);
}

TokenStream RandomStream(size_t n, SplitMix64& rng) {
  std::vector<std::string> texts(n);
  for (auto& t : texts) t = "v" + std::to_string(rng.Next() % 1000000);
  return TokenStream::FromTexts(texts);
}

TEST(ZScore, UmdFormulas) {
  EXPECT_DOUBLE_EQ(ZScoreUmd(50, 100, UmdFormula::kLiteral, 0.25), 0.0);
  EXPECT_DOUBLE_EQ(ZScoreUmd(75, 100, UmdFormula::kLiteral, 0.25), 5.0);
  // 50 / sqrt(18.75)
  EXPECT_NEAR(ZScoreUmd(75, 100, UmdFormula::kGeneral, 0.25), 11.547005, 1e-5);
}

TEST(ZScore, UnigramFormula) {
  EXPECT_DOUBLE_EQ(ZScoreUnigram(25, 100, 0.25), 0.0);
  EXPECT_NEAR(ZScoreUnigram(40, 100, 0.25), 3.4641016, 1e-6);
  EXPECT_NEAR(ZScoreUnigram(10, 100, 0.25), -3.4641016, 1e-6);
}

TEST(ZScore, ZeroTokensIsUndefined) {
  EXPECT_THROW(ZScoreUmd(0, 0, UmdFormula::kLiteral, 0.25), UndefinedStatisticError);
  EXPECT_THROW(ZScoreUnigram(0, 0, 0.25), UndefinedStatisticError);
}

TEST(ZScore, LiteralEqualsGeneralAtHalf) {
  for (size_t g = 0; g <= 64; g += 7) {
    EXPECT_NEAR(ZScoreUmd(g, 64, UmdFormula::kLiteral, 0.5),
                ZScoreUmd(g, 64, UmdFormula::kGeneral, 0.5), 1e-12);
  }
}

TEST(ZScore, IncreasingInGreenCount) {
  for (size_t g = 0; g < 100; ++g) {
    EXPECT_LT(ZScoreUnigram(g, 100, 0.25), ZScoreUnigram(g + 1, 100, 0.25));
    EXPECT_LT(ZScoreUmd(g, 100, UmdFormula::kLiteral, 0.25),
              ZScoreUmd(g + 1, 100, UmdFormula::kLiteral, 0.25));
  }
}

TEST(PValue, NormalTail) {
  EXPECT_DOUBLE_EQ(PValue(0.0), 0.5);
  EXPECT_NEAR(PValue(3.0), 0.00135, 1e-5);
  EXPECT_NEAR(PValue(-3.0), 0.99865, 1e-5);
  for (double z = -5; z < 5; z += 0.25) EXPECT_GT(PValue(z), PValue(z + 0.25));
}

TEST(Detect, ComposesOracles) {
  const WatermarkKey key{21};
  const TokenStream s = UnigramStream(key, 40, 60, 1);
  DetectorConfig det;
  const DetectionReport r = Detect(s, key, Config(Scheme::kUnigram), det);
  EXPECT_EQ(r.tokens, 100u);
  EXPECT_EQ(r.green_count, 40u);
  EXPECT_NEAR(r.z, 3.4641, 1e-4);
  EXPECT_TRUE(r.decision);
  det.z_threshold = 3.5;
  EXPECT_FALSE(Detect(s, key, Config(Scheme::kUnigram), det).decision);
}

TEST(Detect, NullCenterIsNotFlagged) {
  const WatermarkKey key{22};
  const DetectionReport r =
      Detect(UnigramStream(key, 25, 75, 2), key, Config(Scheme::kUnigram), DetectorConfig{});
  EXPECT_DOUBLE_EQ(r.z, 0.0);
  EXPECT_FALSE(r.decision);
}

TEST(Detect, PThresholdRule) {
  const WatermarkKey key{23};
  DetectorConfig det;
  det.rule = DecisionRule::kPThreshold;
  det.p_threshold = 0.001;
  const TokenStream s = UnigramStream(key, 40, 60, 3);  // p ~ 2.7e-4
  EXPECT_TRUE(Detect(s, key, Config(Scheme::kUnigram), det).decision);
  det.p_threshold = 0.0001;
  EXPECT_FALSE(Detect(s, key, Config(Scheme::kUnigram), det).decision);
}

TEST(Detect, EmptyStreamThrows) {
  EXPECT_THROW(Detect(TokenStream(), WatermarkKey{1}, Config(Scheme::kUmd), DetectorConfig{}),
               UndefinedStatisticError);
}

TEST(DetectorConfig, Validation) {
  DetectorConfig det;
  det.group_size = 0;
  EXPECT_THROW(det.Validate(), ConfigError);
  EXPECT_EQ(ParseUmdFormula("literal"), UmdFormula::kLiteral);
  EXPECT_THROW(ParseUmdFormula("other"), ConfigError);
}

TEST(CountGreen, EmptyIsZero) {
  EXPECT_EQ(CountGreen(TokenStream(), WatermarkKey{1}, Config(Scheme::kUmd)), 0u);
}

TEST(CountGreen, BruteForceOnSixTokens) {
  const TokenStream s = Tokenize("x = y + 1\n");
  ASSERT_EQ(s.size(), 6u);
  for (Scheme scheme : {Scheme::kUmd, Scheme::kUnigram}) {
    for (uint64_t k = 0; k < 50; ++k) {
      const WatermarkKey key{Mix64(k)};
      size_t expected = 0;
      for (size_t i = 0; i < s.size(); ++i) {
        const std::string ctx = i == 0 ? std::string(kBoundaryContext) : s[i - 1].text;
        expected += IsGreen(key, Config(scheme), ctx, s[i].text);
      }
      EXPECT_EQ(CountGreen(s, key, Config(scheme)), expected);
    }
  }
}

TEST(CountGreen, SkipsCommentsUnlessAsked) {
  const TokenStream s = Tokenize("# only a comment\n");
  EXPECT_EQ(ScoredLength(s), s.size() - 1);
  EXPECT_EQ(ScoredLength(s, true), s.size());
}

TEST(CountGreen, NullMeanMatchesBinomial) {
  SplitMix64 rng(31);
  double total = 0.0;
  for (int i = 0; i < 1000; ++i) {
    total += static_cast<double>(CountGreen(RandomStream(400, rng), WatermarkKey{5}, Config(Scheme::kUmd)));
  }
  // Mean of 1000 Binomial(400, 0.25) draws: 100 +- 3 sqrt(75 / 1000).
  EXPECT_NEAR(total / 1000.0, 100.0, 3.0 * std::sqrt(75.0 / 1000.0));
}

TEST(CountGreen, NullCalibration) {
  SplitMix64 rng(32);
  int flagged = 0;
  for (int i = 0; i < 1000; ++i) {
    flagged += Detect(RandomStream(300, rng), WatermarkKey{6}, Config(Scheme::kUmd), DetectorConfig{})
                   .decision;
  }
  EXPECT_LE(flagged, 10);
}

TEST(TallyGreen, RepeatedUnitsCountOnce) {
  DetectorConfig det;
  const TokenStream s = TokenStream::FromTexts(std::vector<std::string>{"a", "b", "a", "b"});
  // UMD units: (<s>,a) (a,b) (b,a) (a,b); the last repeats.
  EXPECT_EQ(TallyGreen(std::span(&s, 1), WatermarkKey{1}, Config(Scheme::kUmd), det).tokens, 3u);
  // Unigram units are tokens: a, b.
  EXPECT_EQ(TallyGreen(std::span(&s, 1), WatermarkKey{1}, Config(Scheme::kUnigram), det).tokens, 2u);
  det.ignore_repeated = false;
  EXPECT_EQ(TallyGreen(std::span(&s, 1), WatermarkKey{1}, Config(Scheme::kUmd), det).tokens, 4u);
}

TEST(TallyGreen, LayoutExcludedByDefault) {
  const TokenStream s = Tokenize("def f(x):\n    return x\n");
  DetectorConfig det;
  det.ignore_repeated = false;
  EXPECT_EQ(TallyGreen(std::span(&s, 1), WatermarkKey{1}, Config(Scheme::kUmd), det).tokens, 8u);
  det.count_layout = true;
  EXPECT_EQ(TallyGreen(std::span(&s, 1), WatermarkKey{1}, Config(Scheme::kUmd), det).tokens, 12u);
}

TEST(TallyGreen, LayoutIsNotContext) {
  // With layout skipped, "return" is hashed against ":".
  const TokenStream s = Tokenize("def f(x):\n    return x\n");
  DetectorConfig det;
  det.ignore_repeated = false;
  for (uint64_t k = 0; k < 30; ++k) {
    const WatermarkKey key{Mix64(k + 100)};
    size_t expected = 0;
    std::string ctx(kBoundaryContext);
    for (const CodeToken& t : s.tokens()) {
      if (t.IsLayout()) continue;
      expected += IsGreen(key, Config(Scheme::kUmd), ctx, t.text);
      ctx = t.text;
    }
    EXPECT_EQ(TallyGreen(std::span(&s, 1), key, Config(Scheme::kUmd), det).green, expected);
  }
}

TEST(DetectGrouped, PoolsThreeCompletions) {
  SplitMix64 rng(40);
  std::vector<TokenStream> c = {RandomStream(100, rng), RandomStream(100, rng), RandomStream(100, rng)};
  DetectorConfig det;
  det.ignore_repeated = false;
  const auto reports = DetectGrouped(c, WatermarkKey{1}, Config(Scheme::kUmd), det);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].tokens, 300u);
  EXPECT_EQ(reports[0].members.size(), 3u);
}

TEST(DetectGrouped, AdditiveOverCompletions) {
  const std::vector<TokenStream> c = {Tokenize("def f(a):\n    return a + 1\n"),
                                      Tokenize("def g(b):\n    c = b * 2\n    return c\n"),
                                      Tokenize("def h():\n    return 7\n"),
                                      Tokenize("def k(x, y):\n    return x - y\n")};
  DetectorConfig det;
  det.ignore_repeated = false;
  det.count_layout = true;
  det.group_size = 2;
  det.grouping_seed = 99;
  for (Scheme scheme : {Scheme::kUmd, Scheme::kUnigram}) {
    const WatermarkKey key{1234};
    for (const DetectionReport& r : DetectGrouped(c, key, Config(scheme), det)) {
      size_t green = 0, tokens = 0;
      for (size_t m : r.members) {
        green += CountGreen(c[m], key, Config(scheme));
        tokens += ScoredLength(c[m]);
      }
      EXPECT_EQ(r.green_count, green);
      EXPECT_EQ(r.tokens, tokens);
    }
  }
}

TEST(DetectGrouped, GroupSizeOneMatchesDetect) {
  SplitMix64 rng(41);
  std::vector<TokenStream> c;
  for (int i = 0; i < 7; ++i) c.push_back(RandomStream(30, rng));
  DetectorConfig det;
  det.group_size = 1;
  det.grouping_seed = 5;
  const auto reports = DetectGrouped(c, WatermarkKey{2}, Config(Scheme::kUmd), det);
  ASSERT_EQ(reports.size(), 7u);
  for (const DetectionReport& r : reports) {
    ASSERT_EQ(r.members.size(), 1u);
    const DetectionReport single = Detect(c[r.members[0]], WatermarkKey{2}, Config(Scheme::kUmd), det);
    EXPECT_EQ(r.tokens, single.tokens);
    EXPECT_EQ(r.green_count, single.green_count);
    EXPECT_EQ(r.z, single.z);
  }
}

TEST(DetectGrouped, LastGroupMayBeSmaller) {
  SplitMix64 rng(42);
  std::vector<TokenStream> c;
  for (int i = 0; i < 7; ++i) c.push_back(RandomStream(10, rng));
  const auto reports = DetectGrouped(c, WatermarkKey{3}, Config(Scheme::kUmd), DetectorConfig{});
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_EQ(reports[2].members.size(), 1u);
}

TEST(DetectGrouped, SeededAndRecorded) {
  SplitMix64 rng(43);
  std::vector<TokenStream> c;
  for (int i = 0; i < 9; ++i) c.push_back(RandomStream(10, rng));
  DetectorConfig det;
  det.grouping_seed = 17;
  const auto a = DetectGrouped(c, WatermarkKey{3}, Config(Scheme::kUmd), det);
  EXPECT_EQ(a, DetectGrouped(c, WatermarkKey{3}, Config(Scheme::kUmd), det));
  EXPECT_EQ(a[0].grouping_seed, 17u);
}

TEST(DetectGrouped, EmptyInputsThrow) {
  EXPECT_THROW(DetectGrouped({}, WatermarkKey{1}, Config(Scheme::kUmd), DetectorConfig{}),
               UndefinedStatisticError);
  const std::vector<TokenStream> empties(3);
  EXPECT_THROW(DetectGrouped(empties, WatermarkKey{1}, Config(Scheme::kUmd), DetectorConfig{}),
               UndefinedStatisticError);
}

TEST(ReportCsv, FixedColumns) {
  DetectionReport r;
  r.group_id = 2;
  r.tokens = 300;
  r.green_count = 120;
  r.z = 3.5;
  r.p = 0.25;
  r.decision = true;
  std::ostringstream out;
  WriteReportsCsv(out, std::span(&r, 1));
  EXPECT_EQ(out.str(), "group_id,T,green_count,z,p,decision\n2,300,120,3.5,0.25,1\n");
}

}  // namespace
}  // namespace wmlab
