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

#include "wmlab/syntax_tree.h"

#include <string>

#include <gtest/gtest.h>

#include "wmlab/error.h"
#include "wmlab/harness.h"
#include "wmlab/lexicon.h"

namespace wmlab {
namespace {

TEST(Parse, RoundTripIsLossless) {
  const char* sources[] = {
      "def f():\n    return 1\n",
      "def f():\n    return 1  # trailing\n",
      "x = 1\n\n\n# tail comment",
      "class A:\n    def m(self, v):\n        self.v = v\n\n\ndef g(a, *rest, k=2, **kw):\n"
      "    try:\n        return [i for i in rest if i > a]\n    except ValueError as e:\n"
      "        raise\n    finally:\n        pass\n",
      "def h(s):\n    with open(s) as fh:\n        data = fh.read()\n    return data\n",
      "def w(n):\n    while n > 0:\n        n -= 1\n    else:\n        n = 9\n    return n",
      "",
  };
  for (const char* src : sources) {
    const SyntaxTree tree = ParseProgram(src);
    EXPECT_EQ(ConvertToCode(tree), src);
  }
}

TEST(Parse, TrailingCommentPreserved) {
  const std::string src = "def f():\n    return 1\n# done\n";
  EXPECT_EQ(ParseProgram(src).Unparse(), src);
}

TEST(Parse, MalformedInputReportsLine) {
  try {
    ParseProgram("def f(:");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Parse, LexErrorsBecomeParseErrors) {
  EXPECT_THROW(ParseProgram("def f():\n    return 'open\n"), ParseError);
}

TEST(Parse, StructureAndPaths) {
  const SyntaxTree tree = ParseProgram("def f(a):\n    b = a\n    if b:\n        return b\n    return 0\n");
  const Node* fn = tree.Find({0});
  ASSERT_NE(fn, nullptr);
  EXPECT_EQ(fn->kind, NodeKind::kFunctionDef);
  const Node* suite = tree.Find({0, 0});
  ASSERT_NE(suite, nullptr);
  EXPECT_EQ(suite->kind, NodeKind::kSuite);
  EXPECT_EQ(suite->children.size(), 3u);
  EXPECT_EQ(tree.Find({0, 0, 1})->kind, NodeKind::kIf);
  EXPECT_EQ(tree.Find({7}), nullptr);
}

TEST(Parse, NameRoles) {
  const SyntaxTree tree = ParseProgram("def f(a):\n    a.b = g(k=a)\n    c = a\n");
  const auto& toks = tree.tokens().tokens();
  auto role_of = [&](const std::string& text, size_t nth) {
    for (size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].text == text && nth-- == 0) return tree.role(i);
    }
    return NameRole::kNone;
  };
  EXPECT_EQ(role_of("f", 0), NameRole::kDefName);
  EXPECT_EQ(role_of("a", 0), NameRole::kParam);
  EXPECT_EQ(role_of("b", 0), NameRole::kAttribute);
  EXPECT_EQ(role_of("k", 0), NameRole::kKeywordArg);
  EXPECT_EQ(role_of("c", 0), NameRole::kStore);
  EXPECT_EQ(role_of("a", 3), NameRole::kLoad);
}

TEST(Lexicon, ParseFiltersAndDeduplicates) {
  const WordLexicon lex = WordLexicon::Parse("# header\napple\nBanana\napple\nfor\nprint\ncar_2\n\n  pear  # fruit\n");
  EXPECT_EQ(lex.words(), (std::vector<std::string>{"apple", "car_2", "pear"}));
}

TEST(Lexicon, BundledListIsUsable) {
  const WordLexicon lex = WordLexicon::Load(DefaultLexiconPath());
  EXPECT_GT(lex.size(), 500u);
  for (const std::string& w : lex.words()) {
    EXPECT_TRUE(IsValidIdentifier(w)) << w;
    EXPECT_FALSE(IsPythonKeyword(w)) << w;
  }
}

TEST(Lexicon, SampleIdentifierRespectsForbidden) {
  const WordLexicon lex = WordLexicon::Parse("alpha\nbeta\ngamma\n");
  SplitMix64 rng(1);
  const std::set<std::string, std::less<>> forbidden = {"alpha", "gamma"};
  for (int i = 0; i < 20; ++i) EXPECT_EQ(SampleIdentifier(lex, rng, forbidden), "beta");
}

TEST(Lexicon, SampleIdentifierExhaustion) {
  const WordLexicon lex = WordLexicon::Parse("alpha\nbeta\n");
  SplitMix64 rng(1);
  EXPECT_THROW(SampleIdentifier(lex, rng, {"alpha", "beta"}), LexiconExhaustedError);
  EXPECT_THROW(SampleIdentifier(WordLexicon(), rng, {}), LexiconExhaustedError);
}

TEST(Lexicon, SampleIdentifierDeterministic) {
  const WordLexicon lex = WordLexicon::Parse("a1\nb1\nc1\nd1\ne1\n");
  SplitMix64 r1(77), r2(77);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(SampleIdentifier(lex, r1, {}), SampleIdentifier(lex, r2, {}));
}

TEST(Lexicon, SliceIsSeeded) {
  const WordLexicon lex = WordLexicon::Parse("a1\nb1\nc1\nd1\ne1\nf1\n");
  EXPECT_EQ(lex.Slice(3, 4), lex.Slice(3, 4));
  EXPECT_EQ(lex.Slice(3, 4).size(), 3u);
  EXPECT_EQ(lex.Slice(10, 4).size(), 6u);
}

}  // namespace
}  // namespace wmlab
