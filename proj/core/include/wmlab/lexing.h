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

#ifndef WMLAB_LEXING_H_
#define WMLAB_LEXING_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wmlab {

enum class TokenClass {
  kIdentifier,
  kKeyword,
  kInteger,
  kFloat,
  kString,
  kOperator,
  kPunctuation,
  kNewline,
  kIndent,
  kDedent,
  kComment,
};

std::string_view TokenClassName(TokenClass cls);

// Canonical texts of the layout tokens. Layout tokens own no bytes of the
// source except a NEWLINE that consumed a line break.
inline constexpr std::string_view kNewlineText = "\n";
inline constexpr std::string_view kIndentText = "<INDENT>";
inline constexpr std::string_view kDedentText = "<DEDENT>";

struct Span {
  size_t start = 0;
  size_t end = 0;

  bool operator==(const Span&) const = default;
};

struct CodeToken {
  std::string text;
  TokenClass cls = TokenClass::kIdentifier;
  Span span;

  bool IsLayout() const {
    return cls == TokenClass::kNewline || cls == TokenClass::kIndent ||
           cls == TokenClass::kDedent;
  }

  bool operator==(const CodeToken&) const = default;
};

// A lexed program: the ordered tokens plus the text they were read from.
class TokenStream {
 public:
  TokenStream() = default;
  TokenStream(std::vector<CodeToken> tokens, std::string source)
      : tokens_(std::move(tokens)), source_(std::move(source)) {}

  // Builds a stream from bare token texts, classifying each text on its own.
  // The source is the texts joined by single spaces.
  static TokenStream FromTexts(std::span<const std::string> texts);

  const std::vector<CodeToken>& tokens() const { return tokens_; }
  const std::string& source() const { return source_; }
  size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const CodeToken& operator[](size_t i) const { return tokens_[i]; }

  std::vector<std::string> Texts() const;
  std::vector<TokenClass> Classes() const;

  bool operator==(const TokenStream&) const = default;

 private:
  std::vector<CodeToken> tokens_;
  std::string source_;
};

bool IsPythonKeyword(std::string_view word);
bool IsPythonBuiltin(std::string_view word);
// [A-Za-z_][A-Za-z0-9_]* and not a keyword.
bool IsValidIdentifier(std::string_view word);

// Lexes Python-subset source. Layout follows Python's tokenizer: NEWLINE ends
// each logical line, INDENT/DEDENT bracket blocks, blank lines and bracketed
// line breaks produce nothing. An unterminated final line only gets a
// synthetic NEWLINE when blocks are still open at end of input.
// Throws LexError.
TokenStream Tokenize(std::string_view source);

// Renders tokens back to source text with canonical spacing and four-space
// indentation. Tokenize(RenderTokens(t)) reproduces the class sequence of t.
std::string RenderTokens(std::span<const CodeToken> tokens);

// Token-level Levenshtein distance between two text sequences.
size_t TokenEditDistance(std::span<const std::string> a,
                         std::span<const std::string> b);

// Edit distance divided by max(|before|, |after|, 1).
double TokenChangeProportion(const TokenStream& before,
                             const TokenStream& after);

}  // namespace wmlab

#endif  // WMLAB_LEXING_H_
