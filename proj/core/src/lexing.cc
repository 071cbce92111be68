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

#include "wmlab/lexing.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <unordered_map>

#include "wmlab/error.h"

namespace wmlab {
namespace {

constexpr std::array<std::string_view, 35> kKeywords = {
    "False",  "None",     "True",     "and",    "as",     "assert", "async",
    "await",  "break",    "class",    "continue", "def",  "del",    "elif",
    "else",   "except",   "finally",  "for",    "from",   "global", "if",
    "import", "in",       "is",       "lambda", "nonlocal", "not",  "or",
    "pass",   "raise",    "return",   "try",    "while",  "with",   "yield"};

constexpr std::array<std::string_view, 72> kBuiltins = {
    "abs",        "aiter",     "all",          "anext",       "any",
    "ascii",      "bin",       "bool",         "breakpoint",  "bytearray",
    "bytes",      "callable",  "chr",          "classmethod", "compile",
    "complex",    "copyright", "credits",      "delattr",     "dict",
    "dir",        "divmod",    "enumerate",    "eval",        "exec",
    "exit",       "filter",    "float",        "format",      "frozenset",
    "getattr",    "globals",   "hasattr",      "hash",        "help",
    "hex",        "id",        "input",        "int",         "isinstance",
    "issubclass", "iter",      "len",          "license",     "list",
    "locals",     "map",       "max",          "memoryview",  "min",
    "next",       "object",    "oct",          "open",        "ord",
    "pow",        "print",     "property",     "quit",        "range",
    "repr",       "reversed",  "round",        "set",         "setattr",
    "slice",      "sorted",    "staticmethod", "str",         "sum",
    "super",      "tuple"};

constexpr std::array<std::string_view, 5> kMoreBuiltins = {"type", "vars",
                                                           "zip", "self",
                                                           "__import__"};

// Longest first so a greedy scan picks multi-character operators.
constexpr std::array<std::string_view, 46> kOperators = {
    "**=", "//=", ">>=", "<<=", "...", "**", "//", "<<", ">>", "<=",
    ">=",  "==",  "!=",  "->",  ":=",  "+=", "-=", "*=", "/=", "%=",
    "&=",  "|=",  "^=",  "@=",  "+",   "-",  "*",  "/",  "%",  "&",
    "|",   "^",   "~",   "<",   ">",   "=",  "@",  "(",  ")",  "[",
    "]",   "{",   "}",   ",",   ":",   ";"};

bool IsPunctuationText(std::string_view text) {
  return text == "(" || text == ")" || text == "[" || text == "]" ||
         text == "{" || text == "}" || text == "," || text == ":" ||
         text == ";" || text == "." || text == "...";
}

bool IsIdentStart(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80;
}

bool IsIdentChar(unsigned char c) {
  return IsIdentStart(c) || (c >= '0' && c <= '9');
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool IsStringPrefix(std::string_view p) {
  std::string lower;
  for (char c : p) lower.push_back(static_cast<char>(c | 0x20));
  return lower == "r" || lower == "u" || lower == "f" || lower == "b" ||
         lower == "br" || lower == "rb" || lower == "fr" || lower == "rf";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<CodeToken> Run() {
    indents_.push_back(0);
    bool at_line_start = true;
    while (true) {
      if (at_line_start && depth_ == 0) {
        if (!HandleLineStart()) break;
        at_line_start = false;
        continue;
      }
      if (pos_ >= src_.size()) break;
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\f') {
        ++pos_;
      } else if (c == '\\' && LineBreakLength(pos_ + 1) > 0) {
        pos_ += 1 + LineBreakLength(pos_ + 1);
      } else if (size_t len = LineBreakLength(pos_); len > 0) {
        if (depth_ == 0) {
          Emit(std::string(kNewlineText), TokenClass::kNewline, pos_,
               pos_ + len);
          at_line_start = true;
        }
        pos_ += len;
      } else if (c == '#') {
        LexComment();
      } else if (StartsString()) {
        LexString();
      } else if (IsDigit(c) ||
                 (c == '.' && pos_ + 1 < src_.size() && IsDigit(src_[pos_ + 1]))) {
        LexNumber();
      } else if (IsIdentStart(static_cast<unsigned char>(c))) {
        LexName();
      } else {
        LexOperator();
      }
    }
    if (depth_ > 0) {
      throw LexError("end of input inside brackets", src_.size());
    }
    if (!at_line_start && indents_.size() > 1) {
      Emit(std::string(kNewlineText), TokenClass::kNewline, src_.size(),
           src_.size());
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      Emit(std::string(kDedentText), TokenClass::kDedent, src_.size(),
           src_.size());
    }
    return std::move(tokens_);
  }

 private:
  size_t LineBreakLength(size_t at) const {
    if (at >= src_.size()) return 0;
    if (src_[at] == '\n') return 1;
    if (src_[at] == '\r') {
      return (at + 1 < src_.size() && src_[at + 1] == '\n') ? 2 : 1;
    }
    return 0;
  }

  // Measures indentation of the line at pos_ and emits INDENT/DEDENT.
  // Returns false at end of input.
  bool HandleLineStart() {
    while (true) {
      size_t column = 0;
      size_t p = pos_;
      while (p < src_.size()) {
        const char c = src_[p];
        if (c == ' ') {
          ++column;
        } else if (c == '\t') {
          column = (column / 8 + 1) * 8;
        } else if (c == '\f') {
          column = 0;
        } else {
          break;
        }
        ++p;
      }
      pos_ = p;
      if (p >= src_.size()) return false;
      if (size_t len = LineBreakLength(p); len > 0) {
        pos_ += len;
        continue;
      }
      if (src_[p] == '#') {
        LexComment();
        pos_ += LineBreakLength(pos_);
        continue;
      }
      if (src_[p] == '\\' && LineBreakLength(p + 1) > 0) {
        pos_ = p + 1 + LineBreakLength(p + 1);
        continue;
      }
      if (column > indents_.back()) {
        indents_.push_back(column);
        Emit(std::string(kIndentText), TokenClass::kIndent, p, p);
      } else {
        while (column < indents_.back()) {
          indents_.pop_back();
          Emit(std::string(kDedentText), TokenClass::kDedent, p, p);
        }
        if (column != indents_.back()) {
          throw LexError("unindent does not match any outer indentation level",
                         p);
        }
      }
      return true;
    }
  }

  void LexComment() {
    const size_t start = pos_;
    while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') {
      ++pos_;
    }
    Emit(std::string(src_.substr(start, pos_ - start)), TokenClass::kComment,
         start, pos_);
  }

  bool StartsString() const {
    size_t p = pos_;
    while (p < src_.size() && p - pos_ < 2 &&
           std::isalpha(static_cast<unsigned char>(src_[p]))) {
      ++p;
    }
    if (p >= src_.size() || (src_[p] != '\'' && src_[p] != '"')) return false;
    return p == pos_ || IsStringPrefix(src_.substr(pos_, p - pos_));
  }

  void LexString() {
    const size_t start = pos_;
    while (src_[pos_] != '\'' && src_[pos_] != '"') ++pos_;
    const char quote = src_[pos_];
    const bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote &&
                        src_[pos_ + 2] == quote;
    pos_ += triple ? 3 : 1;
    while (true) {
      if (pos_ >= src_.size()) {
        throw LexError("unterminated string literal", start);
      }
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (!triple && (c == '\n' || c == '\r')) {
        throw LexError("unterminated string literal", start);
      }
      if (c == quote) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote &&
            src_[pos_ + 2] == quote) {
          pos_ += 3;
          break;
        }
      }
      ++pos_;
    }
    if (pos_ > src_.size()) throw LexError("unterminated string literal", start);
    Emit(std::string(src_.substr(start, pos_ - start)), TokenClass::kString,
         start, pos_);
  }

  void LexNumber() {
    const size_t start = pos_;
    bool is_float = false;
    auto digits = [&](auto pred) {
      while (pos_ < src_.size() && (pred(src_[pos_]) || src_[pos_] == '_')) {
        ++pos_;
      }
    };
    if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
        std::string_view("xXoObB").find(src_[pos_ + 1]) !=
            std::string_view::npos) {
      pos_ += 2;
      digits([](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
    } else {
      digits(IsDigit);
      if (pos_ < src_.size() && src_[pos_] == '.' &&
          !(pos_ + 1 < src_.size() && src_[pos_ + 1] == '.')) {
        is_float = true;
        ++pos_;
        digits(IsDigit);
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        size_t p = pos_ + 1;
        if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
        if (p < src_.size() && IsDigit(src_[p])) {
          is_float = true;
          pos_ = p;
          digits(IsDigit);
        }
      }
      if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J')) {
        is_float = true;
        ++pos_;
      }
    }
    Emit(std::string(src_.substr(start, pos_ - start)),
         is_float ? TokenClass::kFloat : TokenClass::kInteger, start, pos_);
  }

  void LexName() {
    const size_t start = pos_;
    while (pos_ < src_.size() &&
           IsIdentChar(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    std::string text(src_.substr(start, pos_ - start));
    const TokenClass cls =
        IsPythonKeyword(text) ? TokenClass::kKeyword : TokenClass::kIdentifier;
    Emit(std::move(text), cls, start, pos_);
  }

  void LexOperator() {
    const std::string_view rest = src_.substr(pos_);
    for (std::string_view op : kOperators) {
      if (rest.substr(0, op.size()) != op) continue;
      if (op == "(" || op == "[" || op == "{") {
        ++depth_;
      } else if (op == ")" || op == "]" || op == "}") {
        if (depth_ == 0) throw LexError("unmatched '" + std::string(op) + "'", pos_);
        --depth_;
      }
      Emit(std::string(op),
           IsPunctuationText(op) ? TokenClass::kPunctuation
                                 : TokenClass::kOperator,
           pos_, pos_ + op.size());
      pos_ += op.size();
      return;
    }
    if (rest[0] == '.') {
      Emit(".", TokenClass::kPunctuation, pos_, pos_ + 1);
      ++pos_;
      return;
    }
    throw LexError("unexpected character '" + std::string(1, rest[0]) + "'",
                   pos_);
  }

  void Emit(std::string text, TokenClass cls, size_t start, size_t end) {
    tokens_.push_back(CodeToken{std::move(text), cls, Span{start, end}});
  }

  std::string_view src_;
  size_t pos_ = 0;
  int depth_ = 0;
  std::vector<size_t> indents_;
  std::vector<CodeToken> tokens_;
};

TokenClass ClassifyText(std::string_view text) {
  if (text == kNewlineText) return TokenClass::kNewline;
  if (text == kIndentText) return TokenClass::kIndent;
  if (text == kDedentText) return TokenClass::kDedent;
  try {
    const std::vector<CodeToken> tokens = Lexer(text).Run();
    if (tokens.size() == 1 && tokens[0].span == Span{0, text.size()}) {
      return tokens[0].cls;
    }
  } catch (const LexError&) {
  }
  return TokenClass::kIdentifier;
}

bool IsOpenBracket(std::string_view t) { return t == "(" || t == "[" || t == "{"; }

bool NeedsSpace(const CodeToken& prev, const CodeToken& next) {
  const std::string_view p = prev.text;
  const std::string_view n = next.text;
  if (next.cls == TokenClass::kComment) return true;
  if ((prev.cls == TokenClass::kInteger || prev.cls == TokenClass::kFloat) &&
      n == ".") {
    return true;
  }
  if (n == ")" || n == "]" || n == "}" || n == "," || n == ":" || n == ";" ||
      n == ".") {
    return false;
  }
  if (IsOpenBracket(p) || p == ".") return false;
  if ((n == "(" || n == "[") &&
      (prev.cls == TokenClass::kIdentifier || prev.cls == TokenClass::kString ||
       p == ")" || p == "]" || p == "}")) {
    return false;
  }
  return true;
}

}  // namespace

std::string_view TokenClassName(TokenClass cls) {
  switch (cls) {
    case TokenClass::kIdentifier: return "identifier";
    case TokenClass::kKeyword: return "keyword";
    case TokenClass::kInteger: return "integer";
    case TokenClass::kFloat: return "float";
    case TokenClass::kString: return "string";
    case TokenClass::kOperator: return "operator";
    case TokenClass::kPunctuation: return "punctuation";
    case TokenClass::kNewline: return "newline";
    case TokenClass::kIndent: return "indent";
    case TokenClass::kDedent: return "dedent";
    case TokenClass::kComment: return "comment";
  }
  return "unknown";
}

bool IsPythonKeyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool IsPythonBuiltin(std::string_view word) {
  return std::find(kBuiltins.begin(), kBuiltins.end(), word) !=
             kBuiltins.end() ||
         std::find(kMoreBuiltins.begin(), kMoreBuiltins.end(), word) !=
             kMoreBuiltins.end();
}

bool IsValidIdentifier(std::string_view word) {
  if (word.empty()) return false;
  const auto first = static_cast<unsigned char>(word[0]);
  if (!(std::isalpha(first) || first == '_')) return false;
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return !IsPythonKeyword(word);
}

TokenStream TokenStream::FromTexts(std::span<const std::string> texts) {
  std::vector<CodeToken> tokens;
  tokens.reserve(texts.size());
  std::string source;
  for (const std::string& text : texts) {
    if (!source.empty()) source.push_back(' ');
    const size_t start = source.size();
    source += text;
    tokens.push_back(CodeToken{text, ClassifyText(text), Span{start, source.size()}});
  }
  return TokenStream(std::move(tokens), std::move(source));
}

std::vector<std::string> TokenStream::Texts() const {
  std::vector<std::string> out;
  out.reserve(tokens_.size());
  for (const CodeToken& t : tokens_) out.push_back(t.text);
  return out;
}

std::vector<TokenClass> TokenStream::Classes() const {
  std::vector<TokenClass> out;
  out.reserve(tokens_.size());
  for (const CodeToken& t : tokens_) out.push_back(t.cls);
  return out;
}

TokenStream Tokenize(std::string_view source) {
  return TokenStream(Lexer(source).Run(), std::string(source));
}

std::string RenderTokens(std::span<const CodeToken> tokens) {
  std::string out;
  int level = 0;
  bool line_start = true;
  bool line_has_code = false;
  const CodeToken* prev = nullptr;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const CodeToken& tok = tokens[i];
    switch (tok.cls) {
      case TokenClass::kIndent:
        ++level;
        continue;
      case TokenClass::kDedent:
        level = std::max(0, level - 1);
        continue;
      case TokenClass::kNewline:
        out += '\n';
        line_start = true;
        line_has_code = false;
        prev = nullptr;
        continue;
      default:
        break;
    }
    if (line_start) {
      out.append(static_cast<size_t>(level) * 4, ' ');
      line_start = false;
    } else if (prev != nullptr && NeedsSpace(*prev, tok)) {
      out += tok.cls == TokenClass::kComment ? "  " : " ";
    }
    out += tok.text;
    prev = &tok;
    if (tok.cls == TokenClass::kComment) {
      const bool last = i + 1 == tokens.size();
      const bool next_is_newline =
          !last && tokens[i + 1].cls == TokenClass::kNewline;
      if (!last && !next_is_newline) {
        out += '\n';
        line_start = !line_has_code;
        if (line_has_code) {
          // Inside brackets: continue the logical line on a fresh physical
          // line.
          out.append(static_cast<size_t>(level + 1) * 4, ' ');
        }
        prev = nullptr;
      }
    } else {
      line_has_code = true;
    }
  }
  return out;
}

size_t TokenEditDistance(std::span<const std::string> a,
                         std::span<const std::string> b) {
  std::unordered_map<std::string_view, uint32_t> ids;
  auto intern = [&](std::span<const std::string> seq) {
    std::vector<uint32_t> out;
    out.reserve(seq.size());
    for (const std::string& s : seq) {
      out.push_back(ids.try_emplace(s, static_cast<uint32_t>(ids.size()))
                        .first->second);
    }
    return out;
  };
  const std::vector<uint32_t> x = intern(a);
  const std::vector<uint32_t> y = intern(b);
  if (x.empty()) return y.size();
  if (y.empty()) return x.size();
  std::vector<size_t> row(y.size() + 1);
  for (size_t j = 0; j <= y.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= x.size(); ++i) {
    size_t diagonal = row[0];
    row[0] = i;
    for (size_t j = 1; j <= y.size(); ++j) {
      const size_t saved = row[j];
      const size_t substitute = diagonal + (x[i - 1] == y[j - 1] ? 0 : 1);
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, substitute});
      diagonal = saved;
    }
  }
  return row[y.size()];
}

double TokenChangeProportion(const TokenStream& before,
                             const TokenStream& after) {
  const std::vector<std::string> a = before.Texts();
  const std::vector<std::string> b = after.Texts();
  const size_t denom = std::max<size_t>({a.size(), b.size(), 1});
  return static_cast<double>(TokenEditDistance(a, b)) /
         static_cast<double>(denom);
}

}  // namespace wmlab
