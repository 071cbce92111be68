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

#include <algorithm>
#include <array>

#include "wmlab/error.h"

namespace wmlab {

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kModule: return "Module";
    case NodeKind::kFunctionDef: return "FunctionDef";
    case NodeKind::kClassDef: return "ClassDef";
    case NodeKind::kIf: return "If";
    case NodeKind::kFor: return "For";
    case NodeKind::kWhile: return "While";
    case NodeKind::kTry: return "Try";
    case NodeKind::kWith: return "With";
    case NodeKind::kSimpleStatement: return "SimpleStatement";
    case NodeKind::kSuite: return "Suite";
  }
  return "?";
}

std::string FormatPath(const NodePath& path) {
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += '.';
    out += std::to_string(path[i]);
  }
  return out.empty() ? "root" : out;
}

size_t SyntaxTree::LeafOwnedStart(size_t leaf) const {
  return leaf == 0 ? 0 : tokens_[leaf - 1].span.end;
}

std::string SyntaxTree::Unparse() const {
  const std::string& src = tokens_.source();
  std::string out;
  out.reserve(src.size());
  size_t cursor = 0;
  for (const CodeToken& tok : tokens_.tokens()) {
    // Leaf-owned bytes: the gap before the token plus its span.
    out.append(src, cursor, tok.span.end - cursor);
    cursor = tok.span.end;
  }
  out.append(src, cursor, std::string::npos);  // module trailer
  return out;
}

const Node* SyntaxTree::Find(const NodePath& path) const {
  const Node* node = &root_;
  for (size_t index : path) {
    if (index >= node->children.size()) return nullptr;
    node = &node->children[index];
  }
  return node;
}

bool SyntaxTree::ScopeWithin(int inner, int outer) const {
  for (int s = inner; s >= 0; s = scopes_[static_cast<size_t>(s)].parent) {
    if (s == outer) return true;
  }
  return false;
}

std::pair<size_t, size_t> SyntaxTree::LineColumn(size_t offset) const {
  const std::string& src = tokens_.source();
  offset = std::min(offset, src.size());
  size_t line = 1;
  size_t line_start = 0;
  for (size_t i = 0; i < offset; ++i) {
    if (src[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  }
  return {line, offset - line_start + 1};
}

size_t SyntaxTree::LineStart(size_t offset) const {
  const std::string& src = tokens_.source();
  const size_t nl = offset == 0 ? std::string::npos : src.rfind('\n', offset - 1);
  return nl == std::string::npos ? 0 : nl + 1;
}

namespace {

// Lightweight expression shape, kept only to mark assignment targets.
struct Expr {
  enum class Kind { kName, kTuple, kList, kParen, kStarred, kOther };
  Kind kind = Kind::kOther;
  size_t leaf = 0;
  std::vector<Expr> elts;
};

Expr Other() { return Expr{}; }

constexpr std::array<std::string_view, 12> kAugAssign = {
    "+=", "-=", "*=", "/=", "//=", "%=", "**=", ">>=", "<<=", "&=", "^=", "|="};

}  // namespace

class Parser {
 public:
  explicit Parser(SyntaxTree& tree)
      : tree_(tree), toks_(tree.tokens_.tokens()) {
    tree_.roles_.assign(toks_.size(), NameRole::kNone);
    tree_.leaf_scope_.assign(toks_.size(), 0);
    tree_.scopes_.push_back(Scope{ScopeKind::kModule, -1, 0, toks_.size()});
  }

  void ParseModule() {
    Node root{NodeKind::kModule, 0, toks_.size(), false, {}};
    while (Peek() != nullptr) {
      if (CheckClass(TokenClass::kIndent)) Fail("unexpected indent");
      if (CheckClass(TokenClass::kNewline)) {
        Take();
        continue;
      }
      root.children.push_back(ParseStatement());
    }
    // Unscored leaves (comments) inherit the scope of the preceding leaf.
    for (size_t i = 1; i < toks_.size(); ++i) {
      if (toks_[i].cls == TokenClass::kComment) {
        tree_.leaf_scope_[i] = tree_.leaf_scope_[i - 1];
      }
    }
    tree_.root_ = std::move(root);
  }

 private:
  // ---- cursor ----------------------------------------------------------

  size_t Skip() {
    while (pos_ < toks_.size() && toks_[pos_].cls == TokenClass::kComment) {
      ++pos_;
    }
    return pos_;
  }

  const CodeToken* Peek() {
    Skip();
    return pos_ < toks_.size() ? &toks_[pos_] : nullptr;
  }

  // k-th significant token after the current one (k = 0 is Peek()).
  const CodeToken* PeekAhead(size_t k) {
    size_t p = Skip();
    while (p < toks_.size()) {
      if (toks_[p].cls != TokenClass::kComment) {
        if (k == 0) return &toks_[p];
        --k;
      }
      ++p;
    }
    return nullptr;
  }

  bool Check(std::string_view text) {
    const CodeToken* t = Peek();
    return t != nullptr && t->cls != TokenClass::kString &&
           t->cls != TokenClass::kNewline && t->text == text;
  }

  bool CheckClass(TokenClass cls) {
    const CodeToken* t = Peek();
    return t != nullptr && t->cls == cls;
  }

  size_t Take() {
    const size_t index = Skip();
    if (index >= toks_.size()) Fail("unexpected end of input");
    tree_.leaf_scope_[index] = scope_;
    pos_ = index + 1;
    return index;
  }

  size_t Expect(std::string_view text) {
    if (!Check(text)) Fail("expected '" + std::string(text) + "'");
    return Take();
  }

  size_t ExpectName(NameRole role) {
    if (!CheckClass(TokenClass::kIdentifier)) Fail("expected a name");
    const size_t index = Take();
    tree_.roles_[index] = role;
    return index;
  }

  [[noreturn]] void Fail(const std::string& message) {
    const CodeToken* t = Peek();
    const size_t offset =
        t != nullptr ? t->span.start : tree_.tokens_.source().size();
    const auto [line, column] = tree_.LineColumn(offset);
    std::string near = t == nullptr                      ? "end of input"
                       : t->cls == TokenClass::kNewline  ? "end of line"
                       : t->IsLayout()                   ? std::string(TokenClassName(t->cls))
                                                         : "'" + t->text + "'";
    throw ParseError(message + " near " + near, line, column);
  }

  bool AtLineEnd() {
    const CodeToken* t = Peek();
    return t == nullptr || t->cls == TokenClass::kNewline || Check(";");
  }

  bool StartsExpression() {
    const CodeToken* t = Peek();
    if (t == nullptr) return false;
    switch (t->cls) {
      case TokenClass::kIdentifier:
      case TokenClass::kInteger:
      case TokenClass::kFloat:
      case TokenClass::kString:
        return true;
      case TokenClass::kKeyword:
        return t->text == "not" || t->text == "lambda" || t->text == "None" ||
               t->text == "True" || t->text == "False" || t->text == "await" ||
               t->text == "yield";
      case TokenClass::kOperator:
      case TokenClass::kPunctuation:
        return t->text == "(" || t->text == "[" || t->text == "{" ||
               t->text == "-" || t->text == "+" || t->text == "~" ||
               t->text == "..." || t->text == "*";
      default:
        return false;
    }
  }

  int OpenScope(ScopeKind kind, size_t first_leaf) {
    tree_.scopes_.push_back(Scope{kind, scope_, first_leaf, first_leaf});
    return static_cast<int>(tree_.scopes_.size() - 1);
  }

  void CloseScope(int scope) {
    tree_.scopes_[static_cast<size_t>(scope)].end_leaf = pos_;
  }

  void MarkTarget(const Expr& e, NameRole role) {
    switch (e.kind) {
      case Expr::Kind::kName:
        tree_.roles_[e.leaf] = role;
        break;
      case Expr::Kind::kTuple:
      case Expr::Kind::kList:
      case Expr::Kind::kParen:
      case Expr::Kind::kStarred:
        for (const Expr& child : e.elts) MarkTarget(child, role);
        break;
      case Expr::Kind::kOther:
        break;
    }
  }

  // ---- statements ------------------------------------------------------

  Node ParseStatement() {
    const CodeToken* t = Peek();
    if (t->cls == TokenClass::kKeyword) {
      const std::string& k = t->text;
      if (k == "if") return ParseIf();
      if (k == "while") return ParseWhile();
      if (k == "for") return ParseFor(Skip());
      if (k == "try") return ParseTry();
      if (k == "with") return ParseWith(Skip());
      if (k == "def") return ParseFuncDef(Skip());
      if (k == "class") return ParseClassDef(Skip());
      if (k == "async") {
        const size_t first = Skip();
        Take();
        if (Check("def")) return ParseFuncDef(first);
        if (Check("for")) return ParseFor(first);
        if (Check("with")) return ParseWith(first);
        Fail("expected def, for or with after async");
      }
    }
    if (Check("@")) {
      const size_t first = Skip();
      while (Check("@")) {
        Take();
        ParseNamedExprTest();
        if (!CheckClass(TokenClass::kNewline)) Fail("expected newline after decorator");
        Take();
      }
      if (Check("async")) Take();
      if (Check("def")) return ParseFuncDef(first);
      if (Check("class")) return ParseClassDef(first);
      Fail("expected def or class after decorator");
    }
    if (t->IsLayout()) Fail("unexpected " + std::string(TokenClassName(t->cls)));
    return ParseSimpleStatement();
  }

  Node ParseSimpleStatement() {
    const size_t first = Skip();
    ParseSmallStatement();
    while (Check(";")) {
      Take();
      if (AtLineEnd()) break;
      ParseSmallStatement();
    }
    if (CheckClass(TokenClass::kNewline)) {
      Take();
    } else if (Peek() != nullptr) {
      Fail("invalid syntax");
    }
    return Node{NodeKind::kSimpleStatement, first, pos_, false, {}};
  }

  void ParseSmallStatement() {
    const CodeToken* t = Peek();
    if (t == nullptr) Fail("expected a statement");
    if (t->cls == TokenClass::kKeyword) {
      const std::string& k = t->text;
      if (k == "pass" || k == "break" || k == "continue") {
        Take();
        return;
      }
      if (k == "return") {
        Take();
        if (!AtLineEnd()) ParseTestListStarExpr();
        return;
      }
      if (k == "raise") {
        Take();
        if (!AtLineEnd()) {
          ParseTest();
          if (Check("from")) {
            Take();
            ParseTest();
          }
        }
        return;
      }
      if (k == "global" || k == "nonlocal") {
        Take();
        ExpectName(NameRole::kGlobalDecl);
        while (Check(",")) {
          Take();
          ExpectName(NameRole::kGlobalDecl);
        }
        return;
      }
      if (k == "del") {
        Take();
        MarkTarget(ParseExprList(), NameRole::kStore);
        return;
      }
      if (k == "assert") {
        Take();
        ParseTest();
        if (Check(",")) {
          Take();
          ParseTest();
        }
        return;
      }
      if (k == "import") {
        Take();
        ParseDottedAsName();
        while (Check(",")) {
          Take();
          ParseDottedAsName();
        }
        return;
      }
      if (k == "from") {
        ParseFromImport();
        return;
      }
    }
    ParseExpressionStatement();
  }

  void ParseDottedAsName() {
    ExpectName(NameRole::kImport);
    while (Check(".")) {
      Take();
      ExpectName(NameRole::kImport);
    }
    if (Check("as")) {
      Take();
      ExpectName(NameRole::kImport);
    }
  }

  void ParseFromImport() {
    Expect("from");
    bool any = false;
    while (Check(".") || Check("...")) {
      Take();
      any = true;
    }
    if (CheckClass(TokenClass::kIdentifier)) {
      ExpectName(NameRole::kImport);
      while (Check(".")) {
        Take();
        ExpectName(NameRole::kImport);
      }
      any = true;
    }
    if (!any) Fail("expected module name");
    Expect("import");
    if (Check("*")) {
      Take();
      return;
    }
    const bool paren = Check("(");
    if (paren) Take();
    auto as_name = [&] {
      ExpectName(NameRole::kImport);
      if (Check("as")) {
        Take();
        ExpectName(NameRole::kImport);
      }
    };
    as_name();
    while (Check(",")) {
      Take();
      if (paren && Check(")")) break;
      as_name();
    }
    if (paren) Expect(")");
  }

  bool CheckAugAssign() {
    for (std::string_view op : kAugAssign) {
      if (Check(op)) return true;
    }
    return false;
  }

  void ParseExpressionStatement() {
    if (!StartsExpression()) Fail("invalid syntax");
    if (Check("yield")) {
      ParseYield();
      return;
    }
    Expr first = ParseTestListStarExpr();
    if (Check("=")) {
      std::vector<Expr> chain{std::move(first)};
      while (Check("=")) {
        Take();
        chain.push_back(Check("yield") ? ParseYield() : ParseTestListStarExpr());
      }
      for (size_t i = 0; i + 1 < chain.size(); ++i) {
        MarkTarget(chain[i], NameRole::kStore);
      }
    } else if (CheckAugAssign()) {
      if (first.kind == Expr::Kind::kName) {
        tree_.roles_[first.leaf] = NameRole::kAugStore;
      }
      Take();
      if (Check("yield")) {
        ParseYield();
      } else {
        ParseTestListStarExpr();
      }
    } else if (Check(":")) {
      Take();
      ParseTest();
      MarkTarget(first, NameRole::kStore);
      if (Check("=")) {
        Take();
        if (Check("yield")) {
          ParseYield();
        } else {
          ParseTestListStarExpr();
        }
      }
    }
  }

  Node ParseSuite() {
    if (CheckClass(TokenClass::kNewline)) {
      const size_t first = Take();
      if (!CheckClass(TokenClass::kIndent)) Fail("expected an indented block");
      Take();
      Node suite{NodeKind::kSuite, first, first, false, {}};
      while (!CheckClass(TokenClass::kDedent)) {
        if (Peek() == nullptr) Fail("unexpected end of input in block");
        if (CheckClass(TokenClass::kIndent)) Fail("unexpected indent");
        suite.children.push_back(ParseStatement());
      }
      Take();
      suite.end_leaf = pos_;
      return suite;
    }
    if (Peek() == nullptr) Fail("expected a block");
    Node stmt = ParseSimpleStatement();
    Node suite{NodeKind::kSuite, stmt.first_leaf, stmt.end_leaf, true, {}};
    suite.children.push_back(std::move(stmt));
    return suite;
  }

  Node ParseIf() {
    Node node{NodeKind::kIf, Skip(), 0, false, {}};
    Expect("if");
    ParseNamedExprTest();
    Expect(":");
    node.children.push_back(ParseSuite());
    while (Check("elif")) {
      Take();
      ParseNamedExprTest();
      Expect(":");
      node.children.push_back(ParseSuite());
    }
    if (Check("else")) {
      Take();
      Expect(":");
      node.children.push_back(ParseSuite());
    }
    node.end_leaf = pos_;
    return node;
  }

  Node ParseWhile() {
    Node node{NodeKind::kWhile, Skip(), 0, false, {}};
    Expect("while");
    ParseNamedExprTest();
    Expect(":");
    node.children.push_back(ParseSuite());
    if (Check("else")) {
      Take();
      Expect(":");
      node.children.push_back(ParseSuite());
    }
    node.end_leaf = pos_;
    return node;
  }

  Node ParseFor(size_t first) {
    Node node{NodeKind::kFor, first, 0, false, {}};
    Expect("for");
    MarkTarget(ParseExprList(), NameRole::kStore);
    Expect("in");
    ParseTestListStarExpr();
    Expect(":");
    node.children.push_back(ParseSuite());
    if (Check("else")) {
      Take();
      Expect(":");
      node.children.push_back(ParseSuite());
    }
    node.end_leaf = pos_;
    return node;
  }

  Node ParseTry() {
    Node node{NodeKind::kTry, Skip(), 0, false, {}};
    Expect("try");
    Expect(":");
    node.children.push_back(ParseSuite());
    bool handlers = false;
    while (Check("except")) {
      Take();
      handlers = true;
      if (!Check(":")) {
        ParseTest();
        if (Check("as")) {
          Take();
          ExpectName(NameRole::kStore);
        }
      }
      Expect(":");
      node.children.push_back(ParseSuite());
    }
    if (handlers && Check("else")) {
      Take();
      Expect(":");
      node.children.push_back(ParseSuite());
    }
    if (Check("finally")) {
      Take();
      Expect(":");
      node.children.push_back(ParseSuite());
      handlers = true;
    }
    if (!handlers) Fail("expected 'except' or 'finally' block");
    node.end_leaf = pos_;
    return node;
  }

  Node ParseWith(size_t first) {
    Node node{NodeKind::kWith, first, 0, false, {}};
    Expect("with");
    auto item = [&] {
      ParseTest();
      if (Check("as")) {
        Take();
        MarkTarget(ParseBinary(0), NameRole::kStore);
      }
    };
    item();
    while (Check(",")) {
      Take();
      item();
    }
    Expect(":");
    node.children.push_back(ParseSuite());
    node.end_leaf = pos_;
    return node;
  }

  Node ParseFuncDef(size_t first) {
    Node node{NodeKind::kFunctionDef, first, 0, false, {}};
    Expect("def");
    ExpectName(NameRole::kDefName);
    const int outer = scope_;
    const int fn = OpenScope(ScopeKind::kFunction, first);
    Expect("(");
    scope_ = fn;
    ParseParameters(")", /*annotations=*/true, outer);
    Expect(")");
    if (Check("->")) {
      Take();
      scope_ = outer;
      ParseTest();
      scope_ = fn;
    }
    Expect(":");
    node.children.push_back(ParseSuite());
    scope_ = outer;
    CloseScope(fn);
    node.end_leaf = pos_;
    return node;
  }

  Node ParseClassDef(size_t first) {
    Node node{NodeKind::kClassDef, first, 0, false, {}};
    Expect("class");
    ExpectName(NameRole::kDefName);
    if (Check("(")) {
      Take();
      ParseArguments();
      Expect(")");
    }
    Expect(":");
    const int outer = scope_;
    const int cls = OpenScope(ScopeKind::kClass, first);
    scope_ = cls;
    node.children.push_back(ParseSuite());
    scope_ = outer;
    CloseScope(cls);
    node.end_leaf = pos_;
    return node;
  }

  // Parameters are bound in the current scope; defaults and annotations are
  // evaluated in `outer`.
  void ParseParameters(std::string_view closing, bool annotations, int outer) {
    const int inner = scope_;
    auto outer_expr = [&] {
      scope_ = outer;
      ParseTest();
      scope_ = inner;
    };
    while (!Check(closing)) {
      if (Check("/")) {
        Take();
      } else if (Check("*") || Check("**")) {
        Take();
        if (CheckClass(TokenClass::kIdentifier)) {
          ExpectName(NameRole::kParam);
          if (annotations && Check(":")) {
            Take();
            outer_expr();
          }
        }
      } else {
        ExpectName(NameRole::kParam);
        if (annotations && Check(":")) {
          Take();
          outer_expr();
        }
        if (Check("=")) {
          Take();
          outer_expr();
        }
      }
      if (!Check(",")) break;
      Take();
    }
  }

  // ---- expressions -----------------------------------------------------

  Expr ParseYield() {
    Expect("yield");
    if (Check("from")) {
      Take();
      ParseTest();
    } else if (StartsExpression()) {
      ParseTestListStarExpr();
    }
    return Other();
  }

  Expr ParseStarOrTest() {
    if (Check("*")) {
      Take();
      Expr inner = ParseBinary(0);
      Expr star{Expr::Kind::kStarred, 0, {}};
      star.elts.push_back(std::move(inner));
      return star;
    }
    return ParseNamedExprTest();
  }

  Expr ParseTestListStarExpr() {
    Expr first = ParseStarOrTest();
    if (!Check(",")) return first;
    Expr tuple{Expr::Kind::kTuple, 0, {}};
    tuple.elts.push_back(std::move(first));
    while (Check(",")) {
      Take();
      if (!StartsExpression() || Check("yield")) break;
      tuple.elts.push_back(ParseStarOrTest());
    }
    return tuple;
  }

  Expr ParseExprList() {
    auto element = [&] {
      if (Check("*")) {
        Take();
        Expr star{Expr::Kind::kStarred, 0, {}};
        star.elts.push_back(ParseBinary(0));
        return star;
      }
      return ParseBinary(0);
    };
    Expr first = element();
    if (!Check(",")) return first;
    Expr tuple{Expr::Kind::kTuple, 0, {}};
    tuple.elts.push_back(std::move(first));
    while (Check(",")) {
      Take();
      if (!StartsExpression() || Check("in")) break;
      tuple.elts.push_back(element());
    }
    return tuple;
  }

  Expr ParseNamedExprTest() {
    Expr e = ParseTest();
    if (Check(":=")) {
      Take();
      MarkTarget(e, NameRole::kStore);
      ParseTest();
      return Other();
    }
    return e;
  }

  Expr ParseTest() {
    if (Check("lambda")) return ParseLambda();
    Expr e = ParseOrTest();
    if (Check("if")) {
      Take();
      ParseOrTest();
      Expect("else");
      ParseTest();
      return Other();
    }
    return e;
  }

  Expr ParseLambda() {
    const size_t first = Expect("lambda");
    const int outer = scope_;
    const int lam = OpenScope(ScopeKind::kLambda, first);
    scope_ = lam;
    ParseParameters(":", /*annotations=*/false, outer);
    Expect(":");
    ParseTest();
    scope_ = outer;
    CloseScope(lam);
    return Other();
  }

  Expr ParseOrTest() {
    Expr e = ParseAndTest();
    while (Check("or")) {
      Take();
      ParseAndTest();
      e = Other();
    }
    return e;
  }

  Expr ParseAndTest() {
    Expr e = ParseNotTest();
    while (Check("and")) {
      Take();
      ParseNotTest();
      e = Other();
    }
    return e;
  }

  Expr ParseNotTest() {
    if (Check("not")) {
      Take();
      ParseNotTest();
      return Other();
    }
    return ParseComparison();
  }

  bool CheckCompOp() {
    static constexpr std::array<std::string_view, 8> kOps = {
        "<", ">", "==", ">=", "<=", "!=", "in", "is"};
    for (std::string_view op : kOps) {
      if (Check(op)) return true;
    }
    if (Check("not")) {
      const CodeToken* next = PeekAhead(1);
      return next != nullptr && next->text == "in";
    }
    return false;
  }

  Expr ParseComparison() {
    Expr e = ParseBinary(0);
    while (CheckCompOp()) {
      if (Check("not")) {
        Take();
        Expect("in");
      } else if (Check("is")) {
        Take();
        if (Check("not")) Take();
      } else {
        Take();
      }
      ParseBinary(0);
      e = Other();
    }
    return e;
  }

  // Binary operator levels from '|' (0) down to multiplicative (5).
  Expr ParseBinary(int level) {
    static const std::array<std::vector<std::string_view>, 6> kLevels = {{
        {"|"}, {"^"}, {"&"}, {"<<", ">>"}, {"+", "-"},
        {"*", "/", "//", "%", "@"}}};
    if (level == static_cast<int>(kLevels.size())) return ParseFactor();
    Expr e = ParseBinary(level + 1);
    for (;;) {
      bool matched = false;
      for (std::string_view op : kLevels[static_cast<size_t>(level)]) {
        if (Check(op)) {
          matched = true;
          break;
        }
      }
      if (!matched) return e;
      Take();
      ParseBinary(level + 1);
      e = Other();
    }
  }

  Expr ParseFactor() {
    if (Check("+") || Check("-") || Check("~")) {
      Take();
      ParseFactor();
      return Other();
    }
    return ParsePower();
  }

  Expr ParsePower() {
    bool awaited = false;
    if (Check("await")) {
      Take();
      awaited = true;
    }
    Expr e = ParsePrimary();
    if (Check("**")) {
      Take();
      ParseFactor();
      return Other();
    }
    return awaited ? Other() : e;
  }

  Expr ParsePrimary() {
    Expr e = ParseAtom();
    for (;;) {
      if (Check("(")) {
        Take();
        ParseArguments();
        Expect(")");
      } else if (Check("[")) {
        Take();
        ParseSubscripts();
        Expect("]");
      } else if (Check(".")) {
        Take();
        ExpectName(NameRole::kAttribute);
      } else {
        return e;
      }
      e = Other();
    }
  }

  void ParseArguments() {
    while (!Check(")")) {
      if (Check("*") || Check("**")) {
        Take();
        ParseTest();
      } else {
        const CodeToken* t = Peek();
        const CodeToken* next = PeekAhead(1);
        if (t != nullptr && t->cls == TokenClass::kIdentifier &&
            next != nullptr && next->text == "=" &&
            next->cls == TokenClass::kOperator) {
          ExpectName(NameRole::kKeywordArg);
          Take();
          ParseTest();
        } else {
          const size_t start = Skip();
          ParseNamedExprTest();
          if (Check("for") || Check("async")) ParseComprehension(start);
        }
      }
      if (!Check(",")) break;
      Take();
    }
  }

  void ParseSubscripts() {
    auto subscript = [&] {
      if (!Check(":")) ParseStarOrTest();
      if (Check(":")) {
        Take();
        if (StartsExpression() && !Check("*")) ParseTest();
        if (Check(":")) {
          Take();
          if (StartsExpression() && !Check("*")) ParseTest();
        }
      }
    };
    subscript();
    while (Check(",")) {
      Take();
      if (Check("]")) break;
      subscript();
    }
  }

  // Parses `for ... in ... [if ...]` clauses; the element that started at
  // `element_start` moves into the comprehension's scope.
  void ParseComprehension(size_t element_start) {
    const int outer = scope_;
    const int comp = OpenScope(ScopeKind::kComprehension, element_start);
    for (size_t i = element_start; i < pos_; ++i) {
      if (tree_.leaf_scope_[i] == outer) tree_.leaf_scope_[i] = comp;
    }
    scope_ = comp;
    while (Check("for") || Check("async")) {
      if (Check("async")) Take();
      Expect("for");
      MarkTarget(ParseExprList(), NameRole::kStore);
      Expect("in");
      ParseOrTest();
      while (Check("if")) {
        Take();
        ParseOrTest();
      }
    }
    scope_ = outer;
    CloseScope(comp);
  }

  Expr ParseAtom() {
    const CodeToken* t = Peek();
    if (t == nullptr) Fail("expected an expression");
    switch (t->cls) {
      case TokenClass::kIdentifier: {
        const size_t index = Take();
        tree_.roles_[index] = NameRole::kLoad;
        return Expr{Expr::Kind::kName, index, {}};
      }
      case TokenClass::kInteger:
      case TokenClass::kFloat:
        Take();
        return Other();
      case TokenClass::kString:
        while (CheckClass(TokenClass::kString)) Take();
        return Other();
      case TokenClass::kKeyword:
        if (t->text == "None" || t->text == "True" || t->text == "False") {
          Take();
          return Other();
        }
        break;
      default:
        break;
    }
    if (Check("...")) {
      Take();
      return Other();
    }
    if (Check("(")) return ParseParenthesized();
    if (Check("[")) return ParseListDisplay();
    if (Check("{")) return ParseBraceDisplay();
    Fail("expected an expression");
  }

  Expr ParseParenthesized() {
    Expect("(");
    if (Check(")")) {
      Take();
      return Other();
    }
    if (Check("yield")) {
      ParseYield();
      Expect(")");
      return Other();
    }
    const size_t start = Skip();
    Expr first = ParseStarOrTest();
    if (Check("for") || Check("async")) {
      ParseComprehension(start);
      Expect(")");
      return Other();
    }
    if (!Check(",")) {
      Expect(")");
      Expr paren{Expr::Kind::kParen, 0, {}};
      paren.elts.push_back(std::move(first));
      return paren;
    }
    Expr tuple{Expr::Kind::kTuple, 0, {}};
    tuple.elts.push_back(std::move(first));
    while (Check(",")) {
      Take();
      if (Check(")")) break;
      tuple.elts.push_back(ParseStarOrTest());
    }
    Expect(")");
    return tuple;
  }

  Expr ParseListDisplay() {
    Expect("[");
    Expr list{Expr::Kind::kList, 0, {}};
    if (Check("]")) {
      Take();
      return Other();
    }
    const size_t start = Skip();
    list.elts.push_back(ParseStarOrTest());
    if (Check("for") || Check("async")) {
      ParseComprehension(start);
      Expect("]");
      return Other();
    }
    while (Check(",")) {
      Take();
      if (Check("]")) break;
      list.elts.push_back(ParseStarOrTest());
    }
    Expect("]");
    return list;
  }

  Expr ParseBraceDisplay() {
    Expect("{");
    if (Check("}")) {
      Take();
      return Other();
    }
    const size_t start = Skip();
    bool dict = false;
    if (Check("**")) {
      Take();
      ParseBinary(0);
      dict = true;
    } else {
      ParseStarOrTest();
      if (Check(":")) {
        Take();
        ParseTest();
        dict = true;
      }
    }
    if (Check("for") || Check("async")) {
      ParseComprehension(start);
      Expect("}");
      return Other();
    }
    while (Check(",")) {
      Take();
      if (Check("}")) break;
      if (dict) {
        if (Check("**")) {
          Take();
          ParseBinary(0);
        } else {
          ParseTest();
          Expect(":");
          ParseTest();
        }
      } else {
        ParseStarOrTest();
      }
    }
    Expect("}");
    return Other();
  }

  SyntaxTree& tree_;
  const std::vector<CodeToken>& toks_;
  size_t pos_ = 0;
  int scope_ = 0;
};

SyntaxTree ParseProgram(std::string_view source) {
  SyntaxTree tree;
  try {
    tree.tokens_ = Tokenize(source);
  } catch (const LexError& e) {
    tree.tokens_ = TokenStream({}, std::string(source));
    const auto [line, column] = tree.LineColumn(e.offset());
    throw ParseError(e.what(), line, column);
  }
  Parser parser(tree);
  parser.ParseModule();
  return tree;
}

}  // namespace wmlab
