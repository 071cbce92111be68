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

#ifndef WMLAB_SYNTAX_TREE_H_
#define WMLAB_SYNTAX_TREE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wmlab/lexing.h"

namespace wmlab {

enum class NodeKind {
  kModule,
  kFunctionDef,
  kClassDef,
  kIf,
  kFor,
  kWhile,
  kTry,
  kWith,
  kSimpleStatement,  // one logical line of ';'-separated small statements
  kSuite,
};

std::string_view NodeKindName(NodeKind kind);

// A node covers the half-open leaf range [first_leaf, end_leaf). Leaves are
// the tokens of the lexed source; leaf i owns the bytes from the end of leaf
// i-1 to the end of its own span, so every source byte has exactly one
// owner (bytes after the last leaf belong to the module).
struct Node {
  NodeKind kind = NodeKind::kModule;
  size_t first_leaf = 0;
  size_t end_leaf = 0;
  // Suites only: true for `if x: y = 1` style bodies on the header line.
  bool inline_suite = false;
  std::vector<Node> children;
};

using NodePath = std::vector<size_t>;

std::string FormatPath(const NodePath& path);

// How an identifier leaf is used.
enum class NameRole {
  kNone,        // not an identifier
  kLoad,
  kStore,       // assignment, for/with/except target, del
  kAugStore,    // target of an augmented assignment (read and written)
  kParam,
  kDefName,     // name bound by def/class
  kAttribute,   // x.<name>
  kKeywordArg,  // f(<name>=...)
  kGlobalDecl,  // listed in a global/nonlocal statement
  kImport,      // bound by an import statement
};

enum class ScopeKind { kModule, kFunction, kClass, kLambda, kComprehension };

struct Scope {
  ScopeKind kind = ScopeKind::kModule;
  int parent = -1;
  // Leaf range of the construct that opened the scope.
  size_t first_leaf = 0;
  size_t end_leaf = 0;
};

// Lossless concrete syntax tree of a Python-subset module.
class SyntaxTree {
 public:
  const TokenStream& tokens() const { return tokens_; }
  const std::string& source() const { return tokens_.source(); }
  const Node& root() const { return root_; }

  // Byte offset where leaf i's owned bytes begin (end of the previous leaf).
  size_t LeafOwnedStart(size_t leaf) const;
  // Reassembles the source from leaf-owned bytes and the module trailer.
  std::string Unparse() const;

  // Returns nullptr when the path does not resolve.
  const Node* Find(const NodePath& path) const;

  NameRole role(size_t leaf) const { return roles_[leaf]; }
  int scope_of(size_t leaf) const { return leaf_scope_[leaf]; }
  const std::vector<Scope>& scopes() const { return scopes_; }
  // True when `inner` equals `outer` or is nested inside it.
  bool ScopeWithin(int inner, int outer) const;

  // 1-based line/column of a byte offset.
  std::pair<size_t, size_t> LineColumn(size_t offset) const;
  // Offset of the start of the physical line containing `offset`.
  size_t LineStart(size_t offset) const;

 private:
  friend class Parser;
  friend SyntaxTree ParseProgram(std::string_view source);

  TokenStream tokens_;
  Node root_;
  std::vector<NameRole> roles_;
  std::vector<int> leaf_scope_;
  std::vector<Scope> scopes_;
};

// Parses a Python-subset module (functions, classes, assignments,
// if/for/while/try/with, calls, returns and the common expression forms).
// Throws ParseError with line and column; lexical errors are reported the
// same way.
SyntaxTree ParseProgram(std::string_view source);

// Inverse of ParseProgram.
inline std::string ConvertToCode(const SyntaxTree& tree) {
  return tree.Unparse();
}

}  // namespace wmlab

#endif  // WMLAB_SYNTAX_TREE_H_
