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

#include "wmlab/transforms.h"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wmlab/error.h"

namespace wmlab {

std::string_view TransformKindName(TransformKind kind) {
  switch (kind) {
    case TransformKind::kAddDeadCode: return "AddDeadCode";
    case TransformKind::kRename: return "Rename";
    case TransformKind::kInsertPrint: return "InsertPrint";
    case TransformKind::kWrapTryCatch: return "WrapTryCatch";
    case TransformKind::kMixed: return "Mixed";
  }
  return "?";
}

TransformKind ParseTransformKind(std::string_view name) {
  for (TransformKind k : {TransformKind::kAddDeadCode, TransformKind::kRename,
                          TransformKind::kInsertPrint,
                          TransformKind::kWrapTryCatch, TransformKind::kMixed}) {
    if (TransformKindName(k) == name) return k;
  }
  throw ConfigError("unknown transform '" + std::string(name) +
                    "' (expected AddDeadCode, Rename, InsertPrint, "
                    "WrapTryCatch or Mixed)");
}

std::string_view HandlerModeName(HandlerMode mode) {
  return mode == HandlerMode::kRaise ? "raise" : "pass";
}

HandlerMode ParseHandlerMode(std::string_view name) {
  if (name == "raise") return HandlerMode::kRaise;
  if (name == "pass") return HandlerMode::kPass;
  throw ConfigError("unknown handler mode '" + std::string(name) + "'");
}

std::string DescribeSite(const Site& site) {
  std::string out = FormatPath(site.path);
  if (site.kind == TransformKind::kRename) return out + ":" + site.name;
  if (site.kind != TransformKind::kWrapTryCatch) {
    out += ":" + std::to_string(site.index);
  }
  return out;
}

namespace {

const TokenStream& Toks(const SyntaxTree& tree) { return tree.tokens(); }

bool IsGlobalStatement(const SyntaxTree& tree, const Node& stmt) {
  const CodeToken& first = Toks(tree)[stmt.first_leaf];
  return first.cls == TokenClass::kKeyword &&
         (first.text == "global" || first.text == "nonlocal");
}

bool BindsName(const SyntaxTree& tree, std::string_view name) {
  const TokenStream& toks = Toks(tree);
  for (size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].text != name) continue;
    switch (tree.role(i)) {
      case NameRole::kStore:
      case NameRole::kAugStore:
      case NameRole::kParam:
      case NameRole::kDefName:
      case NameRole::kImport:
        return true;
      default:
        break;
    }
  }
  return false;
}

// Walks statements, emitting insertion boundaries and wrappable statements
// for suites that belong to a function body.
class StatementWalker {
 public:
  StatementWalker(const SyntaxTree& tree, TransformKind kind)
      : tree_(tree), kind_(kind) {}

  std::vector<Site> Run() {
    const Node& root = tree_.root();
    NodePath path;
    for (size_t i = 0; i < root.children.size(); ++i) {
      path.push_back(i);
      VisitStatement(root.children[i], path, false);
      path.pop_back();
    }
    return std::move(sites_);
  }

 private:
  void VisitStatement(const Node& stmt, NodePath& path, bool in_function) {
    if (stmt.kind == NodeKind::kSimpleStatement) {
      if (kind_ == TransformKind::kWrapTryCatch && in_function &&
          !IsGlobalStatement(tree_, stmt)) {
        sites_.push_back(Site{kind_, path, 0, {},
                              Toks(tree_)[stmt.first_leaf].span.start});
      }
      return;
    }
    const bool body_in_function =
        stmt.kind == NodeKind::kFunctionDef   ? true
        : stmt.kind == NodeKind::kClassDef    ? false
                                              : in_function;
    for (size_t i = 0; i < stmt.children.size(); ++i) {
      path.push_back(i);
      VisitSuite(stmt.children[i], path, body_in_function);
      path.pop_back();
    }
  }

  void VisitSuite(const Node& suite, NodePath& path, bool in_function) {
    const bool boundaries = in_function && !suite.inline_suite &&
                            (kind_ == TransformKind::kAddDeadCode ||
                             kind_ == TransformKind::kInsertPrint);
    for (size_t i = 0; i < suite.children.size(); ++i) {
      if (boundaries) {
        sites_.push_back(Site{kind_, path, i, {},
                              Toks(tree_)[suite.children[i].first_leaf].span.start});
      }
      if (suite.inline_suite) continue;
      path.push_back(i);
      VisitStatement(suite.children[i], path, in_function);
      path.pop_back();
    }
    if (boundaries) {
      sites_.push_back(Site{kind_, path, suite.children.size(), {},
                            Toks(tree_)[suite.end_leaf - 1].span.end});
    }
  }

  const SyntaxTree& tree_;
  TransformKind kind_;
  std::vector<Site> sites_;
};

void CollectFunctions(const Node& node, NodePath& path,
                      std::vector<std::pair<NodePath, const Node*>>& out) {
  if (node.kind == NodeKind::kFunctionDef) out.emplace_back(path, &node);
  for (size_t i = 0; i < node.children.size(); ++i) {
    path.push_back(i);
    CollectFunctions(node.children[i], path, out);
    path.pop_back();
  }
}

int FunctionScope(const SyntaxTree& tree, const Node& fn) {
  const auto& scopes = tree.scopes();
  for (size_t s = 0; s < scopes.size(); ++s) {
    if (scopes[s].kind == ScopeKind::kFunction &&
        scopes[s].first_leaf == fn.first_leaf) {
      return static_cast<int>(s);
    }
  }
  return -1;
}

bool IsFormattedString(std::string_view text) {
  for (char c : text) {
    if (c == '\'' || c == '"') return false;
    if (c == 'f' || c == 'F') return true;
  }
  return false;
}

bool ContainsWord(std::string_view haystack, std::string_view word) {
  auto is_word = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
  };
  for (size_t pos = haystack.find(word); pos != std::string_view::npos;
       pos = haystack.find(word, pos + 1)) {
    const bool left = pos == 0 || !is_word(haystack[pos - 1]);
    const size_t after = pos + word.size();
    const bool right = after >= haystack.size() || !is_word(haystack[after]);
    if (left && right) return true;
  }
  return false;
}

bool IsOccurrenceRole(NameRole role) {
  return role == NameRole::kLoad || role == NameRole::kStore ||
         role == NameRole::kAugStore || role == NameRole::kParam;
}

// Renameable bindings of one function, keyed by name, valued by the offset
// of their first occurrence.
std::map<std::string, size_t> RenameCandidates(const SyntaxTree& tree,
                                               const Node& fn, int scope) {
  const TokenStream& toks = Toks(tree);
  std::map<std::string, size_t> first_offset;
  std::map<std::string, NameRole> first_role;
  std::set<std::string> excluded;
  std::vector<std::string_view> fstrings;
  for (size_t i = fn.first_leaf; i < fn.end_leaf; ++i) {
    const CodeToken& tok = toks[i];
    if (tok.cls == TokenClass::kString && IsFormattedString(tok.text)) {
      fstrings.push_back(tok.text);
    }
    if (tok.cls != TokenClass::kIdentifier) continue;
    const NameRole role = tree.role(i);
    const int s = tree.scope_of(i);
    if (s == scope) {
      if (role == NameRole::kGlobalDecl || role == NameRole::kImport ||
          role == NameRole::kDefName) {
        excluded.insert(tok.text);
      }
      if (IsOccurrenceRole(role) && !first_role.contains(tok.text)) {
        first_role[tok.text] = role;
        first_offset[tok.text] = tok.span.start;
      }
    } else if (tree.ScopeWithin(s, scope)) {
      // Referenced from a nested scope (closure, lambda, comprehension).
      if (role != NameRole::kAttribute && role != NameRole::kKeywordArg) {
        excluded.insert(tok.text);
      }
    }
  }
  std::map<std::string, size_t> out;
  for (const auto& [name, role] : first_role) {
    if (role != NameRole::kParam && role != NameRole::kStore) continue;
    if (excluded.contains(name)) continue;
    if (std::any_of(fstrings.begin(), fstrings.end(),
                    [&](std::string_view f) { return ContainsWord(f, name); })) {
      continue;
    }
    out[name] = first_offset[name];
  }
  return out;
}

std::vector<Site> RenameSites(const SyntaxTree& tree) {
  std::vector<std::pair<NodePath, const Node*>> functions;
  NodePath path;
  CollectFunctions(tree.root(), path, functions);
  std::vector<Site> sites;
  for (const auto& [fn_path, fn] : functions) {
    const int scope = FunctionScope(tree, *fn);
    if (scope < 0) continue;
    for (const auto& [name, offset] : RenameCandidates(tree, *fn, scope)) {
      sites.push_back(Site{TransformKind::kRename, fn_path, 0, name, offset});
    }
  }
  std::stable_sort(sites.begin(), sites.end(),
                   [](const Site& a, const Site& b) { return a.offset < b.offset; });
  return sites;
}

struct Edit {
  size_t offset;
  size_t length;
  std::string text;
};

std::string ApplyEdits(std::string source, std::vector<Edit> edits) {
  std::sort(edits.begin(), edits.end(),
            [](const Edit& a, const Edit& b) { return a.offset > b.offset; });
  for (const Edit& e : edits) source.replace(e.offset, e.length, e.text);
  return source;
}

std::string IndentUnit(std::string_view indent) {
  return indent.find('\t') != std::string_view::npos ? "\t" : "    ";
}

size_t LastNewlineLeaf(const SyntaxTree& tree, const Node& node) {
  for (size_t i = node.end_leaf; i > node.first_leaf; --i) {
    if (Toks(tree)[i - 1].cls == TokenClass::kNewline) return i - 1;
  }
  throw GenerationError("statement without a line terminator");
}

Edit InsertionEdit(const SyntaxTree& tree, const Site& site,
                   const std::vector<std::string>& lines) {
  const Node* suite = tree.Find(site.path);
  const std::string& src = tree.source();
  const CodeToken& first = Toks(tree)[suite->children.front().first_leaf];
  const size_t first_line = tree.LineStart(first.span.start);
  const std::string indent = src.substr(first_line, first.span.start - first_line);
  std::string block;
  for (const std::string& line : lines) block += indent + line + "\n";
  if (site.index < suite->children.size()) {
    const CodeToken& tok = Toks(tree)[suite->children[site.index].first_leaf];
    return Edit{tree.LineStart(tok.span.start), 0, block};
  }
  const CodeToken& nl = Toks(tree)[LastNewlineLeaf(tree, suite->children.back())];
  if (nl.span.start == nl.span.end) block.insert(0, "\n");  // unterminated
  return Edit{nl.span.end, 0, block};
}

void RequireFiller(const std::vector<std::string>& filler, size_t n,
                   TransformKind kind) {
  if (filler.size() != n) {
    throw SiteMismatchError(std::string(TransformKindName(kind)) + " expects " +
                            std::to_string(n) + " filler values, got " +
                            std::to_string(filler.size()));
  }
}

}  // namespace

std::vector<Site> EnumerateSites(const SyntaxTree& tree, TransformKind kind) {
  switch (kind) {
    case TransformKind::kMixed:
      throw SiteMismatchError("Mixed is not a single transformation kind");
    case TransformKind::kRename:
      return RenameSites(tree);
    case TransformKind::kInsertPrint:
      // A local or imported `print` would capture the inserted call.
      if (BindsName(tree, "print")) return {};
      [[fallthrough]];
    default:
      return StatementWalker(tree, kind).Run();
  }
}

std::vector<std::string> SampleFiller(const SyntaxTree& tree,
                                      TransformKind kind,
                                      const WordLexicon& lexicon,
                                      SplitMix64& rng) {
  std::set<std::string, std::less<>> forbidden;
  for (const CodeToken& tok : Toks(tree).tokens()) {
    if (tok.cls == TokenClass::kIdentifier) forbidden.insert(tok.text);
  }
  forbidden.insert("print");
  switch (kind) {
    case TransformKind::kAddDeadCode: {
      std::string i1 = SampleIdentifier(lexicon, rng, forbidden);
      forbidden.insert(i1);
      std::string i2 = SampleIdentifier(lexicon, rng, forbidden);
      return {std::move(i1), std::move(i2),
              std::to_string(rng.UniformInt(0, 9))};
    }
    case TransformKind::kRename:
      return {SampleIdentifier(lexicon, rng, forbidden)};
    case TransformKind::kInsertPrint: {
      if (lexicon.empty()) throw LexiconExhaustedError("lexicon is empty");
      const auto count = static_cast<size_t>(rng.UniformInt(1, 3));
      std::vector<std::string> words;
      for (size_t i = 0; i < count; ++i) {
        words.push_back(lexicon.words()[rng.UniformIndex(lexicon.size())]);
      }
      return words;
    }
    case TransformKind::kWrapTryCatch:
      return {};
    case TransformKind::kMixed:
      break;
  }
  throw SiteMismatchError("Mixed is not a single transformation kind");
}

SyntaxTree ApplyTransformWithFiller(const SyntaxTree& tree, const Site& site,
                                    const std::vector<std::string>& filler,
                                    const TransformOptions& options) {
  const std::vector<Site> sites = EnumerateSites(tree, site.kind);
  if (std::find(sites.begin(), sites.end(), site) == sites.end()) {
    throw SiteMismatchError("site " + DescribeSite(site) + " is not a " +
                            std::string(TransformKindName(site.kind)) +
                            " site of this tree");
  }
  const std::string& src = tree.source();
  std::vector<Edit> edits;
  switch (site.kind) {
    case TransformKind::kAddDeadCode: {
      RequireFiller(filler, 3, site.kind);
      const std::string& i1 = filler[0];
      const std::string& i2 = filler[1];
      edits.push_back(InsertionEdit(
          tree, site,
          {i2 + " = 0", i1 + " = " + filler[2],
           "if (" + i1 + " != " + i2 + "): " + i2 + " = 0"}));
      break;
    }
    case TransformKind::kInsertPrint: {
      if (filler.empty() || filler.size() > 3) {
        throw SiteMismatchError("InsertPrint expects 1-3 filler words");
      }
      std::string words;
      for (const std::string& w : filler) {
        if (!words.empty()) words += ' ';
        words += w;
      }
      edits.push_back(InsertionEdit(tree, site, {"print(\"" + words + "\")"}));
      break;
    }
    case TransformKind::kWrapTryCatch: {
      RequireFiller(filler, 0, site.kind);
      const Node* stmt = tree.Find(site.path);
      const CodeToken& first = Toks(tree)[stmt->first_leaf];
      const CodeToken& nl = Toks(tree)[LastNewlineLeaf(tree, *stmt)];
      const size_t line = tree.LineStart(first.span.start);
      const std::string indent = src.substr(line, first.span.start - line);
      const std::string unit = IndentUnit(indent);
      const std::string body =
          src.substr(first.span.start, nl.span.start - first.span.start);
      std::string text = indent + "try:\n" + indent + unit + body + "\n" +
                         indent + "except Exception:\n" + indent + unit +
                         std::string(HandlerModeName(options.handler)) + "\n";
      edits.push_back(Edit{line, nl.span.end - line, std::move(text)});
      break;
    }
    case TransformKind::kRename: {
      RequireFiller(filler, 1, site.kind);
      if (!IsValidIdentifier(filler[0])) {
        throw SiteMismatchError("rename target '" + filler[0] +
                                "' is not an identifier");
      }
      const Node* fn = tree.Find(site.path);
      const int scope = FunctionScope(tree, *fn);
      for (size_t i = fn->first_leaf; i < fn->end_leaf; ++i) {
        const CodeToken& tok = Toks(tree)[i];
        if (tok.cls == TokenClass::kIdentifier && tok.text == site.name &&
            tree.scope_of(i) == scope && IsOccurrenceRole(tree.role(i))) {
          edits.push_back(Edit{tok.span.start, tok.span.end - tok.span.start,
                               filler[0]});
        }
      }
      break;
    }
    case TransformKind::kMixed:
      throw SiteMismatchError("Mixed is not a single transformation kind");
  }
  return ParseProgram(ApplyEdits(src, std::move(edits)));
}

SyntaxTree ApplyTransform(const SyntaxTree& tree, TransformKind kind,
                          const Site& site, const WordLexicon& lexicon,
                          uint64_t seed, const TransformOptions& options) {
  if (site.kind != kind) {
    throw SiteMismatchError("site was enumerated for " +
                            std::string(TransformKindName(site.kind)));
  }
  SplitMix64 rng(seed);
  return ApplyTransformWithFiller(tree, site,
                                  SampleFiller(tree, kind, lexicon, rng),
                                  options);
}

PerturbResult Perturb(std::string_view source, size_t d, TransformKind kinds,
                      const WordLexicon& lexicon, uint64_t seed,
                      const TransformOptions& options) {
  SyntaxTree tree = ParseProgram(source);
  SplitMix64 rng(seed);
  PerturbResult result;
  result.trace.handler = options.handler;
  for (size_t k = 1; k <= d; ++k) {
    PerturbStep step;
    step.k = k;
    step.kind = kinds == TransformKind::kMixed
                    ? kConcreteTransforms[rng.UniformIndex(4)]
                    : kinds;
    const std::vector<Site> sites = EnumerateSites(tree, step.kind);
    if (sites.empty()) {
      step.skipped = true;
      result.trace.steps.push_back(std::move(step));
      continue;
    }
    step.site = sites[rng.UniformIndex(sites.size())];
    step.filler = SampleFiller(tree, step.kind, lexicon, rng);
    tree = ApplyTransformWithFiller(tree, step.site, step.filler, options);
    result.trace.steps.push_back(std::move(step));
  }
  result.source = d == 0 ? std::string(source) : tree.Unparse();
  return result;
}

std::string ReplayTrace(std::string_view source, const PerturbTrace& trace) {
  SyntaxTree tree = ParseProgram(source);
  const TransformOptions options{trace.handler};
  for (const PerturbStep& step : trace.steps) {
    if (step.skipped) continue;
    tree = ApplyTransformWithFiller(tree, step.site, step.filler, options);
  }
  return tree.Unparse();
}

namespace {

NodePath ParsePath(const std::string& text) {
  NodePath path;
  if (text == "root" || text.empty()) return path;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, '.')) {
    try {
      path.push_back(static_cast<size_t>(std::stoull(part)));
    } catch (const std::exception&) {
      throw IoError("malformed site path '" + text + "'");
    }
  }
  return path;
}

}  // namespace

std::string TraceToJsonLines(const PerturbTrace& trace) {
  std::string out;
  for (const PerturbStep& step : trace.steps) {
    nlohmann::ordered_json record;
    record["k"] = step.k;
    record["kind"] = TransformKindName(step.kind);
    record["skip"] = step.skipped;
    record["site"] = step.skipped ? std::string() : FormatPath(step.site.path);
    record["index"] = step.site.index;
    record["name"] = step.site.name;
    record["filler"] = step.filler;
    record["handler"] = HandlerModeName(trace.handler);
    if (step.kind == TransformKind::kAddDeadCode) {
      record["dead_code_form"] = "i2 = 0; i1 = <literal>; if (i1 != i2): i2 = 0";
    }
    out += record.dump();
    out += '\n';
  }
  return out;
}

PerturbTrace TraceFromJsonLines(std::string_view text) {
  PerturbTrace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const nlohmann::json record = nlohmann::json::parse(line);
      PerturbStep step;
      step.k = record.at("k").get<size_t>();
      step.kind = ParseTransformKind(record.at("kind").get<std::string>());
      step.skipped = record.at("skip").get<bool>();
      step.site.kind = step.kind;
      if (!step.skipped) {
        step.site.path = ParsePath(record.at("site").get<std::string>());
        step.site.index = record.value("index", size_t{0});
        step.site.name = record.value("name", std::string());
      }
      step.filler = record.at("filler").get<std::vector<std::string>>();
      trace.handler = ParseHandlerMode(record.value("handler", std::string("raise")));
      trace.steps.push_back(std::move(step));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("malformed trace record: ") + e.what());
    }
  }
  return trace;
}

}  // namespace wmlab
