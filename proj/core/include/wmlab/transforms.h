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

#ifndef WMLAB_TRANSFORMS_H_
#define WMLAB_TRANSFORMS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wmlab/lexicon.h"
#include "wmlab/syntax_tree.h"

namespace wmlab {

enum class TransformKind {
  kAddDeadCode,
  kRename,
  kInsertPrint,
  kWrapTryCatch,
  kMixed,  // perturb-level only: a uniform choice of the four above per step
};

inline constexpr TransformKind kConcreteTransforms[] = {
    TransformKind::kAddDeadCode, TransformKind::kRename,
    TransformKind::kInsertPrint, TransformKind::kWrapTryCatch};

std::string_view TransformKindName(TransformKind kind);
// Throws ConfigError for unknown names.
TransformKind ParseTransformKind(std::string_view name);

// Body of the except clause added by WrapTryCatch.
enum class HandlerMode { kRaise, kPass };

std::string_view HandlerModeName(HandlerMode mode);
HandlerMode ParseHandlerMode(std::string_view name);

struct TransformOptions {
  HandlerMode handler = HandlerMode::kRaise;
};

// A transformation location. `path` names a suite (AddDeadCode,
// InsertPrint: insert before statement `index`, or after the last one when
// index == statement count), a simple statement (WrapTryCatch) or a function
// definition (Rename: the binding `name` local to that function).
struct Site {
  TransformKind kind = TransformKind::kAddDeadCode;
  NodePath path;
  size_t index = 0;
  std::string name;
  size_t offset = 0;  // source offset, used for ordering and diagnostics

  bool operator==(const Site& other) const {
    return kind == other.kind && path == other.path && index == other.index &&
           name == other.name;
  }
};

std::string DescribeSite(const Site& site);

// All sites of `kind` in source order. Only code inside function bodies is
// considered. Throws SiteMismatchError for kMixed.
std::vector<Site> EnumerateSites(const SyntaxTree& tree, TransformKind kind);

// Draws the filler words for one application: AddDeadCode -> {i1, i2,
// literal}, Rename -> {new name}, InsertPrint -> 1-3 words, WrapTryCatch ->
// {}. Fresh names avoid every identifier already present in the tree.
std::vector<std::string> SampleFiller(const SyntaxTree& tree,
                                      TransformKind kind,
                                      const WordLexicon& lexicon,
                                      SplitMix64& rng);

// Applies one transformation with explicit filler. Throws SiteMismatchError
// when `site` is not a current site of its kind in `tree`.
SyntaxTree ApplyTransformWithFiller(const SyntaxTree& tree, const Site& site,
                                    const std::vector<std::string>& filler,
                                    const TransformOptions& options = {});

SyntaxTree ApplyTransform(const SyntaxTree& tree, TransformKind kind,
                          const Site& site, const WordLexicon& lexicon,
                          uint64_t seed, const TransformOptions& options = {});

struct PerturbStep {
  size_t k = 0;  // 1-based iteration
  TransformKind kind = TransformKind::kAddDeadCode;
  bool skipped = false;  // no site existed for `kind` at this iteration
  Site site;
  std::vector<std::string> filler;
};

struct PerturbTrace {
  HandlerMode handler = HandlerMode::kRaise;
  std::vector<PerturbStep> steps;
};

struct PerturbResult {
  std::string source;
  PerturbTrace trace;
};

// Parses `source` and applies `d` randomly sited transformations of `kinds`
// (kMixed draws a kind per step with replacement). Throws ParseError and
// LexiconExhaustedError.
PerturbResult Perturb(std::string_view source, size_t d, TransformKind kinds,
                      const WordLexicon& lexicon, uint64_t seed,
                      const TransformOptions& options = {});

// Re-applies a recorded trace to the original source.
std::string ReplayTrace(std::string_view source, const PerturbTrace& trace);

// JSON-lines serialization, one record per step.
std::string TraceToJsonLines(const PerturbTrace& trace);
PerturbTrace TraceFromJsonLines(std::string_view text);

}  // namespace wmlab

#endif  // WMLAB_TRANSFORMS_H_
