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

#ifndef WMLAB_CORPUS_H_
#define WMLAB_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmlab/python_runtime.h"

namespace wmlab {

// A program bundle on disk is a directory holding `<id>.py` per program and
// a manifest.jsonl with one object per program:
//   {"id": ..., "entry": ..., "args": ["(1, 2)", ...], "expected": ["3", ...]}
// Generated bundles add "seed" and "watermarked". `expected` holds repr()
// strings produced by running the program, never written by hand.
struct CorpusItem {
  std::string id;
  std::string source;
  std::string entry;
  std::vector<std::string> args;
  std::vector<std::string> expected;
  std::optional<uint64_t> seed;
  std::optional<bool> watermarked;
};

inline constexpr const char* kManifestName = "manifest.jsonl";

// Loads and checks a bundle: every manifest entry has a parseable source and
// every source has a manifest entry. With `verify`, each program is executed
// and its return values compared against `expected`. Throws IngestError
// naming the offending program. With `require_expected` false, manifest
// entries may omit expected values (for a bundle about to be recomputed).
std::vector<CorpusItem> IngestCorpus(const std::filesystem::path& dir,
                                     const PythonRuntime* verify,
                                     bool require_expected = true);

// Fills `expected` by executing every item. Throws IngestError when a
// program raises or times out.
void ComputeExpected(std::span<CorpusItem> items, const PythonRuntime& runtime);

// Writes sources and the manifest. Throws IoError.
void WriteBundle(const std::filesystem::path& dir, std::span<const CorpusItem> items);

}  // namespace wmlab

#endif  // WMLAB_CORPUS_H_
