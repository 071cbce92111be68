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

#ifndef WMLAB_LEXICON_H_
#define WMLAB_LEXICON_H_

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wmlab/hash.h"

namespace wmlab {

// Ordered, deduplicated word list from which inserted identifiers and print
// strings are drawn. Only lowercase identifier-safe words that are neither
// keywords nor builtins are kept.
class WordLexicon {
 public:
  WordLexicon() = default;
  explicit WordLexicon(std::vector<std::string> words);

  // One word per line, '#' starts a comment. Throws IoError.
  static WordLexicon Load(const std::filesystem::path& path);
  static WordLexicon Parse(std::string_view text);

  const std::vector<std::string>& words() const { return words_; }
  size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // The first `count` words after a seeded shuffle of the whole list.
  std::vector<std::string> Slice(size_t count, uint64_t seed) const;

 private:
  std::vector<std::string> words_;
};

inline constexpr size_t kMaxIdentifierDraws = 1000;

// Draws words until one is not in `forbidden`. Throws LexiconExhaustedError
// after kMaxIdentifierDraws draws or when the lexicon is empty.
std::string SampleIdentifier(const WordLexicon& lexicon, SplitMix64& rng,
                             const std::set<std::string, std::less<>>& forbidden);

}  // namespace wmlab

#endif  // WMLAB_LEXICON_H_
