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

#include "wmlab/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "wmlab/error.h"
#include "wmlab/lexing.h"

namespace wmlab {
namespace {

bool Acceptable(std::string_view word) {
  if (word.empty() || !(word[0] >= 'a' && word[0] <= 'z')) return false;
  for (char c : word) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) {
      return false;
    }
  }
  return !IsPythonKeyword(word) && !IsPythonBuiltin(word);
}

}  // namespace

WordLexicon::WordLexicon(std::vector<std::string> words) {
  std::unordered_set<std::string> seen;
  for (std::string& w : words) {
    if (Acceptable(w) && seen.insert(w).second) words_.push_back(std::move(w));
  }
}

WordLexicon WordLexicon::Parse(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const size_t hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(first, last - first + 1));
  }
  return WordLexicon(std::move(words));
}

WordLexicon WordLexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

std::vector<std::string> WordLexicon::Slice(size_t count, uint64_t seed) const {
  std::vector<std::string> shuffled = words_;
  SplitMix64 rng(seed);
  for (size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.UniformIndex(i)]);
  }
  shuffled.resize(std::min(count, shuffled.size()));
  return shuffled;
}

std::string SampleIdentifier(const WordLexicon& lexicon, SplitMix64& rng,
                             const std::set<std::string, std::less<>>& forbidden) {
  if (lexicon.empty()) throw LexiconExhaustedError("lexicon is empty");
  for (size_t draw = 0; draw < kMaxIdentifierDraws; ++draw) {
    const std::string& word = lexicon.words()[rng.UniformIndex(lexicon.size())];
    if (IsValidIdentifier(word) && !forbidden.contains(word)) return word;
  }
  throw LexiconExhaustedError("no usable identifier after " +
                              std::to_string(kMaxIdentifierDraws) + " draws");
}

}  // namespace wmlab
