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

#include "wmlab/corpus.h"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wmlab/error.h"
#include "wmlab/syntax_tree.h"

namespace wmlab {

namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<ExecJob> Jobs(std::span<const CorpusItem> items) {
  std::vector<ExecJob> jobs;
  for (const CorpusItem& item : items) jobs.push_back({item.source, item.entry, item.args});
  return jobs;
}

}  // namespace

std::vector<CorpusItem> IngestCorpus(const std::filesystem::path& dir,
                                     const PythonRuntime* verify, bool require_expected) {
  if (!std::filesystem::is_directory(dir)) {
    throw IngestError("corpus directory " + dir.string() + " does not exist");
  }
  std::set<std::string> sources;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".py") {
      sources.insert(entry.path().stem().string());
    }
  }
  const std::filesystem::path manifest = dir / kManifestName;
  if (!std::filesystem::exists(manifest)) {
    if (sources.empty()) throw IngestError("empty corpus: " + dir.string());
    throw IngestError("missing " + std::string(kManifestName) + " in " + dir.string());
  }
  std::vector<CorpusItem> items;
  std::set<std::string> ids;
  std::istringstream lines(ReadFile(manifest));
  std::string line;
  size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    CorpusItem item;
    try {
      const nlohmann::json record = nlohmann::json::parse(line);
      item.id = record.at("id").get<std::string>();
      item.entry = record.at("entry").get<std::string>();
      item.args = record.at("args").get<std::vector<std::string>>();
      if (require_expected || record.contains("expected")) {
        item.expected = record.at("expected").get<std::vector<std::string>>();
      }
      if (record.contains("seed")) item.seed = record["seed"].get<uint64_t>();
      if (record.contains("watermarked")) item.watermarked = record["watermarked"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw IngestError(manifest.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!ids.insert(item.id).second) throw IngestError("duplicate program id '" + item.id + "'");
    if ((require_expected || !item.expected.empty()) &&
        item.expected.size() != item.args.size()) {
      throw IngestError("program '" + item.id + "': expected values do not match argument tuples");
    }
    if (!sources.contains(item.id)) {
      throw IngestError("program '" + item.id + "': missing source file " + item.id + ".py");
    }
    item.source = ReadFile(dir / (item.id + ".py"));
    try {
      ParseProgram(item.source);
    } catch (const ParseError& e) {
      throw IngestError("program '" + item.id + "' does not parse: " + e.what());
    }
    items.push_back(std::move(item));
  }
  for (const std::string& id : sources) {
    if (!ids.contains(id)) throw IngestError("program '" + id + "': missing manifest entry");
  }
  if (items.empty()) throw IngestError("empty corpus: " + dir.string());
  if (verify != nullptr) {
    const std::vector<ExecResult> results = verify->Run(Jobs(items));
    for (size_t i = 0; i < items.size(); ++i) {
      if (results[i].status != ExecStatus::kOk || results[i].values != items[i].expected) {
        throw IngestError("program '" + items[i].id +
                          "': recomputed return values differ from the manifest");
      }
    }
  }
  return items;
}

void ComputeExpected(std::span<CorpusItem> items, const PythonRuntime& runtime) {
  const std::vector<ExecResult> results = runtime.Run(Jobs(items));
  for (size_t i = 0; i < items.size(); ++i) {
    if (results[i].status != ExecStatus::kOk) {
      throw IngestError("program '" + items[i].id + "' failed to run: " +
                        std::string(ExecStatusName(results[i].status)) + " " +
                        results[i].message);
    }
    items[i].expected = results[i].values;
  }
}

void WriteBundle(const std::filesystem::path& dir, std::span<const CorpusItem> items) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::ofstream manifest(dir / kManifestName, std::ios::binary);
  if (!manifest) throw IoError("cannot write " + (dir / kManifestName).string());
  for (const CorpusItem& item : items) {
    std::ofstream src(dir / (item.id + ".py"), std::ios::binary);
    src << item.source;
    if (!src) throw IoError("cannot write " + (dir / (item.id + ".py")).string());
    nlohmann::ordered_json record;
    record["id"] = item.id;
    if (item.seed) record["seed"] = *item.seed;
    if (item.watermarked) record["watermarked"] = *item.watermarked;
    record["entry"] = item.entry;
    record["args"] = item.args;
    record["expected"] = item.expected;
    manifest << record.dump() << '\n';
  }
  if (!manifest) throw IoError("cannot write " + (dir / kManifestName).string());
}

}  // namespace wmlab
