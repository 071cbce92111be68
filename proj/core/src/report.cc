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

#include "wmlab/report.h"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "wmlab/error.h"

namespace wmlab {

namespace fs = std::filesystem;

namespace {

std::string Real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string Rate(const std::optional<double>& x) { return x ? Real(*x) : "NA"; }

// RFC 4180: quote fields containing a comma, quote or line break.
std::string Quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Reads one record; returns false at end of input.
bool ReadRecord(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) throw IoError("unterminated quoted CSV field");
  fields.push_back(std::move(field));
  return true;
}

uint64_t ParseUnsigned(const std::string& s) {
  size_t used = 0;
  uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || s[0] == '-') throw IoError("bad integer field '" + s + "'");
  return v;
}

double ParseReal(const std::string& s) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw IoError("bad real field '" + s + "'");
  return v;
}

bool ParseBool(const std::string& s) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw IoError("bad flag field '" + s + "'");
}

std::string Fixed(const std::optional<double>& x, int digits) {
  if (!x) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, *x);
  return buf;
}

}  // namespace

void WriteTrialsCsv(std::ostream& out, std::span<const TrialRecord> records) {
  out << kTrialsCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.trial_id << ',' << r.repetition << ',' << r.seed << ',' << SchemeName(r.scheme)
        << ',' << Quote(r.transform) << ',' << r.d << ',' << (r.watermarked ? 1 : 0) << ','
        << r.programs << ',' << r.tokens_before << ',' << r.tokens_after << ','
        << Real(r.token_change) << ',' << r.scored << ',' << r.green_count << ',' << Real(r.z)
        << ',' << Real(r.p) << ',' << (r.decision ? 1 : 0) << ','
        << EquivalenceName(r.equivalence) << ',' << Quote(r.error) << '\n';
  }
}

std::vector<TrialRecord> ReadTrialsCsv(std::istream& in) {
  std::vector<std::string> f;
  if (!ReadRecord(in, f)) throw IoError("trials CSV is empty");
  std::string header;
  for (size_t i = 0; i < f.size(); ++i) header += (i ? "," : "") + f[i];
  if (header != kTrialsCsvHeader) throw IoError("trials CSV has an unexpected header");
  std::vector<TrialRecord> records;
  size_t line = 1;
  while (ReadRecord(in, f)) {
    ++line;
    if (f.size() != 18) {
      throw IoError("trials CSV line " + std::to_string(line) + " has " +
                    std::to_string(f.size()) + " fields, expected 18");
    }
    TrialRecord r;
    try {
      r.trial_id = ParseUnsigned(f[0]);
      r.repetition = ParseUnsigned(f[1]);
      r.seed = ParseUnsigned(f[2]);
      r.scheme = ParseScheme(f[3]);
      r.transform = f[4];
      r.d = ParseUnsigned(f[5]);
      r.watermarked = ParseBool(f[6]);
      r.programs = ParseUnsigned(f[7]);
      r.tokens_before = ParseUnsigned(f[8]);
      r.tokens_after = ParseUnsigned(f[9]);
      r.token_change = ParseReal(f[10]);
      r.scored = ParseUnsigned(f[11]);
      r.green_count = ParseUnsigned(f[12]);
      r.z = ParseReal(f[13]);
      r.p = ParseReal(f[14]);
      r.decision = ParseBool(f[15]);
      r.equivalence = ParseEquivalence(f[16]);
      r.error = f[17];
    } catch (const Error& e) {
      throw IoError("trials CSV line " + std::to_string(line) + ": " + e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

void WriteSummaryCsv(std::ostream& out, std::span<const RateSummary> summaries) {
  out << kSummaryCsvHeader << '\n';
  for (const RateSummary& s : summaries) {
    out << SchemeName(s.scheme) << ',' << Quote(s.transform) << ',' << s.d << ','
        << s.watermarked << ',' << s.detected << ',' << s.controls << ',' << s.false_alarms
        << ',' << s.failed << ',' << Rate(s.tpr) << ',' << Rate(s.fpr) << ','
        << Real(s.mean_token_change) << ',' << Rate(s.tpr_mean) << ',' << Rate(s.tpr_stddev)
        << ',' << Rate(s.fpr_mean) << ',' << Rate(s.fpr_stddev) << ','
        << s.equivalence_checked << ',' << s.equivalence_equal << ','
        << s.equivalence_timeout << '\n';
  }
}

void WriteCurveCsv(std::ostream& out, std::span<const RateSummary> summaries) {
  out << kCurveCsvHeader << '\n';
  for (const RateSummary& s : summaries) {
    out << s.d << ',' << SchemeName(s.scheme) << ',' << Quote(s.transform) << ','
        << Rate(s.tpr) << ',' << Rate(s.fpr) << '\n';
  }
}

std::string RenderMarkdown(std::span<const RateSummary> summaries) {
  using Row = std::pair<Scheme, std::string>;
  std::vector<Row> rows;
  std::set<size_t> ds;
  std::map<std::pair<Row, size_t>, const RateSummary*> cells;
  for (const RateSummary& s : summaries) {
    Row row{s.scheme, s.transform};
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    ds.insert(s.d);
    cells[{row, s.d}] = &s;
  }
  std::ostringstream md;
  md << "# wmlab report\n";
  auto table = [&](const std::string& title, auto value) {
    md << "\n## " << title << "\n\n| Scheme | Transform |";
    for (size_t d : ds) md << " d=" << d << " |";
    md << "\n|---|---|";
    for (size_t i = 0; i < ds.size(); ++i) md << "---|";
    md << '\n';
    for (const Row& row : rows) {
      md << "| " << SchemeName(row.first) << " | " << row.second << " |";
      for (size_t d : ds) {
        auto it = cells.find({row, d});
        md << ' ' << (it == cells.end() ? std::string("") : value(*it->second)) << " |";
      }
      md << '\n';
    }
  };
  table("Token change proportion",
        [](const RateSummary& s) { return Fixed(s.mean_token_change, 3); });
  table("TPR", [](const RateSummary& s) {
    std::string cell = Fixed(s.tpr, 3);
    if (s.tpr_stddev) cell += " (sd " + Fixed(s.tpr_stddev, 3) + ")";
    return cell;
  });
  table("FPR", [](const RateSummary& s) {
    std::string cell = Fixed(s.fpr, 3);
    if (s.fpr_stddev) cell += " (sd " + Fixed(s.fpr_stddev, 3) + ")";
    return cell;
  });
  size_t failed = 0, checked = 0, equal = 0, timeout = 0;
  for (const RateSummary& s : summaries) {
    failed += s.failed;
    checked += s.equivalence_checked;
    equal += s.equivalence_equal;
    timeout += s.equivalence_timeout;
  }
  md << "\nFailed trials: " << failed << "\n";
  if (checked > 0) {
    md << "\nEquivalence: " << equal << " of " << checked << " equal, " << timeout
       << " timed out\n";
  }
  return md.str();
}

void EmitReport(const fs::path& dir, std::span<const RateSummary> summaries,
                std::span<const TrialRecord> records) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  auto write = [&](const char* name, auto body) {
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    body(out);
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
  };
  write("trials.csv", [&](std::ostream& o) { WriteTrialsCsv(o, records); });
  write("summary.csv", [&](std::ostream& o) { WriteSummaryCsv(o, summaries); });
  write("curve.csv", [&](std::ostream& o) { WriteCurveCsv(o, summaries); });
  write("report.md", [&](std::ostream& o) { o << RenderMarkdown(summaries); });
}

}  // namespace wmlab
