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

#include "wmlab/detector.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "wmlab/error.h"
#include "wmlab/hash.h"

namespace wmlab {

std::string_view UmdFormulaName(UmdFormula formula) {
  return formula == UmdFormula::kLiteral ? "literal" : "general";
}

UmdFormula ParseUmdFormula(std::string_view name) {
  if (name == "literal") {
    return UmdFormula::kLiteral;
  }
  if (name == "general") return UmdFormula::kGeneral;
  throw ConfigError("unknown UMD formula '" + std::string(name) +
                    "' (expected literal or general)");
}

void DetectorConfig::Validate() const {
  if (group_size == 0) throw ConfigError("group size must be at least 1");
  if (rule == DecisionRule::kPThreshold &&
      !(p_threshold >= 0.0 && p_threshold <= 1.0)) {
    throw ConfigError("p threshold must lie in [0, 1]");
  }
}

namespace {

bool Scored(const CodeToken& token, bool count_comments) {
  return count_comments || token.cls != TokenClass::kComment;
}

}  // namespace

size_t ScoredLength(const TokenStream& tokens, bool count_comments) {
  return static_cast<size_t>(std::count_if(
      tokens.tokens().begin(), tokens.tokens().end(),
      [&](const CodeToken& t) { return Scored(t, count_comments); }));
}

size_t CountGreen(const TokenStream& tokens, WatermarkKey key,
                  const SchemeConfig& config, bool count_comments) {
  size_t green = 0;
  std::string_view context = kBoundaryContext;
  for (const CodeToken& token : tokens.tokens()) {
    if (!Scored(token, count_comments)) continue;
    if (IsGreen(key, config, context, token.text)) ++green;
    context = token.text;
  }
  return green;
}

GreenTally TallyGreen(std::span<const TokenStream> completions,
                      WatermarkKey key, const SchemeConfig& scheme,
                      const DetectorConfig& det) {
  GreenTally tally;
  std::unordered_set<std::string> seen;
  std::string unit;
  for (const TokenStream& completion : completions) {
    std::string_view context = kBoundaryContext;
    for (const CodeToken& token : completion.tokens()) {
      if (!Scored(token, det.count_comments)) continue;
      if (token.IsLayout() && !det.count_layout) continue;
      if (det.ignore_repeated) {
        unit.clear();
        if (scheme.scheme == Scheme::kUmd) {
          unit.append(context);
          unit.push_back('\0');
        }
        unit.append(token.text);
        if (!seen.insert(unit).second) {
          context = token.text;
          continue;
        }
      }
      ++tally.tokens;
      if (IsGreen(key, scheme, context, token.text)) ++tally.green;
      context = token.text;
    }
  }
  return tally;
}

double ZScoreUmd(size_t green_count, size_t tokens, UmdFormula formula,
                 double gamma) {
  if (tokens == 0) {
    throw UndefinedStatisticError("z-statistic undefined for T = 0");
  }
  if (formula == UmdFormula::kLiteral) {
    const double t = static_cast<double>(tokens);
    return 2.0 * (static_cast<double>(green_count) - t / 2.0) / std::sqrt(t);
  }
  return ZScoreUnigram(green_count, tokens, gamma);
}

double ZScoreUnigram(size_t green_count, size_t tokens, double gamma) {
  if (tokens == 0) {
    throw UndefinedStatisticError("z-statistic undefined for T = 0");
  }
  const double t = static_cast<double>(tokens);
  return (static_cast<double>(green_count) - gamma * t) /
         std::sqrt(t * gamma * (1.0 - gamma));
}

double PValue(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double ZScore(size_t green_count, size_t tokens, const SchemeConfig& scheme,
              const DetectorConfig& det) {
  if (scheme.scheme == Scheme::kUnigram) {
    return ZScoreUnigram(green_count, tokens, scheme.gamma);
  }
  return ZScoreUmd(green_count, tokens, det.umd_formula, scheme.gamma);
}

bool Decide(double z, double p, const DetectorConfig& det) {
  return det.rule == DecisionRule::kZThreshold ? z > det.z_threshold
                                               : p <= det.p_threshold;
}

namespace {

DetectionReport MakeReport(size_t green, size_t tokens,
                           const SchemeConfig& scheme,
                           const DetectorConfig& det) {
  DetectionReport report;
  report.tokens = tokens;
  report.green_count = green;
  report.z = ZScore(green, tokens, scheme, det);
  report.p = PValue(report.z);
  report.decision = Decide(report.z, report.p, det);
  report.grouping_seed = det.grouping_seed;
  return report;
}

}  // namespace

DetectionReport Detect(const TokenStream& tokens, WatermarkKey key,
                       const SchemeConfig& scheme, const DetectorConfig& det) {
  det.Validate();
  const GreenTally tally = TallyGreen(std::span(&tokens, 1), key, scheme, det);
  if (tally.tokens == 0) {
    throw UndefinedStatisticError("cannot run detection on an empty stream");
  }
  DetectionReport report = MakeReport(tally.green, tally.tokens, scheme, det);
  report.members = {0};
  return report;
}

std::vector<DetectionReport> DetectGrouped(
    std::span<const TokenStream> completions, WatermarkKey key,
    const SchemeConfig& scheme, const DetectorConfig& det) {
  det.Validate();
  if (completions.empty()) {
    throw UndefinedStatisticError("grouped detection needs at least one completion");
  }
  std::vector<size_t> order(completions.size());
  std::iota(order.begin(), order.end(), size_t{0});
  // Fisher-Yates driven by the pinned generator.
  SplitMix64 rng(det.grouping_seed);
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformIndex(i)]);
  }
  std::vector<DetectionReport> reports;
  std::vector<TokenStream> pool;
  for (size_t begin = 0; begin < order.size(); begin += det.group_size) {
    const size_t end = std::min(order.size(), begin + det.group_size);
    pool.clear();
    std::vector<size_t> members;
    for (size_t i = begin; i < end; ++i) {
      pool.push_back(completions[order[i]]);
      members.push_back(order[i]);
    }
    const GreenTally tally = TallyGreen(pool, key, scheme, det);
    if (tally.tokens == 0) {
      throw UndefinedStatisticError("group " + std::to_string(reports.size()) +
                                    " contains only empty completions");
    }
    DetectionReport report = MakeReport(tally.green, tally.tokens, scheme, det);
    report.group_id = reports.size();
    report.members = std::move(members);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string ReportCsvRow(const DetectionReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%.17g,%.17g,%d",
                report.group_id, report.tokens, report.green_count, report.z,
                report.p, report.decision ? 1 : 0);
  return buf;
}

void WriteReportsCsv(std::ostream& out,
                     std::span<const DetectionReport> reports) {
  out << kReportCsvHeader << '\n';
  for (const DetectionReport& r : reports) out << ReportCsvRow(r) << '\n';
}

}  // namespace wmlab
