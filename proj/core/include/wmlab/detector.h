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

#ifndef WMLAB_DETECTOR_H_
#define WMLAB_DETECTOR_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmlab/lexing.h"
#include "wmlab/watermark.h"

namespace wmlab {

enum class DecisionRule { kZThreshold, kPThreshold };

// kLiteral: 2(G - T/2)/sqrt(T), centred for gamma = 0.5 only.
// kGeneral:      (G - gamma T)/sqrt(T gamma (1 - gamma)).
enum class UmdFormula { kLiteral, kGeneral };

std::string_view UmdFormulaName(UmdFormula formula);
UmdFormula ParseUmdFormula(std::string_view name);

struct DetectorConfig {
  DecisionRule rule = DecisionRule::kZThreshold;
  double z_threshold = 3.0;
  double p_threshold = 0.00135;
  size_t group_size = 3;
  UmdFormula umd_formula = UmdFormula::kGeneral;
  // Seeds the permutation that assigns completions to groups.
  uint64_t grouping_seed = 0;
  // Comments are lexed but not scored unless this is set.
  bool count_comments = false;
  // NEWLINE/INDENT/DEDENT carry no text of their own. Unless this is set
  // they are neither scored nor used as hash context.
  bool count_layout = false;
  // Score each distinct unit once per detection call: a (context, token)
  // pair under UMD, a token under Unigram. Code repeats a handful of fixed
  // tokens so often that counting every occurrence shifts the null mean by a
  // key-dependent amount.
  bool ignore_repeated = true;

  void Validate() const;
};

struct DetectionReport {
  size_t group_id = 0;
  size_t tokens = 0;       // T
  size_t green_count = 0;  // |x|_G
  double z = 0.0;
  double p = 1.0;
  bool decision = false;
  uint64_t grouping_seed = 0;
  std::vector<size_t> members;  // completion indices pooled in this report

  bool operator==(const DetectionReport&) const = default;
};

// Number of scored tokens in `tokens` (comments excluded by default).
size_t ScoredLength(const TokenStream& tokens, bool count_comments = false);

// Sum of green memberships; position 0 uses the boundary context, every
// later position the previous scored token.
size_t CountGreen(const TokenStream& tokens, WatermarkKey key,
                  const SchemeConfig& config, bool count_comments = false);

struct GreenTally {
  size_t tokens = 0;  // scored units, T
  size_t green = 0;
};

// Pools completions under the detector's scoring rules. Each completion
// starts from the boundary context; repeated units are skipped across the
// whole pool when `ignore_repeated` is set.
GreenTally TallyGreen(std::span<const TokenStream> completions,
                      WatermarkKey key, const SchemeConfig& scheme,
                      const DetectorConfig& det);

// Throws UndefinedStatisticError when tokens == 0.
double ZScoreUmd(size_t green_count, size_t tokens, UmdFormula formula,
                 double gamma);
double ZScoreUnigram(size_t green_count, size_t tokens, double gamma);

// One-sided upper tail of the standard normal: 0.5 * erfc(z / sqrt 2).
double PValue(double z);

// Statistic appropriate to the scheme: Unigram formula for Unigram, the
// configured UMD formula for UMD.
double ZScore(size_t green_count, size_t tokens, const SchemeConfig& scheme,
              const DetectorConfig& det);

bool Decide(double z, double p, const DetectorConfig& det);

DetectionReport Detect(const TokenStream& tokens, WatermarkKey key,
                       const SchemeConfig& scheme, const DetectorConfig& det);

// Shuffles completions with det.grouping_seed, pools consecutive runs of
// det.group_size (the last group may be smaller) and reports per group.
std::vector<DetectionReport> DetectGrouped(
    std::span<const TokenStream> completions, WatermarkKey key,
    const SchemeConfig& scheme, const DetectorConfig& det);

// CSV with the fixed header group_id,T,green_count,z,p,decision.
inline constexpr std::string_view kReportCsvHeader =
    "group_id,T,green_count,z,p,decision";
std::string ReportCsvRow(const DetectionReport& report);
void WriteReportsCsv(std::ostream& out,
                     std::span<const DetectionReport> reports);

}  // namespace wmlab

#endif  // WMLAB_DETECTOR_H_
