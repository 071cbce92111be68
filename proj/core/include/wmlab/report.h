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

#ifndef WMLAB_REPORT_H_
#define WMLAB_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmlab/harness.h"

namespace wmlab {

inline constexpr std::string_view kTrialsCsvHeader =
    "trial_id,repetition,seed,scheme,transform,d,watermarked,programs,"
    "tokens_before,tokens_after,token_change,T,green_count,z,p,decision,"
    "equivalence,error";
inline constexpr std::string_view kSummaryCsvHeader =
    "scheme,transform,d,watermarked,detected,controls,false_alarms,failed,"
    "tpr,fpr,mean_token_change,tpr_mean,tpr_stddev,fpr_mean,fpr_stddev,"
    "equivalence_checked,equivalence_equal,equivalence_timeout";
inline constexpr std::string_view kCurveCsvHeader = "d,scheme,transform,tpr,fpr";

// Reals use %.17g so a round trip is exact; undefined rates are "NA".
void WriteTrialsCsv(std::ostream& out, std::span<const TrialRecord> records);
// Throws IoError on a malformed file.
std::vector<TrialRecord> ReadTrialsCsv(std::istream& in);
void WriteSummaryCsv(std::ostream& out, std::span<const RateSummary> summaries);
void WriteCurveCsv(std::ostream& out, std::span<const RateSummary> summaries);

// Token-change and detection tables, one row per (scheme, transform) in the
// order the summaries list them; one column per d.
std::string RenderMarkdown(std::span<const RateSummary> summaries);

// Writes trials.csv, summary.csv, curve.csv and report.md into `dir`,
// creating it if needed. Throws IoError naming the path.
void EmitReport(const std::filesystem::path& dir, std::span<const RateSummary> summaries,
                std::span<const TrialRecord> records);

}  // namespace wmlab

#endif  // WMLAB_REPORT_H_
