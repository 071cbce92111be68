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

#ifndef WMLAB_PYTHON_RUNTIME_H_
#define WMLAB_PYTHON_RUNTIME_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wmlab {

// One program to execute: `entry` is called once per argument tuple, each
// tuple written as a Python literal such as "(1, 2)".
struct ExecJob {
  std::string source;
  std::string entry;
  std::vector<std::string> args;
};

enum class ExecStatus { kOk, kTimeout, kError };

std::string_view ExecStatusName(ExecStatus status);

struct ExecResult {
  ExecStatus status = ExecStatus::kOk;
  std::vector<std::string> values;  // repr() of each return value when kOk
  std::string message;              // exception text when kError
};

inline constexpr double kDefaultExecTimeoutSeconds = 5.0;
inline constexpr const char* kPythonEnvVar = "WMLAB_PYTHON";

// External CPython interpreter driven through a fixed script: jobs go in as
// JSON on a file, results come back as JSON on stdout. Printed output of the
// programs is discarded.
class PythonRuntime {
 public:
  // Resolution order: `flag`, then $WMLAB_PYTHON, then python3 on PATH.
  // Throws RuntimeUnavailableError when no working Python 3 is found.
  static PythonRuntime Discover(const std::optional<std::string>& flag = {});

  const std::string& executable() const { return executable_; }

  // Each call of each job is limited to `timeout_seconds`. Throws
  // RuntimeUnavailableError if the interpreter dies or hangs as a whole.
  std::vector<ExecResult> Run(std::span<const ExecJob> jobs,
                              double timeout_seconds = kDefaultExecTimeoutSeconds) const;

 private:
  explicit PythonRuntime(std::string executable) : executable_(std::move(executable)) {}
  std::string executable_;
};

}  // namespace wmlab

#endif  // WMLAB_PYTHON_RUNTIME_H_
