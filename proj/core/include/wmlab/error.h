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

#ifndef WMLAB_ERROR_H_
#define WMLAB_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wmlab {

// Broad failure categories. The CLI maps each onto a process exit code.
enum class ErrorCategory {
  kUsage,    // bad arguments or configuration
  kData,     // malformed input: lexing, parsing, corpus ingestion
  kRuntime,  // an external dependency (the Python interpreter) is missing
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCategory::kUsage, message) {}
};

class LexError : public Error {
 public:
  LexError(const std::string& message, size_t offset)
      : Error(ErrorCategory::kData,
              "lex error at byte " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, size_t line, size_t column)
      : Error(ErrorCategory::kData,
              "parse error at line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  size_t line() const { return line_; }
  size_t column() const { return column_; }

 private:
  size_t line_;
  size_t column_;
};

// z-statistic requested for an empty token sequence.
class UndefinedStatisticError : public Error {
 public:
  explicit UndefinedStatisticError(const std::string& message)
      : Error(ErrorCategory::kData, message) {}
};

class GenerationError : public Error {
 public:
  explicit GenerationError(const std::string& message)
      : Error(ErrorCategory::kInternal, message) {}
};

class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& message)
      : Error(ErrorCategory::kData, message) {}
};

class SiteMismatchError : public Error {
 public:
  explicit SiteMismatchError(const std::string& message)
      : Error(ErrorCategory::kUsage, message) {}
};

class LexiconExhaustedError : public Error {
 public:
  explicit LexiconExhaustedError(const std::string& message)
      : Error(ErrorCategory::kData, message) {}
};

class IngestError : public Error {
 public:
  explicit IngestError(const std::string& message)
      : Error(ErrorCategory::kData, message) {}
};

class RuntimeUnavailableError : public Error {
 public:
  explicit RuntimeUnavailableError(const std::string& message)
      : Error(ErrorCategory::kRuntime, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorCategory::kData, message) {}
};

}  // namespace wmlab

#endif  // WMLAB_ERROR_H_
