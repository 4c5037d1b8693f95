// Copyright 2026 The AFLite Authors.
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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace aflite {

// Base class for every failure raised by the library. Carries the module
// that raised it so the CLI can print a structured diagnostic.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const { return module_; }

  // Filtering phase during which the failure happened, if any.
  const std::optional<std::size_t>& phase() const { return phase_; }
  void set_phase(std::size_t phase) { phase_ = phase; }

 private:
  std::string module_;
  std::optional<std::size_t> phase_;
};

// Malformed arguments, non-finite values, dimension mismatches.
class InputError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition on internal bookkeeping.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InvalidPartition : public Error {
 public:
  using Error::Error;
};

// Training set holds fewer than two classes.
class DegenerateTraining : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed its budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string module, const std::string& message,
                 unsigned long long required)
      : Error(std::move(module), message), required_(required) {}
  unsigned long long required() const { return required_; }

 private:
  unsigned long long required_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error("io", "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("cli", message) {}
};

class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& message)
      : Error("evaluation", message) {}
};

}  // namespace aflite
