// Copyright 2026 The khm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace khm {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. Carries the byte offset of the failure and the
/// tokens that would have been accepted at that position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset,
              std::vector<std::string> expected)
      : Error(what), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// File is not structurally well formed (bad JSON, wrong shape, bad types).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// File is well formed but internally inconsistent (dangling state id,
/// empty state set, duplicate state id, label outside the alphabet).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownState : public Error {
 public:
  using Error::Error;
};

class UnknownAction : public Error {
 public:
  using Error::Error;
};

class UnknownSchema : public Error {
 public:
  using Error::Error;
};

/// Countermodel search ran out of its model budget before exhausting the
/// requested bounds.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t models_checked)
      : Error(what), models_checked_(models_checked) {}

  std::uint64_t models_checked() const { return models_checked_; }

 private:
  std::uint64_t models_checked_;
};

}  // namespace khm
