// Copyright 2026 The qcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qcut {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A dimension or qubit count exceeds a configured cap.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Operands have incompatible dimensions.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A value violates a documented invariant (non-unitary matrix, POVM that
/// does not sum to the identity, bad register partition, ...).
class InvariantError : public Error {
  public:
    using Error::Error;
};

/// A decomposition term contains a factor that cannot be executed by the
/// sampler.
class UnsupportedTermError : public Error {
  public:
    using Error::Error;
};

/// Malformed textual input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
  public:
    ParseError(const std::string &what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

} // namespace qcut
