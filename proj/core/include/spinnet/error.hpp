// Copyright 2026 The spinnet Authors
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
#include <stdexcept>
#include <string>

namespace spinnet {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is well-formed but outside the mathematical domain of the operation
/// (violated triad, invalid node id, non-unitary matrix, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `position()` is the 0-based byte offset of the
/// offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A request would exceed a hard implementation limit (graph size, factorial
/// table size).
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinnet
