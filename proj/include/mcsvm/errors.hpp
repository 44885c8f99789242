// Copyright 2026 The mcsvm Authors.
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

#ifndef MCSVM_ERRORS_HPP_
#define MCSVM_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcsvm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the LIBSVM reader. `line()` is 1-based; 0 when the error is not
/// tied to a line (e.g. an empty file).
class ParseError : public Error {
 public:
  enum class Kind { Malformed, NonAscendingIndices, DuplicateIndex, NonFinite, EmptyDataset };

  ParseError(Kind kind, std::size_t line, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

class ModelFormatError : public Error {
 public:
  enum class Kind { BadHeader, Truncated, Corrupt };

  ModelFormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Solver precondition violated by the caller (bad config, unsynced state, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Connection-level failure: refused connection, peer hang-up, short read.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Well-formed bytes that violate the message protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace mcsvm

#endif  // MCSVM_ERRORS_HPP_
