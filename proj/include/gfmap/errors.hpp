/*
  Copyright 2026 The gfmap Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef GFMAP_ERRORS_HPP
#define GFMAP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfmap {

// Root of every error raised by the library. The C API maps each subclass
// onto a gfm_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, std::string found);

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t offset_;
  std::string expected_;
  std::string found_;
};

// Evaluation outside the natural domain of a node (log of a nonpositive
// number, division by zero, ...). offset is the source offset of the node,
// or -1 for nodes that were synthesized by differentiation.
class EvalError : public Error {
 public:
  EvalError(const std::string& what, long offset);
  long offset() const noexcept { return offset_; }

 private:
  long offset_;
};

// Malformed map configuration (bad JSON, missing fields, unknown builtin).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotCriticallyFinite : public Error {
 public:
  using Error::Error;
};

class CycleDetected : public Error {
 public:
  using Error::Error;
};

class RootBracketFailure : public Error {
 public:
  using Error::Error;
};

class NestednessViolation : public Error {
 public:
  using Error::Error;
};

class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class AmbiguousAddress : public Error {
 public:
  using Error::Error;
};

class KneadingMismatch : public Error {
 public:
  using Error::Error;
};

class CardinalityMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace gfmap

#endif  // GFMAP_ERRORS_HPP
