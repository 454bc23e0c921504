// Copyright 2026 The rnncov Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RNNCOV_ERROR_H_
#define RNNCOV_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rnncov {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. line() is 1-based; 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Data violates a type invariant (dimension mismatch, non-finite value...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Caller-supplied parameters are out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A quantity has no defined value for the given arguments, e.g. a transition
// distribution for an (state, input) pair never observed.
class UndefinedError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormatError : public Error {
 public:
  UnsupportedFormatError(const std::string& field, const std::string& what)
      : Error("unsupported format (" + field + "): " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// An audio transformation could not produce a valid clip.
class TransformError : public Error {
 public:
  using Error::Error;
};

}  // namespace rnncov

#endif  // RNNCOV_ERROR_H_
