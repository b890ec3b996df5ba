// Copyright 2026 The fcattack Authors.
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

#ifndef FCATTACK_ERRORS_H_
#define FCATTACK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fcattack {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; the message carries the line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Structurally valid input that violates a data invariant (duplicate ids,
// dangling references, unresolvable evidence).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration, including taxonomy conflicts such as a camouflage
// attack combined with an add-only repository constraint.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// An index was queried against a repository snapshot it was not built from.
class StaleIndexError : public Error {
 public:
  using Error::Error;
};

// The attack has nothing to work with on this input (no lexicon coverage,
// no eligible codepoints, no generator candidates).
class AttackInapplicable : public Error {
 public:
  using Error::Error;
};

}  // namespace fcattack

#endif  // FCATTACK_ERRORS_H_
