// Copyright 2026 The mtsa Authors.
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

#ifndef MTSA_ERRORS_H_
#define MTSA_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtsa {

// Every failure raised by the library derives from Error so callers (and the
// CLI exit-code mapping) can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input outside an operation's mathematical domain (empty vector, etc).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid hyperparameter or configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             const std::string& source = "")
      : Error((source.empty() ? "" : source + ": ") +
              (line == 0 ? "" : "line " + std::to_string(line) + ": ") + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input whose content violates a data contract.
class DataError : public Error {
 public:
  using Error::Error;
};

// Precomputed contextual layers do not line up with the corpus.
class AlignmentError : public DataError {
 public:
  AlignmentError(const std::string& what, std::size_t sentence)
      : DataError("sentence " + std::to_string(sentence) + ": " + what),
        sentence_(sentence) {}
  std::size_t sentence() const { return sentence_; }

 private:
  std::size_t sentence_;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

// No tag path survives the transition mask.
class InfeasibleLatticeError : public Error {
 public:
  using Error::Error;
};

// A statistical test has no information to work with.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

// API misuse, e.g. asking an STL model for auxiliary emissions.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtsa

#endif  // MTSA_ERRORS_H_
