// Copyright 2026 The FedCAV Authors. All rights reserved.
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

#ifndef FEDCAV_BASE_ERROR_H_
#define FEDCAV_BASE_ERROR_H_

#include <stdexcept>
#include <string>

namespace fedcav {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  // Re-raise with a prefix (typically the file name), keeping line().
  ParseError(const std::string& prefix, const ParseError& inner)
      : Error(prefix + inner.what()), line_(inner.line()) {}
  int line() const { return line_; }

 private:
  int line_;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dimension or architecture mismatch between containers.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf appeared where a finite value is required (training divergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

// Operation called in the wrong lifecycle state (e.g. step after done).
class StateError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

// A requested scenario cannot be realized on the network.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedcav

#define FEDCAV_CHECK(cond, ExcType, msg)        \
  do {                                          \
    if (!(cond)) throw ExcType(std::string(msg)); \
  } while (0)

#endif  // FEDCAV_BASE_ERROR_H_
