// Copyright 2026 The jmut Authors
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

#ifndef JMUT_ERRORS_H_
#define JMUT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace jmut {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedClassFile : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersion : public Error {
 public:
  using Error::Error;
};

class DuplicateClassName : public Error {
 public:
  using Error::Error;
};

// Stack-frame inference failed; the class must not be emitted.
class UnverifiableMethod : public Error {
 public:
  using Error::Error;
};

class ForeignInstruction : public Error {
 public:
  using Error::Error;
};

class RuleSyntaxError : public Error {
 public:
  RuleSyntaxError(std::size_t position, const std::string& message)
      : Error("at offset " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class IllFormedRule : public Error {
 public:
  using Error::Error;
};

class StaleMatch : public Error {
 public:
  using Error::Error;
};

class UnitStepFailed : public Error {
 public:
  explicit UnitStepFailed(std::size_t step)
      : Error("unit step " + std::to_string(step) + " has no match"),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class DuplicateOperatorId : public Error {
 public:
  using Error::Error;
};

class UnknownOperator : public Error {
 public:
  using Error::Error;
};

class BaselineFailed : public Error {
 public:
  BaselineFailed(const std::string& message, std::string output)
      : Error(message), output_(std::move(output)) {}
  const std::string& output() const { return output_; }

 private:
  std::string output_;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class WorkspaceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace jmut

#endif  // JMUT_ERRORS_H_
