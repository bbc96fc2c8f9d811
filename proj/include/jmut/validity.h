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

//
// The post-mutation gate: structural constraints plus frame inference.
//
//   C1  member references into the project resolve
//   C2  control-flow edges follow each instruction kind's contract
//   C3  no duplicate (name, descriptor) members in a class
//   C4  every non-interface class declares a constructor
//   C5  frame inference succeeds for every method with code
//   C6  superclass chains inside the project are acyclic

#ifndef JMUT_VALIDITY_H_
#define JMUT_VALIDITY_H_

#include <optional>
#include <string>
#include <vector>

#include "jmut/model.h"

namespace jmut {

struct Location {
  std::string class_name;
  std::string member;  // name + descriptor, empty for the class itself
  std::optional<std::size_t> instruction;  // layout index
  std::string ToString() const;
  bool operator==(const Location&) const = default;
};

struct Violation {
  std::string constraint;  // "C1" .. "C6"
  Location location;
  std::string message;
  // Class whose change can explain the violation besides the location's,
  // e.g. the owner a dangling reference points into.
  std::string related_class;
  // Set by CheckMutant: the violation touches a changed class.
  bool attributable = true;
};

struct ValidityReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  const char* verdict() const { return valid() ? "valid" : "invalid"; }
  // Constraint ids that fired, sorted and unique.
  std::vector<std::string> Constraints() const;
};

const char* ConstraintTitle(const std::string& id);

ValidityReport CheckProject(const Project& project);

// CheckProject(mutated), with each violation's `attributable` flag telling
// whether it involves a class that differs from `original`.
ValidityReport CheckMutant(const Project& original, const Project& mutated);

}  // namespace jmut

#endif  // JMUT_VALIDITY_H_
