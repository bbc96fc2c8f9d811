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
// Matching rules against a project and applying matches.

#ifndef JMUT_ENGINE_H_
#define JMUT_ENGINE_H_

#include <map>
#include <string>
#include <vector>

#include "jmut/graph.h"
#include "jmut/model.h"
#include "jmut/rule.h"

namespace jmut {

using ParamValues = std::map<std::string, Value>;

struct Match {
  std::string rule;
  std::map<std::string, ElementKey> binding;  // node id -> element
  ParamValues values;                         // parameters and variables

  const ElementKey& at(const std::string& node) const {
    return binding.at(node);
  }
  std::string ToString() const;
};

// All matches, ordered by the bound elements' (class, member, instruction
// index) taken node by node in id order.
std::vector<Match> FindMatches(const Rule& rule, const Project& project,
                               const ParamValues& fixed = {});

// Returns the rewritten copy; `project` is untouched.
Project ApplyMatch(const Rule& rule, const Match& match,
                   const Project& project);

// Runs every step on the previous step's output with its first match.
// Variables bound by earlier steps fix same-named parameters of later ones.
Project ApplyUnit(const Unit& unit, const std::vector<Rule>& rules,
                  const Project& project, const ParamValues& fixed = {});

// As ApplyUnit, but with the first step's match given.
Project ApplyUnitFrom(const Unit& unit, const std::vector<Rule>& rules,
                      const Project& project, const Match& first);

// Match ordering key, exposed for tests.
bool MatchLess(const Match& a, const Match& b);

}  // namespace jmut

#endif  // JMUT_ENGINE_H_
