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
// Declarative graph-rewrite rules over the model and their JSON document
// format ("jmut-rule/1").

#ifndef JMUT_RULE_H_
#define JMUT_RULE_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jmut/graph.h"

namespace jmut {

inline constexpr std::string_view kRuleSchema = "jmut-rule/1";

enum class Role : uint8_t { kPreserve, kDelete, kCreate, kForbid };
const char* RoleName(Role role);

// Right-hand side of an attribute binding or assignment.
struct Term {
  enum class Kind : uint8_t { kLiteral, kVariable, kNegate };
  Kind kind = Kind::kLiteral;
  Value literal;
  std::string variable;

  static Term Literal(Value v) { return {Kind::kLiteral, std::move(v), {}}; }
  static Term Variable(std::string name) {
    return {Kind::kVariable, {}, std::move(name)};
  }
};

struct Expr {
  enum class Kind : uint8_t { kLiteral, kVariable, kAttribute, kCompare, kAnd };
  enum class Op : uint8_t { kEq, kNe, kLt, kLe, kGt, kGe };
  Kind kind = Kind::kLiteral;
  Op op = Op::kEq;
  Value literal;
  std::string name;       // variable, or node id for kAttribute
  std::string attribute;  // kAttribute
  std::vector<Expr> operands;
};

struct Condition {
  std::string source;
  Expr expr;
};

// Parses the condition language: comparisons (== != < <= > >=) between
// string/int literals, variables and node.attribute terms, joined by &&.
// Errors carry the offset inside `text`.
Expr ParseCondition(std::string_view text);

// Variable names and node ids an expression depends on.
void CollectVariables(const Expr& e, std::vector<std::string>& out);
void CollectNodeRefs(const Expr& e,
                     std::vector<std::pair<std::string, std::string>>& out);

using Lookup = std::function<std::optional<Value>(const Expr&)>;
// Truth value; unknown attributes make the expression false.
bool Evaluate(const Expr& e, const Lookup& lookup);

struct PatternNode {
  std::string id;
  NodeType type;
  Role role = Role::kPreserve;
  std::vector<std::pair<std::string, Term>> bindings;
  std::vector<std::pair<std::string, Term>> sets;  // preserve nodes only
};

struct PatternEdge {
  std::string from;
  std::string to;
  RelationKind relation = RelationKind::kClasses;
  Role role = Role::kPreserve;
  std::string Label() const;
};

struct ForbidPattern {
  std::vector<PatternNode> nodes;
  std::vector<PatternEdge> edges;
  std::vector<Condition> conditions;
};

struct Parameter {
  enum class Type : uint8_t { kString, kInt };
  std::string name;
  Type type = Type::kString;
};

struct Rule {
  std::string name;
  std::vector<Parameter> parameters;
  std::vector<PatternNode> nodes;
  std::vector<PatternEdge> edges;
  std::vector<Condition> conditions;
  std::vector<ForbidPattern> forbids;

  const PatternNode* FindNode(std::string_view id) const;
  const Parameter* FindParameter(std::string_view name) const;
  int CountRole(Role role) const;
};

struct Unit {
  std::string name;
  std::vector<std::string> steps;
  std::string mode = "applyFirstMatch";
};

struct OperatorInfo {
  std::string id;
  std::string category;
  std::string description;
  std::string inverse_of;
};

struct RuleDocument {
  std::optional<OperatorInfo> info;
  std::optional<Unit> unit;
  std::vector<Rule> rules;  // the single rule, or the unit's step rules

  const Rule* FindRule(std::string_view name) const;
};

// Throws RuleSyntaxError for malformed JSON or a malformed condition and
// IllFormedRule when a rule breaks a well-formedness invariant.
RuleDocument LoadRule(std::string_view document);

// Re-checks the invariants of an already built rule.
void CheckRule(const Rule& rule);

// Nodes that take part in matching (preserve and delete).
bool IsMatched(Role role);

}  // namespace jmut

#endif  // JMUT_RULE_H_
