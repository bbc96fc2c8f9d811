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


#include <gtest/gtest.h>

#include <set>
#include <string>

#include "brute_force.h"
#include "jmut/catalog.h"
#include "jmut/engine.h"
#include "jmut/errors.h"
#include "jmut/rule.h"
#include "operator_homes.h"
#include "test_support.h"

namespace jmut {
namespace {

using testing::ClassNamed;
using testing::LoadFixture;
using testing::MethodNamed;

const Registry& Builtins() {
  static const Registry reg = Registry::Builtin();
  return reg;
}

const Rule& BuiltinRule(const std::string& id) {
  return Builtins().Get(id).entry_rule();
}

std::string Doc(const std::string& rule) {
  return R"({"schema": "jmut-rule/1", "rule": )" + rule + "}";
}

TEST(Condition, ParsesAndEvaluates) {
  Expr e = ParseCondition(R"(a.name != "<init>" && n >= 3)");
  ParamValues vars{{"n", int64_t{4}}};
  auto lookup = [&](const Expr& x) -> std::optional<Value> {
    if (x.kind == Expr::Kind::kVariable) {
      auto it = vars.find(x.name);
      if (it == vars.end()) return std::nullopt;
      return it->second;
    }
    if (x.name == "a" && x.attribute == "name") return Value("printY");
    return std::nullopt;
  };
  EXPECT_TRUE(Evaluate(e, lookup));
  vars["n"] = int64_t{2};
  EXPECT_FALSE(Evaluate(e, lookup));
  vars["n"] = std::string("x");  // mismatched types never order
  EXPECT_FALSE(Evaluate(e, lookup));
  EXPECT_TRUE(Evaluate(ParseCondition(R"(n != 3)"), lookup));
}

TEST(Condition, ReportsPosition) {
  try {
    ParseCondition("a == ");
    FAIL();
  } catch (const RuleSyntaxError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  EXPECT_THROW(ParseCondition("a == 1 &&"), RuleSyntaxError);
  EXPECT_THROW(ParseCondition("(a == 1"), RuleSyntaxError);
}

TEST(LoadRule, SyntaxErrors) {
  EXPECT_THROW(LoadRule(""), RuleSyntaxError);
  EXPECT_THROW(LoadRule("{\"schema\": "), RuleSyntaxError);
  EXPECT_THROW(LoadRule(R"({"schema": "jmut-rule/9", "rule": {}})"),
               RuleSyntaxError);
  EXPECT_THROW(LoadRule(Doc(R"({"name": "r", "nodes": 3})")), RuleSyntaxError);
  try {
    LoadRule("{\"schema\": \"jmut-rule/1\",\n  \"rule\": {,}}");
    FAIL();
  } catch (const RuleSyntaxError& e) {
    EXPECT_EQ(e.position(), 37u);
  }
}

TEST(LoadRule, IllFormedRules) {
  // A create edge into a deleted node.
  EXPECT_THROW(LoadRule(Doc(R"({"name": "r",
    "nodes": [{"id": "c", "modelType": "Clazz"},
              {"id": "m", "modelType": "Method", "role": "delete"},
              {"id": "f", "modelType": "Field", "role": "create",
               "attributeBindings": {"name": "x", "descriptor": "I"}}],
    "edges": [{"from": "c", "to": "m", "relation": "methods"},
              {"from": "c", "to": "f", "relation": "fields"},
              {"from": "m", "to": "f", "relation": "fields", "role": "create"}]})")),
               IllFormedRule);
  // Unknown attribute, unknown node type, dangling edge, unused parameter.
  EXPECT_THROW(LoadRule(Doc(R"({"name": "r",
    "nodes": [{"id": "c", "modelType": "Clazz",
               "attributeBindings": {"colour": "red"}}]})")),
               IllFormedRule);
  EXPECT_THROW(LoadRule(Doc(R"({"name": "r",
    "nodes": [{"id": "c", "modelType": "Klass"}]})")),
               IllFormedRule);
  EXPECT_THROW(LoadRule(Doc(R"({"name": "r",
    "nodes": [{"id": "c", "modelType": "Clazz"}],
    "edges": [{"from": "c", "to": "z", "relation": "methods"}]})")),
               IllFormedRule);
  EXPECT_THROW(LoadRule(Doc(R"({"name": "r",
    "parameters": [{"name": "p", "type": "string"}],
    "nodes": [{"id": "c", "modelType": "Clazz"}]})")),
               IllFormedRule);
  // A condition over a variable nothing binds.
  EXPECT_THROW(LoadRule(Doc(R"({"name": "r",
    "nodes": [{"id": "c", "modelType": "Clazz"}],
    "attributeConditions": ["q == 1"]})")),
               IllFormedRule);
}

TEST(LoadRule, EveryBuiltinIsWellFormed) {
  for (const auto* d : Builtins().List()) {
    for (const auto& r : d->document.rules) EXPECT_NO_THROW(CheckRule(r)) << d->id;
  }
}

// The Child/Parent example: exactly the overriding printY is found.
TEST(Matcher, OverridingMethodDeletionOnChildParent) {
  Project p = LoadFixture("inherit");
  const Rule& rule = BuiltinRule("overridingMethodDeletion");
  auto matches = FindMatches(rule, p);
  ASSERT_EQ(matches.size(), 1u);
  const Match& m = matches[0];
  EXPECT_EQ(m.at("child").class_name, "demo/Child");
  EXPECT_EQ(m.at("method").member_name, "printY");
  EXPECT_EQ(std::get<std::string>(m.values.at("superClassRef")), "demo/Parent");
  EXPECT_EQ(std::get<std::string>(m.values.at("name")), "printY");

  Project mutant = ApplyMatch(rule, m, p);
  const Clazz& child = ClassNamed(mutant, "demo/Child");
  ASSERT_EQ(child.methods.size(), 1u);
  EXPECT_EQ(child.methods[0].name, "<init>");
  EXPECT_EQ(ClassNamed(mutant, "demo/Parent"), ClassNamed(p, "demo/Parent"));
}

TEST(Matcher, NoMatchWithoutSubclass) {
  Project p = LoadFixture("inherit");
  std::erase_if(p.classes, [](const Clazz& c) { return c.name == "demo/Child"; });
  EXPECT_TRUE(FindMatches(BuiltinRule("overridingMethodDeletion"), p).empty());
}

TEST(Matcher, ForbidBlocksExistingOverride) {
  Project p = LoadFixture("inherit");
  // Child already overrides printY, so there is nothing to insert.
  EXPECT_TRUE(FindMatches(BuiltinRule("overridingMethodInsertion"), p).empty());
  Project q = ApplyMatch(BuiltinRule("overridingMethodDeletion"),
                         FindMatches(BuiltinRule("overridingMethodDeletion"), p)[0],
                         p);
  auto back = FindMatches(BuiltinRule("overridingMethodInsertion"), q);
  ASSERT_EQ(back.size(), 1u);
  Project r = ApplyMatch(BuiltinRule("overridingMethodInsertion"), back[0], q);
  const Method& m = MethodNamed(ClassNamed(r, "demo/Child"), "printY");
  EXPECT_EQ(m.descriptor, "()V");
  EXPECT_FALSE(m.instructions.empty());
}

TEST(Matcher, ParametersRestrictMatches) {
  Project p = LoadFixture("ops/api");
  const Rule& rule = BuiltinRule("replaceMethodCall");
  EXPECT_THROW(FindMatches(rule, p), IllFormedRule);  // nameB missing
  ParamValues params{{"owner", "java/lang/String"},
                     {"nameA", "toUpperCase"},
                     {"nameB", "toLowerCase"}};
  EXPECT_EQ(FindMatches(rule, p, params).size(), 2u);
  params["nameA"] = "trim";
  EXPECT_EQ(FindMatches(rule, p, params).size(), 1u);
  params["nameB"] = int64_t{1};
  EXPECT_THROW(FindMatches(rule, p, params), IllFormedRule);
}

TEST(Matcher, Deterministic) {
  Project p = LoadFixture("ops/arith");
  for (const char* id : {"intAddToSub", "longMulToDiv"}) {
    auto a = FindMatches(BuiltinRule(id), p);
    auto b = FindMatches(BuiltinRule(id), LoadFixture("ops/arith"));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].binding, b[i].binding);
      EXPECT_EQ(a[i].values, b[i].values);
    }
  }
}

// fieldVariableInitializationDeletion on User. Hand count from the
// fixture's <init>: aload_0/iload_1/putfield id, aload_0/aload_2/putfield
// username, aload_0/aload_3/putfield firstname, aload_0/aload 4/putfield
// lastname qualify; contacts and profile are initialized from `new`, not a
// parameter, and are not of a basic type.
TEST(Rewriter, FieldInitializationDeletionOnUser) {
  Project p = LoadFixture("whatsup");
  const Rule& rule = BuiltinRule("fieldVariableInitializationDeletion");
  auto matches = FindMatches(rule, p);
  ASSERT_EQ(matches.size(), 4u);
  std::set<std::string> fields;
  const Method& before = MethodNamed(ClassNamed(p, "app/User"), "<init>");
  for (const auto& m : matches) {
    fields.insert(std::get<std::string>(m.values.at("field")));
    EXPECT_EQ(m.at("ctor").class_name, "app/User");
    Project mutant = ApplyMatch(rule, m, p);
    const Method& after = MethodNamed(ClassNamed(mutant, "app/User"), "<init>");
    EXPECT_EQ(after.instructions.size() + 3, before.instructions.size());
    // The last deleted instruction is the putfield.
    std::size_t at = *before.IndexOf(m.at("store").insn);
    EXPECT_EQ(before.instructions[at].op.index(),
              before.instructions[*before.IndexOf(m.at("self").insn) + 2].op.index());
  }
  EXPECT_EQ(fields, (std::set<std::string>{"id", "username", "firstname",
                                           "lastname"}));
}

TEST(Rewriter, ApplyIsPure) {
  Project p = LoadFixture("ops/inh");
  const Project copy = p;
  for (const auto* d : Builtins().List()) {
    if (d->category != Category::kInheritance) continue;
    for (const auto& m : FindMatches(d->entry_rule(), p)) {
      ApplyMatch(d->entry_rule(), m, p);
    }
  }
  EXPECT_EQ(p, copy);
}

TEST(Rewriter, IdentityRuleKeepsTheGraph) {
  RuleDocument doc = LoadRule(Doc(R"({"name": "touch",
    "nodes": [{"id": "c", "modelType": "Clazz"},
              {"id": "m", "modelType": "Method"},
              {"id": "i", "modelType": "Instruction"}],
    "edges": [{"from": "c", "to": "m", "relation": "methods"},
              {"from": "m", "to": "i", "relation": "instructions"}]})"));
  Project p = LoadFixture("ops/arith");
  auto matches = FindMatches(doc.rules[0], p);
  EXPECT_GT(matches.size(), 20u);
  for (const auto& m : matches) {
    EXPECT_TRUE(Isomorphic(ApplyMatch(doc.rules[0], m, p), p));
  }
}

TEST(Rewriter, StaleMatch) {
  Project p = LoadFixture("inherit");
  const Rule& rule = BuiltinRule("overridingMethodDeletion");
  Match m = FindMatches(rule, p)[0];
  Project mutant = ApplyMatch(rule, m, p);
  EXPECT_THROW(ApplyMatch(rule, m, mutant), StaleMatch);
  Match other = m;
  other.rule = "someOtherRule";
  EXPECT_THROW(ApplyMatch(rule, other, p), StaleMatch);
}

const char* kUnit = R"({"schema": "jmut-rule/1",
  "unit": {"name": "dropBoth", "steps": ["dropOverride", "dropOriginal"]},
  "rules": [
    {"name": "dropOverride",
     "nodes": [{"id": "c", "modelType": "Clazz"},
               {"id": "s", "modelType": "Clazz"},
               {"id": "o", "modelType": "Method",
                "attributeBindings": {"name": "$name", "descriptor": "$desc"}},
               {"id": "m", "modelType": "Method", "role": "delete",
                "attributeBindings": {"name": "$name", "descriptor": "$desc"}}],
     "edges": [{"from": "c", "to": "s", "relation": "superclass"},
               {"from": "s", "to": "o", "relation": "methods"},
               {"from": "c", "to": "m", "relation": "methods"}],
     "attributeConditions": ["name != \"<init>\""]},
    {"name": "dropOriginal",
     "parameters": [{"name": "name", "type": "string"}],
     "nodes": [{"id": "c", "modelType": "Clazz"},
               {"id": "m", "modelType": "Method", "role": "delete",
                "attributeBindings": {"name": "$name", "descriptor": "DESC"}}],
     "edges": [{"from": "c", "to": "m", "relation": "methods"}]}]})";

TEST(Units, ValuesFlowBetweenSteps) {
  std::string text = kUnit;
  text.replace(text.find("DESC"), 4, "()V");
  RuleDocument doc = LoadRule(text);
  ASSERT_TRUE(doc.unit);
  Project p = LoadFixture("inherit");
  Project out = ApplyUnit(*doc.unit, doc.rules, p);
  EXPECT_EQ(ClassNamed(out, "demo/Child").methods.size(), 1u);
  EXPECT_EQ(ClassNamed(out, "demo/Parent").methods.size(), 1u);
}

TEST(Units, FailingStepIsReported) {
  std::string text = kUnit;
  text.replace(text.find("DESC"), 4, "(I)V");
  RuleDocument doc = LoadRule(text);
  Project p = LoadFixture("inherit");
  try {
    ApplyUnit(*doc.unit, doc.rules, p);
    FAIL();
  } catch (const UnitStepFailed& e) {
    EXPECT_EQ(e.step(), 1u);
  }
}

// FindMatches agrees with naive enumeration for every builtin operator on
// every small fixture (at most four classes).
TEST(Matcher, AgreesWithBruteForce) {
  std::vector<std::string> fixtures = {
      "inherit",     "ops/arith",    "ops/rel",     "ops/inh", "ops/polynew",
      "ops/polydecl", "ops/polyover", "ops/js", "ops/coll", "ops/api"};
  std::size_t total = 0;
  for (const auto& fixture : fixtures) {
    Project p = LoadFixture(fixture);
    ASSERT_LE(p.classes.size(), 4u);
    for (const auto* d : Builtins().List()) {
      for (const auto& params : testing::ParamSets(testing::Homes().at(d->id))) {
        SCOPED_TRACE(d->id + " on " + fixture);
        const Rule& rule = d->entry_rule();
        auto fast = FindMatches(rule, p, params);
        auto slow = testing::BruteForceMatches(rule, p, params);
        ASSERT_EQ(fast.size(), slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
          EXPECT_EQ(fast[i].binding, slow[i].binding);
          EXPECT_EQ(fast[i].values, slow[i].values);
        }
        total += fast.size();
      }
    }
  }
  EXPECT_GT(total, 100u);
}

}  // namespace
}  // namespace jmut
