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
// A deliberately naive matcher used as an oracle for FindMatches. Nodes are
// assigned in declaration order from full scans of the project; an edge is
// checked once both its ends are assigned and everything else is checked
// on complete assignments.

#ifndef JMUT_TESTS_BRUTE_FORCE_H_
#define JMUT_TESTS_BRUTE_FORCE_H_

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "jmut/engine.h"
#include "jmut/graph.h"
#include "jmut/mnemonic.h"
#include "jmut/rule.h"

namespace jmut::testing {

class BruteForce {
 public:
  BruteForce(const Rule& rule, const Project& project, ParamValues fixed)
      : rule_(rule), view_(project), fixed_(std::move(fixed)) {}

  std::vector<Match> Run() {
    std::vector<const PatternNode*> nodes;
    for (const auto& n : rule_.nodes) {
      if (IsMatched(n.role)) nodes.push_back(&n);
    }
    std::vector<const PatternEdge*> edges;
    for (const auto& e : rule_.edges) {
      if (IsMatched(e.role)) edges.push_back(&e);
    }
    std::map<std::string, ElementRef> assign;
    Enumerate(nodes, edges, 0, assign, [&] {
      ParamValues vars = fixed_;
      if (!Unify(nodes, assign, vars)) return false;
      for (const auto& c : rule_.conditions) {
        if (!Holds(c, assign, vars)) return false;
      }
      for (const auto& f : rule_.forbids) {
        if (ForbidFires(f, assign, vars)) return false;
      }
      Match m;
      m.rule = rule_.name;
      for (const auto& [id, e] : assign) m.binding.emplace(id, view_.KeyOf(e));
      m.values = vars;
      out_.push_back(std::move(m));
      return false;
    });
    std::sort(out_.begin(), out_.end(), MatchLess);
    return out_;
  }

 private:
  template <typename Done>
  bool Enumerate(const std::vector<const PatternNode*>& nodes,
                 const std::vector<const PatternEdge*>& edges, std::size_t i,
                 std::map<std::string, ElementRef>& assign, const Done& done) {
    if (i == nodes.size()) return done();
    const PatternNode& n = *nodes[i];
    for (ElementRef c : view_.All(n.type)) {
      bool taken = false;
      for (const auto& [id, e] : assign) taken = taken || e == c;
      if (taken || !LiteralsHold(n, c)) continue;
      assign[n.id] = c;
      bool ok = true;
      for (const PatternEdge* e : edges) {
        if (!assign.count(e->from) || !assign.count(e->to)) continue;
        if (e->from != n.id && e->to != n.id) continue;
        ok = ok && view_.Related(assign[e->from], e->relation, assign[e->to]);
      }
      if (ok && Enumerate(nodes, edges, i + 1, assign, done)) return true;
      assign.erase(n.id);
    }
    return false;
  }

  bool LiteralsHold(const PatternNode& n, ElementRef e) const {
    if (!view_.Matches(e, n.type)) return false;
    for (const auto& [attr, term] : n.bindings) {
      auto v = view_.Attribute(e, attr);
      if (!v) return false;
      if (term.kind == Term::Kind::kLiteral && *v != term.literal) return false;
    }
    return true;
  }

  // Variables first, then negated terms against the finished valuation.
  bool Unify(const std::vector<const PatternNode*>& nodes,
             const std::map<std::string, ElementRef>& assign,
             ParamValues& vars) const {
    for (const PatternNode* n : nodes) {
      for (const auto& [attr, term] : n->bindings) {
        if (term.kind != Term::Kind::kVariable) continue;
        Value v = *view_.Attribute(assign.at(n->id), attr);
        auto [it, fresh] = vars.emplace(term.variable, v);
        if (!fresh && it->second != v) return false;
      }
    }
    for (const PatternNode* n : nodes) {
      for (const auto& [attr, term] : n->bindings) {
        if (term.kind != Term::Kind::kNegate) continue;
        auto it = vars.find(term.variable);
        if (it == vars.end()) return false;
        auto* s = std::get_if<std::string>(&it->second);
        auto r = s ? RelationFromName(*s) : std::nullopt;
        if (!r) return false;
        Value want = std::string(RelationName(Negate(*r)));
        if (*view_.Attribute(assign.at(n->id), attr) != want) return false;
      }
    }
    return true;
  }

  bool Holds(const Condition& c, const std::map<std::string, ElementRef>& assign,
             const ParamValues& vars) const {
    return Evaluate(c.expr, [&](const Expr& e) -> std::optional<Value> {
      if (e.kind == Expr::Kind::kVariable) {
        auto it = vars.find(e.name);
        if (it == vars.end()) return std::nullopt;
        return it->second;
      }
      auto it = assign.find(e.name);
      if (it == assign.end()) return std::nullopt;
      return view_.Attribute(it->second, e.attribute);
    });
  }

  bool ForbidFires(const ForbidPattern& f,
                   const std::map<std::string, ElementRef>& main,
                   const ParamValues& vars) const {
    std::vector<const PatternNode*> nodes;
    for (const auto& n : f.nodes) nodes.push_back(&n);
    std::vector<const PatternEdge*> edges;
    for (const auto& e : f.edges) edges.push_back(&e);
    auto assign = main;
    auto* self = const_cast<BruteForce*>(this);
    return self->Enumerate(nodes, edges, 0, assign, [&] {
      ParamValues v = vars;
      if (!Unify(nodes, assign, v)) return false;
      for (const auto& c : f.conditions) {
        if (!Holds(c, assign, v)) return false;
      }
      return true;
    });
  }

  const Rule& rule_;
  ProjectView view_;
  ParamValues fixed_;
  std::vector<Match> out_;
};

inline std::vector<Match> BruteForceMatches(const Rule& rule,
                                            const Project& project,
                                            const ParamValues& fixed = {}) {
  return BruteForce(rule, project, fixed).Run();
}

}  // namespace jmut::testing

#endif  // JMUT_TESTS_BRUTE_FORCE_H_
