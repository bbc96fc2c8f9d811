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


#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "jmut/engine.h"
#include "jmut/errors.h"
#include "jmut/mnemonic.h"

namespace jmut {

namespace {

// A search order over pattern nodes. Each step either walks an edge from
// an already placed node or scans all elements of the node's type.
struct Plan {
  struct Step {
    const PatternNode* node = nullptr;
    const PatternEdge* via = nullptr;
    bool forward = true;  // via->from is placed; otherwise via->to is
    std::vector<const PatternEdge*> checks;
    std::vector<const Condition*> conditions;
  };
  std::vector<Step> steps;
  std::vector<const Condition*> upfront;
};

Plan MakePlan(const std::vector<const PatternNode*>& nodes,
              const std::vector<const PatternEdge*>& edges,
              const std::vector<const Condition*>& conditions,
              std::set<std::string> placed, std::set<std::string> vars) {
  Plan plan;
  std::set<std::string> have_nodes = placed;
  std::set<std::string> have_vars = vars;
  std::vector<const PatternNode*> todo = nodes;
  while (!todo.empty()) {
    std::size_t pick = 0;
    const PatternEdge* via = nullptr;
    bool forward = true;
    for (std::size_t i = 0; i < todo.size() && !via; ++i) {
      for (const PatternEdge* e : edges) {
        if (e->to == todo[i]->id && e->from != e->to && placed.count(e->from)) {
          pick = i, via = e, forward = true;
          break;
        }
        if (e->from == todo[i]->id && e->from != e->to && placed.count(e->to)) {
          pick = i, via = e, forward = false;
          break;
        }
      }
    }
    Plan::Step step;
    step.node = todo[pick];
    step.via = via;
    step.forward = forward;
    todo.erase(todo.begin() + static_cast<std::ptrdiff_t>(pick));
    placed.insert(step.node->id);
    for (const auto& [attr, term] : step.node->bindings) {
      if (term.kind == Term::Kind::kVariable) vars.insert(term.variable);
    }
    for (const PatternEdge* e : edges) {
      bool touches = e->from == step.node->id || e->to == step.node->id;
      if (touches && placed.count(e->from) && placed.count(e->to)) {
        step.checks.push_back(e);
      }
    }
    plan.steps.push_back(std::move(step));
  }

  // Attach each condition to the first step after which it is decidable.
  auto ready = [&](const Condition& c) {
    std::vector<std::string> vs;
    CollectVariables(c.expr, vs);
    for (const auto& v : vs) {
      if (!have_vars.count(v)) return false;
    }
    std::vector<std::pair<std::string, std::string>> refs;
    CollectNodeRefs(c.expr, refs);
    for (const auto& r : refs) {
      if (!have_nodes.count(r.first)) return false;
    }
    return true;
  };
  std::vector<const Condition*> pending = conditions;
  auto drain = [&](std::vector<const Condition*>& into) {
    for (auto it = pending.begin(); it != pending.end();) {
      if (ready(**it)) {
        into.push_back(*it);
        it = pending.erase(it);
      } else {
        ++it;
      }
    }
  };
  drain(plan.upfront);
  for (auto& step : plan.steps) {
    have_nodes.insert(step.node->id);
    for (const auto& [attr, term] : step.node->bindings) {
      if (term.kind == Term::Kind::kVariable) have_vars.insert(term.variable);
    }
    drain(step.conditions);
  }
  // Anything left references an unbound variable and can never hold.
  if (!pending.empty()) {
    if (plan.steps.empty()) {
      plan.upfront.insert(plan.upfront.end(), pending.begin(), pending.end());
    } else {
      auto& last = plan.steps.back().conditions;
      last.insert(last.end(), pending.begin(), pending.end());
    }
  }
  return plan;
}

class Search {
 public:
  Search(const ProjectView& view, std::map<std::string, ElementRef>& bound,
         std::set<ElementRef>& used, ParamValues& vars)
      : view_(view), bound_(bound), used_(used), vars_(vars) {}

  // Calls `done` for every completion; stops early when it returns true.
  bool Run(const Plan& plan, const std::function<bool()>& done) {
    for (const Condition* c : plan.upfront) {
      if (!Holds(*c)) return false;
    }
    return Step(plan, 0, done);
  }

 private:
  bool Holds(const Condition& c) const {
    return Evaluate(c.expr, [this](const Expr& e) -> std::optional<Value> {
      if (e.kind == Expr::Kind::kVariable) {
        auto it = vars_.find(e.name);
        if (it == vars_.end()) return std::nullopt;
        return it->second;
      }
      auto it = bound_.find(e.name);
      if (it == bound_.end()) return std::nullopt;
      return view_.Attribute(it->second, e.attribute);
    });
  }

  bool Step(const Plan& plan, std::size_t i,
            const std::function<bool()>& done) {
    if (i == plan.steps.size()) return done();
    const Plan::Step& step = plan.steps[i];
    std::vector<ElementRef> candidates;
    if (step.via) {
      if (step.forward) {
        candidates = view_.Targets(bound_.at(step.via->from), step.via->relation);
      } else {
        candidates = view_.Sources(step.via->relation, bound_.at(step.via->to));
      }
    } else {
      candidates = view_.All(step.node->type);
    }
    for (ElementRef c : candidates) {
      if (used_.count(c) || !view_.Matches(c, step.node->type)) continue;
      std::vector<std::string> fresh;
      if (Bind(*step.node, c, fresh)) {
        bound_[step.node->id] = c;
        used_.insert(c);
        bool ok = true;
        for (const PatternEdge* e : step.checks) {
          if (!view_.Related(bound_.at(e->from), e->relation,
                             bound_.at(e->to))) {
            ok = false;
            break;
          }
        }
        for (std::size_t k = 0; ok && k < step.conditions.size(); ++k) {
          ok = Holds(*step.conditions[k]);
        }
        bool stop = ok && Step(plan, i + 1, done);
        used_.erase(c);
        bound_.erase(step.node->id);
        for (const auto& v : fresh) vars_.erase(v);
        if (stop) return true;
      } else {
        for (const auto& v : fresh) vars_.erase(v);
      }
    }
    return false;
  }

  bool Bind(const PatternNode& node, ElementRef e,
            std::vector<std::string>& fresh) {
    for (const auto& [attr, term] : node.bindings) {
      auto value = view_.Attribute(e, attr);
      if (!value) return false;
      switch (term.kind) {
        case Term::Kind::kLiteral:
          if (*value != term.literal) return false;
          break;
        case Term::Kind::kVariable: {
          auto it = vars_.find(term.variable);
          if (it == vars_.end()) {
            vars_.emplace(term.variable, *value);
            fresh.push_back(term.variable);
          } else if (it->second != *value) {
            return false;
          }
          break;
        }
        case Term::Kind::kNegate: {
          auto it = vars_.find(term.variable);
          auto* s = it == vars_.end() ? nullptr
                                      : std::get_if<std::string>(&it->second);
          auto r = s ? RelationFromName(*s) : std::nullopt;
          if (!r || *value != Value(std::string(RelationName(Negate(*r))))) {
            return false;
          }
          break;
        }
      }
    }
    return true;
  }

  const ProjectView& view_;
  std::map<std::string, ElementRef>& bound_;
  std::set<ElementRef>& used_;
  ParamValues& vars_;
};

auto KeyTuple(const ElementKey& k) {
  return std::tie(k.class_name, k.member_name, k.member_descriptor,
                  k.insn_index, k.type);
}

}  // namespace

std::string Match::ToString() const {
  std::string out = rule + " {";
  bool first = true;
  for (const auto& [id, key] : binding) {
    out += (first ? " " : ", ") + id + "=" + key.ToString();
    first = false;
  }
  return out + " }";
}

bool MatchLess(const Match& a, const Match& b) {
  auto ia = a.binding.begin();
  auto ib = b.binding.begin();
  for (; ia != a.binding.end() && ib != b.binding.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    auto ka = KeyTuple(ia->second);
    auto kb = KeyTuple(ib->second);
    if (ka != kb) return ka < kb;
  }
  if (a.binding.size() != b.binding.size()) {
    return a.binding.size() < b.binding.size();
  }
  return a.values < b.values;
}

std::vector<Match> FindMatches(const Rule& rule, const Project& project,
                               const ParamValues& fixed) {
  ParamValues vars;
  std::set<std::string> matched_vars;
  for (const auto& n : rule.nodes) {
    if (!IsMatched(n.role)) continue;
    for (const auto& [attr, term] : n.bindings) {
      if (term.kind == Term::Kind::kVariable) matched_vars.insert(term.variable);
    }
  }
  for (const auto& p : rule.parameters) {
    auto it = fixed.find(p.name);
    if (it == fixed.end()) {
      if (!matched_vars.count(p.name)) {
        throw IllFormedRule("rule '" + rule.name + "': parameter '" + p.name +
                            "' needs a value");
      }
      continue;
    }
    bool is_int = std::holds_alternative<int64_t>(it->second);
    if (is_int != (p.type == Parameter::Type::kInt)) {
      throw IllFormedRule("rule '" + rule.name + "': parameter '" + p.name +
                          "' has the wrong type");
    }
    vars.emplace(p.name, it->second);
  }

  std::vector<const PatternNode*> nodes;
  for (const auto& n : rule.nodes) {
    if (IsMatched(n.role)) nodes.push_back(&n);
  }
  std::vector<const PatternEdge*> edges;
  for (const auto& e : rule.edges) {
    if (IsMatched(e.role)) edges.push_back(&e);
  }
  std::vector<const Condition*> conditions;
  for (const auto& c : rule.conditions) conditions.push_back(&c);

  std::set<std::string> fixed_vars;
  for (const auto& [k, v] : vars) fixed_vars.insert(k);
  Plan plan = MakePlan(nodes, edges, conditions, {}, fixed_vars);

  std::set<std::string> main_ids;
  for (const PatternNode* n : nodes) main_ids.insert(n->id);
  std::set<std::string> all_vars = fixed_vars;
  all_vars.insert(matched_vars.begin(), matched_vars.end());
  std::vector<Plan> forbid_plans;
  for (const auto& f : rule.forbids) {
    std::vector<const PatternNode*> fn;
    for (const auto& n : f.nodes) fn.push_back(&n);
    std::vector<const PatternEdge*> fe;
    for (const auto& e : f.edges) fe.push_back(&e);
    std::vector<const Condition*> fc;
    for (const auto& c : f.conditions) fc.push_back(&c);
    forbid_plans.push_back(MakePlan(fn, fe, fc, main_ids, all_vars));
  }

  ProjectView view(project);
  std::map<std::string, ElementRef> bound;
  std::set<ElementRef> used;
  Search search(view, bound, used, vars);
  std::vector<Match> out;
  search.Run(plan, [&] {
    for (const Plan& fp : forbid_plans) {
      if (search.Run(fp, [] { return true; })) return false;
    }
    Match m;
    m.rule = rule.name;
    for (const auto& [id, e] : bound) m.binding.emplace(id, view.KeyOf(e));
    m.values = vars;
    out.push_back(std::move(m));
    return false;
  });
  std::stable_sort(out.begin(), out.end(), MatchLess);
  return out;
}

}  // namespace jmut
