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


#include "jmut/rule.h"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "jmut/errors.h"

namespace jmut {

using Json = nlohmann::ordered_json;

const char* RoleName(Role role) {
  switch (role) {
    case Role::kPreserve: return "preserve";
    case Role::kDelete: return "delete";
    case Role::kCreate: return "create";
    case Role::kForbid: return "forbid";
  }
  return "?";
}

bool IsMatched(Role role) {
  return role == Role::kPreserve || role == Role::kDelete;
}

std::string PatternEdge::Label() const {
  return from + " -" + RelationKindName(relation) + "-> " + to;
}

const PatternNode* Rule::FindNode(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const Parameter* Rule::FindParameter(std::string_view name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

int Rule::CountRole(Role role) const {
  return static_cast<int>(std::count_if(
      nodes.begin(), nodes.end(),
      [role](const PatternNode& n) { return n.role == role; }));
}

const Rule* RuleDocument::FindRule(std::string_view name) const {
  for (const auto& r : rules) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

namespace {

[[noreturn]] void Shape(const std::string& path, const std::string& what) {
  throw RuleSyntaxError(0, path + ": " + what);
}

[[noreturn]] void Ill(const std::string& rule, const std::string& what) {
  throw IllFormedRule("rule '" + rule + "': " + what);
}

const Json& Require(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) Shape(path, std::string("missing \"") + key + "\"");
  return *it;
}

std::string String(const Json& j, const std::string& path) {
  if (!j.is_string()) Shape(path, "expected a string");
  return j.get<std::string>();
}

const Json& Array(const Json& j, const std::string& path) {
  if (!j.is_array()) Shape(path, "expected an array");
  return j;
}

const Json& Object(const Json& j, const std::string& path) {
  if (!j.is_object()) Shape(path, "expected an object");
  return j;
}

bool IsIdentifier(std::string_view s) {
  if (s.empty()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool ok = std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
              (i > 0 && std::isdigit(static_cast<unsigned char>(c)));
    if (!ok) return false;
  }
  return true;
}

Term ParseTerm(const Json& j, const std::string& path) {
  if (j.is_boolean()) return Term::Literal(Value(int64_t{j.get<bool>()}));
  if (j.is_number_integer()) return Term::Literal(Value(j.get<int64_t>()));
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.starts_with("$$")) return Term::Literal(Value(s.substr(1)));
    if (s.starts_with("$")) {
      if (!IsIdentifier(s.substr(1))) Shape(path, "bad variable name");
      return Term::Variable(s.substr(1));
    }
    return Term::Literal(Value(std::move(s)));
  }
  if (j.is_object() && j.size() == 1 && j.contains("negate")) {
    std::string s = String(j["negate"], path + "/negate");
    if (!s.starts_with("$") || !IsIdentifier(s.substr(1))) {
      Shape(path, "negate expects a variable");
    }
    Term t = Term::Variable(s.substr(1));
    t.kind = Term::Kind::kNegate;
    return t;
  }
  Shape(path, "expected a literal, \"$variable\" or {\"negate\": ...}");
}

Role ParseRole(const Json& j, const std::string& path) {
  std::string s = String(j, path);
  if (s == "preserve") return Role::kPreserve;
  if (s == "delete") return Role::kDelete;
  if (s == "create") return Role::kCreate;
  if (s == "forbid") return Role::kForbid;
  Shape(path, "unknown role '" + s + "'");
}

std::vector<std::pair<std::string, Term>> ParseTerms(const Json& j,
                                                     const std::string& path) {
  std::vector<std::pair<std::string, Term>> out;
  for (const auto& [key, value] : Object(j, path).items()) {
    out.emplace_back(key, ParseTerm(value, path + "/" + key));
  }
  return out;
}

PatternNode ParseNode(const Json& j, const std::string& path, bool forbid) {
  Object(j, path);
  PatternNode n;
  n.id = String(Require(j, "id", path), path + "/id");
  std::string type = String(Require(j, "modelType", path), path + "/modelType");
  auto t = NodeTypeFromName(type);
  if (!t) throw IllFormedRule(path + "/modelType: unknown model type '" + type + "'");
  n.type = *t;
  n.role = forbid ? Role::kForbid : Role::kPreserve;
  if (j.contains("role")) n.role = ParseRole(j["role"], path + "/role");
  if (j.contains("attributeBindings")) {
    n.bindings = ParseTerms(j["attributeBindings"], path + "/attributeBindings");
  }
  if (j.contains("set")) n.sets = ParseTerms(j["set"], path + "/set");
  return n;
}

PatternEdge ParseEdge(const Json& j, const std::string& path,
                      const std::vector<PatternNode>& nodes,
                      const std::vector<PatternNode>* outer, bool forbid) {
  Object(j, path);
  PatternEdge e;
  e.from = String(Require(j, "from", path), path + "/from");
  e.to = String(Require(j, "to", path), path + "/to");
  std::string rel = String(Require(j, "relation", path), path + "/relation");
  auto r = RelationKindFromName(rel);
  if (!r) Shape(path + "/relation", "unknown relation '" + rel + "'");
  e.relation = *r;
  if (j.contains("role")) {
    e.role = ParseRole(j["role"], path + "/role");
    return e;
  }
  if (forbid) {
    e.role = Role::kForbid;
    return e;
  }
  auto role_of = [&](const std::string& id) -> std::optional<Role> {
    for (const auto& n : nodes) {
      if (n.id == id) return n.role;
    }
    if (outer) {
      for (const auto& n : *outer) {
        if (n.id == id) return n.role;
      }
    }
    return std::nullopt;
  };
  auto a = role_of(e.from);
  auto b = role_of(e.to);
  if (a == Role::kCreate || b == Role::kCreate) {
    e.role = Role::kCreate;
  } else if (a == Role::kDelete || b == Role::kDelete) {
    e.role = Role::kDelete;
  } else {
    e.role = Role::kPreserve;
  }
  return e;
}

std::vector<Condition> ParseConditions(const Json& j, const std::string& path) {
  std::vector<Condition> out;
  std::size_t i = 0;
  for (const auto& c : Array(j, path)) {
    std::string p = path + "/" + std::to_string(i++);
    Condition cond;
    cond.source = String(c, p);
    try {
      cond.expr = ParseCondition(cond.source);
    } catch (const RuleSyntaxError& e) {
      throw RuleSyntaxError(e.position(), p + ": " + e.what());
    }
    out.push_back(std::move(cond));
  }
  return out;
}

Rule ParseRuleObject(const Json& j, const std::string& path) {
  Object(j, path);
  Rule rule;
  rule.name = String(Require(j, "name", path), path + "/name");
  if (j.contains("parameters")) {
    std::size_t i = 0;
    for (const auto& p : Array(j["parameters"], path + "/parameters")) {
      std::string pp = path + "/parameters/" + std::to_string(i++);
      Object(p, pp);
      Parameter param;
      param.name = String(Require(p, "name", pp), pp + "/name");
      std::string type = p.contains("type") ? String(p["type"], pp + "/type")
                                            : "string";
      if (type == "string") {
        param.type = Parameter::Type::kString;
      } else if (type == "int") {
        param.type = Parameter::Type::kInt;
      } else {
        Shape(pp + "/type", "parameter type must be string or int");
      }
      rule.parameters.push_back(std::move(param));
    }
  }
  std::size_t i = 0;
  for (const auto& n : Array(Require(j, "nodes", path), path + "/nodes")) {
    rule.nodes.push_back(
        ParseNode(n, path + "/nodes/" + std::to_string(i++), false));
  }
  if (j.contains("edges")) {
    i = 0;
    for (const auto& e : Array(j["edges"], path + "/edges")) {
      rule.edges.push_back(ParseEdge(e, path + "/edges/" + std::to_string(i++),
                                     rule.nodes, nullptr, false));
    }
  }
  if (j.contains("attributeConditions")) {
    rule.conditions =
        ParseConditions(j["attributeConditions"], path + "/attributeConditions");
  }
  if (j.contains("forbids")) {
    i = 0;
    for (const auto& f : Array(j["forbids"], path + "/forbids")) {
      std::string fp = path + "/forbids/" + std::to_string(i++);
      Object(f, fp);
      ForbidPattern forbid;
      if (f.contains("nodes")) {
        std::size_t k = 0;
        for (const auto& n : Array(f["nodes"], fp + "/nodes")) {
          forbid.nodes.push_back(
              ParseNode(n, fp + "/nodes/" + std::to_string(k++), true));
        }
      }
      if (f.contains("edges")) {
        std::size_t k = 0;
        for (const auto& e : Array(f["edges"], fp + "/edges")) {
          forbid.edges.push_back(ParseEdge(e, fp + "/edges/" +
                                                  std::to_string(k++),
                                           forbid.nodes, &rule.nodes, true));
        }
      }
      if (f.contains("attributeConditions")) {
        forbid.conditions = ParseConditions(f["attributeConditions"],
                                            fp + "/attributeConditions");
      }
      rule.forbids.push_back(std::move(forbid));
    }
  }
  return rule;
}

// Attributes a rule may assign. Instruction nodes need a concrete kind,
// except for "mnemonic" which swaps in any operand-free instruction.
bool Settable(const NodeType& t, std::string_view attr) {
  using K = InstructionKind;
  auto one_of = [&](std::initializer_list<std::string_view> names) {
    return std::find(names.begin(), names.end(), attr) != names.end();
  };
  switch (t.element) {
    case ElementType::kField:
      return one_of({"name", "descriptor", "valueType", "accessFlags"});
    case ElementType::kMethod:
      return one_of({"name", "descriptor", "param0", "accessFlags"});
    case ElementType::kFieldRef:
    case ElementType::kMethodRef:
      return one_of({"owner", "name", "descriptor"});
    case ElementType::kTypeRef:
      return attr == "name";
    case ElementType::kInstruction:
      if (attr == "mnemonic") return true;
      if (!t.kind) return false;
      switch (*t.kind) {
        case K::kLoad:
        case K::kStore: return attr == "slot";
        case K::kIncrement: return attr == "delta";
        case K::kArithmetic: return attr == "operation";
        case K::kBranch: return one_of({"operands", "relation"});
        case K::kFieldAccess:
          return one_of({"op", "owner", "name", "descriptor"});
        case K::kInvoke:
          return one_of({"invokeKind", "owner", "name", "descriptor"});
        case K::kNew:
        case K::kTypeCheck: return attr == "typeName";
        case K::kPush: return attr == "value";
        default: return false;
      }
    default:
      return false;
  }
}

std::vector<std::string> RequiredForCreate(const NodeType& t, bool* creatable) {
  using K = InstructionKind;
  *creatable = true;
  switch (t.element) {
    case ElementType::kField: return {"name", "descriptor"};
    case ElementType::kMethod: return {"name", "descriptor", "body"};
    case ElementType::kInstruction:
      if (!t.kind) break;
      switch (*t.kind) {
        case K::kLoad:
        case K::kStore: return {"type", "slot"};
        case K::kIncrement: return {"slot", "delta"};
        case K::kArithmetic: return {"type", "operation"};
        case K::kBranch: return {"operands", "relation"};
        case K::kGoto:
        case K::kThrow: return {};
        case K::kFieldAccess: return {"op", "owner", "name", "descriptor"};
        case K::kInvoke: return {"invokeKind", "owner", "name", "descriptor"};
        case K::kNew: return {"typeName"};
        case K::kTypeCheck: return {"op", "typeName"};
        case K::kPush: return {"constantKind", "value"};
        case K::kReturn: return {"type"};
        case K::kStack: return {"op"};
        case K::kRaw: return {"mnemonic"};
        default: break;
      }
      break;
    default:
      break;
  }
  *creatable = false;
  return {};
}

void CheckBindings(const Rule& rule, const PatternNode& n) {
  std::set<std::string> seen;
  for (const auto& [attr, term] : n.bindings) {
    if (!AttributeKnown(n.type, attr)) {
      Ill(rule.name, "node '" + n.id + "': " + NodeTypeName(n.type) +
                         " has no attribute '" + attr + "'");
    }
    if (!seen.insert(attr).second) {
      Ill(rule.name, "node '" + n.id + "' binds '" + attr + "' twice");
    }
  }
}

}  // namespace

void CheckRule(const Rule& rule) {
  if (!IsIdentifier(rule.name)) Ill(rule.name, "rule name is not an identifier");

  std::set<std::string> params;
  for (const auto& p : rule.parameters) {
    if (!IsIdentifier(p.name)) Ill(rule.name, "bad parameter name '" + p.name + "'");
    if (!params.insert(p.name).second) {
      Ill(rule.name, "duplicate parameter '" + p.name + "'");
    }
  }

  std::map<std::string, const PatternNode*> main;
  std::set<std::string> all_ids;
  for (const auto& n : rule.nodes) {
    if (n.id.empty()) Ill(rule.name, "node without id");
    if (!all_ids.insert(n.id).second) Ill(rule.name, "duplicate node id '" + n.id + "'");
    if (n.role == Role::kForbid) {
      Ill(rule.name, "node '" + n.id + "': forbid-role nodes belong in forbids");
    }
    main[n.id] = &n;
  }
  for (const auto& f : rule.forbids) {
    for (const auto& n : f.nodes) {
      if (n.role != Role::kForbid) {
        Ill(rule.name, "node '" + n.id + "': forbids introduce only forbid-role nodes");
      }
      if (!all_ids.insert(n.id).second) Ill(rule.name, "duplicate node id '" + n.id + "'");
    }
  }

  // Variables bound by matching: parameters plus every variable a matched
  // node binds.
  std::set<std::string> bound = params;
  std::set<std::string> referenced;
  for (const auto& n : rule.nodes) {
    CheckBindings(rule, n);
    for (const auto& [attr, term] : n.bindings) {
      if (term.kind != Term::Kind::kLiteral) referenced.insert(term.variable);
      if (!IsMatched(n.role)) continue;
      if (term.kind == Term::Kind::kVariable) bound.insert(term.variable);
    }
  }
  auto require_bound = [&](const std::string& var, const std::string& where) {
    referenced.insert(var);
    if (!bound.count(var)) {
      Ill(rule.name, where + ": variable '" + var + "' is never bound");
    }
  };

  for (const auto& n : rule.nodes) {
    for (const auto& [attr, term] : n.bindings) {
      if (term.kind == Term::Kind::kNegate || n.role == Role::kCreate) {
        if (term.kind != Term::Kind::kLiteral) {
          require_bound(term.variable, "node '" + n.id + "'");
        }
      }
    }
    if (!n.sets.empty() && n.role != Role::kPreserve) {
      Ill(rule.name, "node '" + n.id + "': only preserve nodes may set attributes");
    }
    for (const auto& [attr, term] : n.sets) {
      if (!Settable(n.type, attr)) {
        Ill(rule.name, "node '" + n.id + "': attribute '" + attr +
                           "' of " + NodeTypeName(n.type) + " cannot be set");
      }
      if (term.kind != Term::Kind::kLiteral) {
        require_bound(term.variable, "node '" + n.id + "'");
      }
    }
    if (n.role == Role::kDelete && n.type.element == ElementType::kProject) {
      Ill(rule.name, "node '" + n.id + "': the project cannot be deleted");
    }
    if (n.role == Role::kCreate) {
      bool creatable = false;
      auto required = RequiredForCreate(n.type, &creatable);
      if (!creatable) {
        Ill(rule.name, "node '" + n.id + "': " + NodeTypeName(n.type) +
                           " nodes cannot be created");
      }
      for (const auto& attr : required) {
        bool has = std::any_of(n.bindings.begin(), n.bindings.end(),
                               [&](const auto& b) { return b.first == attr; });
        if (!has) {
          Ill(rule.name, "create node '" + n.id + "' needs attribute '" + attr + "'");
        }
      }
    }
  }

  auto check_edge = [&](const PatternEdge& e, bool in_forbid,
                        const std::map<std::string, const PatternNode*>& local) {
    auto find = [&](const std::string& id) -> const PatternNode* {
      if (auto it = main.find(id); it != main.end()) return it->second;
      if (auto it = local.find(id); it != local.end()) return it->second;
      return nullptr;
    };
    const PatternNode* a = find(e.from);
    const PatternNode* b = find(e.to);
    if (!a || !b) Ill(rule.name, "edge " + e.Label() + " names an unknown node");
    if (!RelationAllowed(e.relation, a->type.element, b->type.element)) {
      Ill(rule.name, "edge " + e.Label() + ": relation cannot connect " +
                         NodeTypeName(a->type) + " to " + NodeTypeName(b->type));
    }
    if (in_forbid) {
      if (e.role != Role::kForbid) {
        Ill(rule.name, "edge " + e.Label() + ": forbid edges must have role forbid");
      }
      for (const PatternNode* n : {a, b}) {
        if (n->role == Role::kCreate) {
          Ill(rule.name, "edge " + e.Label() + ": forbids cannot use create nodes");
        }
      }
      return;
    }
    switch (e.role) {
      case Role::kForbid:
        Ill(rule.name, "edge " + e.Label() + ": forbid edges belong in forbids");
      case Role::kCreate:
        if (!IsContainment(e.relation) && !IsCfg(e.relation)) {
          Ill(rule.name, "create edge " + e.Label() +
                             ": only containment and control-flow edges "
                             "can be created");
        }
        for (const PatternNode* n : {a, b}) {
          if (n->role != Role::kPreserve && n->role != Role::kCreate) {
            Ill(rule.name, "create edge " + e.Label() + " touches " +
                               RoleName(n->role) + " node '" + n->id + "'");
          }
        }
        break;
      case Role::kPreserve:
        for (const PatternNode* n : {a, b}) {
          if (n->role != Role::kPreserve) {
            Ill(rule.name, "preserve edge " + e.Label() + " touches " +
                               RoleName(n->role) + " node '" + n->id + "'");
          }
        }
        break;
      case Role::kDelete: {
        for (const PatternNode* n : {a, b}) {
          if (n->role == Role::kCreate) {
            Ill(rule.name, "delete edge " + e.Label() + " touches create node '" +
                               n->id + "'");
          }
        }
        if (a->role == Role::kDelete || b->role == Role::kDelete) break;
        if (IsCfg(e.relation)) break;
        bool moved = false;
        if (IsContainment(e.relation)) {
          for (const auto& other : rule.edges) {
            if (other.role == Role::kCreate && other.relation == e.relation &&
                other.to == e.to) {
              moved = true;
            }
          }
        }
        if (!moved) {
          Ill(rule.name, "delete edge " + e.Label() +
                             " can only be removed with one of its endpoints");
        }
        break;
      }
    }
  };

  for (const auto& e : rule.edges) check_edge(e, false, {});

  // A deleted reference goes with its instruction.
  for (const auto& n : rule.nodes) {
    if (n.role != Role::kDelete) continue;
    bool is_ref = n.type.element == ElementType::kFieldRef ||
                  n.type.element == ElementType::kMethodRef ||
                  n.type.element == ElementType::kTypeRef;
    if (!is_ref) continue;
    bool with_insn = std::any_of(rule.edges.begin(), rule.edges.end(),
                                 [&](const PatternEdge& e) {
                                   return e.to == n.id &&
                                          main.at(e.from)->role == Role::kDelete &&
                                          !IsContainment(e.relation) &&
                                          e.relation != RelationKind::kTarget;
                                 });
    if (!with_insn) {
      Ill(rule.name, "node '" + n.id + "': a reference is deleted only with its instruction");
    }
  }

  // Created members and instructions need a place in the model.
  for (const auto& n : rule.nodes) {
    if (n.role != Role::kCreate) continue;
    int parents = 0;
    bool cfg_anchor = false;
    for (const auto& e : rule.edges) {
      if (e.role != Role::kCreate) continue;
      if (e.to == n.id && IsContainment(e.relation)) ++parents;
      if (IsCfg(e.relation) && (e.to == n.id || e.from == n.id)) cfg_anchor = true;
    }
    bool is_insn = n.type.element == ElementType::kInstruction;
    if (parents > 1 || (parents == 0 && !(is_insn && cfg_anchor))) {
      Ill(rule.name, "create node '" + n.id + "' needs exactly one container");
    }
  }

  // Moves: a preserve member may change container only by a paired
  // delete + create containment edge.
  for (const auto& e : rule.edges) {
    if (e.role != Role::kCreate || !IsContainment(e.relation)) continue;
    if (main.at(e.to)->role != Role::kPreserve) continue;
    bool detached = std::any_of(rule.edges.begin(), rule.edges.end(),
                                [&](const PatternEdge& d) {
                                  return d.role == Role::kDelete &&
                                         d.relation == e.relation && d.to == e.to;
                                });
    if (!detached || e.relation == RelationKind::kInstructions) {
      Ill(rule.name, "create edge " + e.Label() +
                         " would give '" + e.to + "' a second container");
    }
  }

  auto check_condition = [&](const Condition& c,
                             const std::map<std::string, const PatternNode*>& local,
                             const std::set<std::string>& vars) {
    std::vector<std::string> names;
    CollectVariables(c.expr, names);
    for (const auto& v : names) {
      referenced.insert(v);
      if (!vars.count(v)) {
        Ill(rule.name, "condition '" + c.source + "': unknown variable '" + v + "'");
      }
    }
    std::vector<std::pair<std::string, std::string>> refs;
    CollectNodeRefs(c.expr, refs);
    for (const auto& [id, attr] : refs) {
      const PatternNode* n = nullptr;
      if (auto it = main.find(id); it != main.end()) n = it->second;
      if (auto it = local.find(id); it != local.end()) n = it->second;
      if (!n || n->role == Role::kCreate) {
        Ill(rule.name, "condition '" + c.source + "': unknown node '" + id + "'");
      }
      if (!AttributeKnown(n->type, attr)) {
        Ill(rule.name, "condition '" + c.source + "': " + NodeTypeName(n->type) +
                           " has no attribute '" + attr + "'");
      }
    }
  };
  for (const auto& c : rule.conditions) check_condition(c, {}, bound);

  for (const auto& f : rule.forbids) {
    std::map<std::string, const PatternNode*> local;
    std::set<std::string> vars = bound;
    for (const auto& n : f.nodes) {
      local[n.id] = &n;
      CheckBindings(rule, n);
      if (!n.sets.empty()) Ill(rule.name, "forbid node '" + n.id + "' sets attributes");
      for (const auto& [attr, term] : n.bindings) {
        if (term.kind == Term::Kind::kNegate) {
          Ill(rule.name, "forbid node '" + n.id + "': negate is not a pattern");
        }
        if (term.kind == Term::Kind::kVariable) {
          vars.insert(term.variable);
          referenced.insert(term.variable);
        }
      }
    }
    for (const auto& e : f.edges) check_edge(e, true, local);
    for (const auto& c : f.conditions) check_condition(c, local, vars);
  }

  for (const auto& p : rule.parameters) {
    if (!referenced.count(p.name)) {
      Ill(rule.name, "parameter '" + p.name + "' is never used");
    }
  }
}

RuleDocument LoadRule(std::string_view document) {
  Json doc;
  try {
    doc = Json::parse(document.begin(), document.end());
  } catch (const Json::parse_error& e) {
    throw RuleSyntaxError(e.byte > 0 ? e.byte - 1 : 0, e.what());
  }
  Object(doc, "");
  std::string schema = String(Require(doc, "schema", ""), "/schema");
  if (schema != kRuleSchema) {
    Shape("/schema", "unsupported schema '" + schema + "'");
  }

  RuleDocument out;
  if (doc.contains("operator")) {
    const Json& op = Object(doc["operator"], "/operator");
    OperatorInfo info;
    info.id = String(Require(op, "id", "/operator"), "/operator/id");
    if (op.contains("category")) {
      info.category = String(op["category"], "/operator/category");
    }
    if (op.contains("description")) {
      info.description = String(op["description"], "/operator/description");
    }
    if (op.contains("inverseOf")) {
      info.inverse_of = String(op["inverseOf"], "/operator/inverseOf");
    }
    out.info = std::move(info);
  }

  bool has_rule = doc.contains("rule");
  bool has_unit = doc.contains("unit");
  if (has_rule == has_unit) Shape("", "expected exactly one of \"rule\" or \"unit\"");
  if (has_rule) {
    out.rules.push_back(ParseRuleObject(doc["rule"], "/rule"));
  } else {
    const Json& u = Object(doc["unit"], "/unit");
    Unit unit;
    unit.name = String(Require(u, "name", "/unit"), "/unit/name");
    std::size_t i = 0;
    for (const auto& s : Array(Require(u, "steps", "/unit"), "/unit/steps")) {
      unit.steps.push_back(String(s, "/unit/steps/" + std::to_string(i++)));
    }
    if (u.contains("mode")) unit.mode = String(u["mode"], "/unit/mode");
    i = 0;
    for (const auto& r : Array(Require(doc, "rules", ""), "/rules")) {
      out.rules.push_back(ParseRuleObject(r, "/rules/" + std::to_string(i++)));
    }
    out.unit = std::move(unit);
  }

  std::set<std::string> names;
  for (const auto& r : out.rules) {
    CheckRule(r);
    if (!names.insert(r.name).second) {
      throw IllFormedRule("duplicate rule name '" + r.name + "'");
    }
  }
  if (out.unit) {
    if (out.unit->mode != "applyFirstMatch") {
      throw IllFormedRule("unit '" + out.unit->name + "': unsupported mode '" +
                          out.unit->mode + "'");
    }
    if (out.unit->steps.empty()) {
      throw IllFormedRule("unit '" + out.unit->name + "' has no steps");
    }
    for (const auto& s : out.unit->steps) {
      if (!out.FindRule(s)) {
        throw IllFormedRule("unit '" + out.unit->name + "': unknown rule '" + s + "'");
      }
    }
  }
  return out;
}

}  // namespace jmut
