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
#include <set>

#include "jmut/descriptor.h"
#include "jmut/engine.h"
#include "jmut/errors.h"
#include "jmut/mnemonic.h"

namespace jmut {

namespace {

Clazz* FindClass(Project& p, std::string_view name) {
  for (auto& c : p.classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Method* FindMethod(Project& p, const ElementKey& k) {
  Clazz* c = FindClass(p, k.class_name);
  if (!c) return nullptr;
  for (auto& m : c->methods) {
    if (m.name == k.member_name && m.descriptor == k.member_descriptor) {
      return &m;
    }
  }
  return nullptr;
}

Field* FindField(Project& p, const ElementKey& k) {
  Clazz* c = FindClass(p, k.class_name);
  if (!c) return nullptr;
  for (auto& f : c->fields) {
    if (f.name == k.member_name && f.descriptor == k.member_descriptor) {
      return &f;
    }
  }
  return nullptr;
}

EdgeKind EdgeKindOf(RelationKind r) {
  if (r == RelationKind::kCfgNext) return EdgeKind::kUnconditional;
  if (r == RelationKind::kCfgBranch) return EdgeKind::kConditional;
  return EdgeKind::kExceptional;
}

bool SameMethod(const ElementKey& a, const ElementKey& b) {
  return a.class_name == b.class_name && a.member_name == b.member_name &&
         a.member_descriptor == b.member_descriptor;
}

std::string MethodId(const ElementKey& k) {
  return k.class_name + "." + k.member_name + k.member_descriptor;
}

// Removes one instruction. With exactly one normal successor the
// predecessors are redirected to it; otherwise edges into the removed
// instruction are left dangling for the validity check to report.
void DeleteInstruction(Method& m, InstructionId id) {
  auto idx = m.IndexOf(id);
  if (!idx) return;
  std::vector<ControlFlowEdge> outs;
  for (const auto& e : m.edges) {
    if (e.start == id && e.kind != EdgeKind::kExceptional) outs.push_back(e);
  }
  bool relink = outs.size() == 1 && outs[0].end != id;
  InstructionId succ = relink ? outs[0].end : kNoInstruction;
  InstructionId next = *idx + 1 < m.instructions.size()
                           ? m.instructions[*idx + 1].id
                           : kNoInstruction;

  std::vector<ControlFlowEdge> kept;
  for (auto e : m.edges) {
    if (e.start == id) continue;
    if (e.kind == EdgeKind::kExceptional && e.end == id) continue;
    if (relink && e.end == id) e.end = succ;
    kept.push_back(e);
  }
  m.edges = std::move(kept);

  std::vector<ExceptionHandler> handlers;
  for (auto h : m.exception_handlers) {
    if (h.handler == id && relink) h.handler = succ;
    if (h.start == id) h.start = next;
    if (h.end == id) h.end = next;
    if (h.start == kNoInstruction || h.start == h.end) continue;
    handlers.push_back(h);
  }
  m.exception_handlers = std::move(handlers);

  std::vector<LineEntry> lines;
  for (auto l : m.line_table) {
    if (l.instruction == id) {
      if (next == kNoInstruction) continue;
      bool taken = std::any_of(
          m.line_table.begin(), m.line_table.end(),
          [&](const LineEntry& o) { return o.instruction == next; });
      if (taken) continue;
      l.instruction = next;
    }
    lines.push_back(l);
  }
  m.line_table = std::move(lines);

  m.instructions.erase(m.instructions.begin() +
                       static_cast<std::ptrdiff_t>(*idx));

  // Execution starts at the first instruction; keep the entry pointing at
  // the relinked successor.
  if (*idx == 0 && relink && !m.instructions.empty() &&
      m.instructions.front().id != succ) {
    Instruction jump{m.NextId(), op::Goto{}, 0};
    m.instructions.insert(m.instructions.begin(), jump);
    m.edges.push_back({EdgeKind::kUnconditional, jump.id, succ});
  }
}

[[noreturn]] void Bad(const Rule& rule, const std::string& what) {
  throw IllFormedRule("rule '" + rule.name + "': " + what);
}

class Rewriter {
 public:
  Rewriter(const Rule& rule, const Match& match, Project& project)
      : rule_(rule), match_(match), project_(project) {}

  void Run() {
    Resolve();
    DeleteEdges();
    DeleteNodes();
    CreateNodes();
    CreateEdges();
    PlaceCreated();
    ApplySets();
    for (const auto& id : touched_) {
      for (auto& c : project_.classes) {
        for (auto& m : c.methods) {
          if (c.name + "." + m.name + m.descriptor == id) {
            m.RebuildExceptionalEdges();
          }
        }
      }
    }
  }

 private:
  void Resolve() {
    if (match_.rule != rule_.name) {
      throw StaleMatch("match belongs to rule '" + match_.rule + "'");
    }
    ProjectView view(project_);
    for (const auto& n : rule_.nodes) {
      if (!IsMatched(n.role)) continue;
      auto it = match_.binding.find(n.id);
      if (it == match_.binding.end()) {
        throw StaleMatch("match has no element for node '" + n.id + "'");
      }
      auto ref = view.Resolve(it->second);
      if (!ref || !view.Matches(*ref, n.type)) {
        throw StaleMatch("node '" + n.id + "': " + it->second.ToString() +
                         " is not in the project");
      }
      keys_[n.id] = view.KeyOf(*ref);
    }
  }

  Value Eval(const Term& t) const {
    if (t.kind == Term::Kind::kLiteral) return t.literal;
    auto it = match_.values.find(t.variable);
    if (it == match_.values.end()) {
      throw StaleMatch("match has no value for '" + t.variable + "'");
    }
    if (t.kind == Term::Kind::kVariable) return it->second;
    auto* s = std::get_if<std::string>(&it->second);
    auto r = s ? RelationFromName(*s) : std::nullopt;
    if (!r) Bad(rule_, "negate needs a relation name in '" + t.variable + "'");
    return Value(std::string(RelationName(Negate(*r))));
  }

  Method& MethodOf(const ElementKey& k) {
    Method* m = FindMethod(project_, k);
    if (!m) throw StaleMatch(k.ToString() + " is not in the project");
    return *m;
  }

  void DeleteEdges() {
    for (const auto& e : rule_.edges) {
      if (e.role != Role::kDelete || !IsCfg(e.relation)) continue;
      if (rule_.FindNode(e.from)->role == Role::kDelete ||
          rule_.FindNode(e.to)->role == Role::kDelete) {
        continue;
      }
      const ElementKey& a = keys_.at(e.from);
      const ElementKey& b = keys_.at(e.to);
      Method& m = MethodOf(a);
      EdgeKind kind = EdgeKindOf(e.relation);
      auto it = std::find(m.edges.begin(), m.edges.end(),
                          ControlFlowEdge{kind, a.insn, b.insn});
      if (!SameMethod(a, b) || it == m.edges.end()) {
        throw StaleMatch("edge " + e.Label() + " is not in the project");
      }
      m.edges.erase(it);
      touched_.insert(MethodId(a));
    }
  }

  void DeleteNodes() {
    // Instructions first, in layout order per method.
    std::map<std::string, std::vector<ElementKey>> by_method;
    for (const auto& n : rule_.nodes) {
      if (n.role != Role::kDelete ||
          n.type.element != ElementType::kInstruction) {
        continue;
      }
      const ElementKey& k = keys_.at(n.id);
      by_method[MethodId(k)].push_back(k);
    }
    // A preserved predecessor that gets a new outgoing edge of the same
    // kind is rewired by the rule, not relinked.
    for (const auto& e : rule_.edges) {
      if (!IsCfg(e.relation)) continue;
      const PatternNode* a = rule_.FindNode(e.from);
      const PatternNode* b = rule_.FindNode(e.to);
      if (a->role != Role::kPreserve || b->role != Role::kDelete) continue;
      bool rewired = std::any_of(
          rule_.edges.begin(), rule_.edges.end(), [&](const PatternEdge& c) {
            return c.role == Role::kCreate && c.from == e.from &&
                   c.relation == e.relation;
          });
      if (!rewired) continue;
      const ElementKey& ka = keys_.at(e.from);
      const ElementKey& kb = keys_.at(e.to);
      Method& m = MethodOf(ka);
      EdgeKind kind = EdgeKindOf(e.relation);
      auto it = std::find(m.edges.begin(), m.edges.end(),
                          ControlFlowEdge{kind, ka.insn, kb.insn});
      if (it != m.edges.end()) m.edges.erase(it);
    }
    for (auto& [id, ks] : by_method) {
      std::sort(ks.begin(), ks.end(),
                [](const ElementKey& a, const ElementKey& b) {
                  return a.insn_index < b.insn_index;
                });
      Method& m = MethodOf(ks.front());
      for (const auto& k : ks) DeleteInstruction(m, k.insn);
      touched_.insert(id);
    }
    for (ElementType type : {ElementType::kField, ElementType::kMethod,
                             ElementType::kClazz}) {
      for (const auto& n : rule_.nodes) {
        if (n.role != Role::kDelete || n.type.element != type) continue;
        const ElementKey& k = keys_.at(n.id);
        if (type == ElementType::kClazz) {
          std::erase_if(project_.classes,
                        [&](const Clazz& c) { return c.name == k.class_name; });
          project_.origin.erase(k.class_name);
          continue;
        }
        Clazz* c = FindClass(project_, k.class_name);
        if (!c) continue;
        if (type == ElementType::kField) {
          std::erase_if(c->fields, [&](const Field& f) {
            return f.name == k.member_name &&
                   f.descriptor == k.member_descriptor;
          });
        } else {
          std::erase_if(c->methods, [&](const Method& m) {
            return m.name == k.member_name &&
                   m.descriptor == k.member_descriptor;
          });
        }
      }
    }
  }

  std::map<std::string, Value> Attributes(const PatternNode& n) const {
    std::map<std::string, Value> out;
    for (const auto& [attr, term] : n.bindings) out[attr] = Eval(term);
    return out;
  }

  std::string Str(const PatternNode& n,
                  const std::map<std::string, Value>& attrs,
                  const std::string& name) const {
    auto it = attrs.find(name);
    const std::string* s =
        it == attrs.end() ? nullptr : std::get_if<std::string>(&it->second);
    if (!s) Bad(rule_, "node '" + n.id + "': '" + name + "' must be a string");
    return *s;
  }

  int64_t Int(const PatternNode& n, const std::map<std::string, Value>& attrs,
              const std::string& name, int64_t fallback) const {
    auto it = attrs.find(name);
    if (it == attrs.end()) return fallback;
    const int64_t* v = std::get_if<int64_t>(&it->second);
    if (!v) Bad(rule_, "node '" + n.id + "': '" + name + "' must be an int");
    return *v;
  }

  template <typename T, typename F>
  T Parsed(const PatternNode& n, const std::map<std::string, Value>& attrs,
           const std::string& name, F from_name) const {
    auto v = from_name(Str(n, attrs, name));
    if (!v) Bad(rule_, "node '" + n.id + "': bad " + name);
    return *v;
  }

  Operation BuildOperation(const PatternNode& n) const {
    auto a = Attributes(n);
    auto type = [&](const std::string& name) {
      return Parsed<ValueType>(n, a, name, [](const std::string& s) {
        return ValueTypeFromLetter(s);
      });
    };
    auto u16 = [&](const std::string& name) {
      int64_t v = Int(n, a, name, -1);
      if (v < 0 || v > 0xffff) Bad(rule_, "node '" + n.id + "': bad " + name);
      return static_cast<uint16_t>(v);
    };
    switch (*n.type.kind) {
      case InstructionKind::kLoad: return op::Load{type("type"), u16("slot")};
      case InstructionKind::kStore: return op::Store{type("type"), u16("slot")};
      case InstructionKind::kIncrement:
        return op::Increment{u16("slot"),
                             static_cast<int16_t>(Int(n, a, "delta", 0))};
      case InstructionKind::kArithmetic:
        return op::Arithmetic{
            type("type"), Parsed<ArithmeticOp>(n, a, "operation", [](const auto& s) {
              return ArithmeticOpFromName(s);
            })};
      case InstructionKind::kBranch:
        return op::Branch{
            Parsed<BranchOperands>(n, a, "operands",
                                   [](const auto& s) { return BranchOperandsFromName(s); }),
            Parsed<Relation>(n, a, "relation",
                             [](const auto& s) { return RelationFromName(s); })};
      case InstructionKind::kGoto: return op::Goto{};
      case InstructionKind::kThrow: return op::Throw{};
      case InstructionKind::kFieldAccess:
        return op::FieldAccess{
            Parsed<FieldOp>(n, a, "op", [](const auto& s) { return FieldOpFromName(s); }),
            FieldRef{Str(n, a, "owner"), Str(n, a, "name"),
                     Str(n, a, "descriptor")}};
      case InstructionKind::kInvoke: {
        auto kind = Parsed<InvokeKind>(
            n, a, "invokeKind", [](const auto& s) { return InvokeKindFromName(s); });
        return op::Invoke{kind,
                          MethodRef{Str(n, a, "owner"), Str(n, a, "name"),
                                    Str(n, a, "descriptor"),
                                    kind == InvokeKind::kInterface}};
      }
      case InstructionKind::kNew: return op::New{TypeRef{Str(n, a, "typeName")}};
      case InstructionKind::kTypeCheck:
        return op::TypeCheck{
            Parsed<TypeCheckOp>(n, a, "op",
                                [](const auto& s) { return TypeCheckOpFromName(s); }),
            TypeRef{Str(n, a, "typeName")}};
      case InstructionKind::kPush: {
        std::string kind = Str(n, a, "constantKind");
        if (kind == "null") return op::Push{Constant::Null()};
        if (kind == "int") {
          return op::Push{Constant::Integer(
              static_cast<int32_t>(Int(n, a, "value", 0)))};
        }
        if (kind == "long") {
          return op::Push{Constant::Long(Int(n, a, "value", 0))};
        }
        if (kind == "string") return op::Push{Constant::String(Str(n, a, "value"))};
        if (kind == "class") return op::Push{Constant::Class(Str(n, a, "value"))};
        Bad(rule_, "node '" + n.id + "': cannot create a " + kind + " constant");
      }
      case InstructionKind::kReturn: {
        std::string t = Str(n, a, "type");
        if (t == "V") return op::Return{std::nullopt};
        return op::Return{type("type")};
      }
      case InstructionKind::kStack:
        return op::Stack{
            Parsed<StackOpKind>(n, a, "op", [](const auto& s) { return StackOpFromName(s); })};
      case InstructionKind::kRaw: {
        auto o = OperandFreeOperation(Str(n, a, "mnemonic"));
        if (!o) Bad(rule_, "node '" + n.id + "': unknown mnemonic");
        return *o;
      }
      default:
        Bad(rule_, "node '" + n.id + "' cannot be created");
    }
  }

  // Body that forwards every argument to the superclass implementation.
  Method DelegatingMethod(const Clazz& owner, std::string name,
                          std::string desc, uint16_t flags) const {
    Method m;
    m.name = std::move(name);
    m.descriptor = std::move(desc);
    m.access_flags = flags;
    m.has_code = true;
    auto shape = descriptor::ParseMethod(m.descriptor);
    if (!shape) Bad(rule_, "bad descriptor '" + m.descriptor + "'");
    InstructionId next = 0;
    auto add = [&](Operation op) {
      if (!m.instructions.empty()) {
        m.edges.push_back(
            {EdgeKind::kUnconditional, m.instructions.back().id, next});
      }
      m.instructions.push_back({next++, std::move(op), 0});
    };
    bool is_static = flags & access::kStatic;
    uint16_t slot = 0;
    if (!is_static) add(op::Load{ValueType::kReference, slot++});
    for (const auto& p : shape->params) {
      add(op::Load{descriptor::ValueTypeOf(p), slot});
      slot = static_cast<uint16_t>(slot + descriptor::SlotSize(p));
    }
    add(op::Invoke{is_static ? InvokeKind::kStatic : InvokeKind::kSpecial,
                   MethodRef{owner.super_name, m.name, m.descriptor, false}});
    if (shape->ret == "V") {
      add(op::Return{std::nullopt});
    } else {
      add(op::Return{descriptor::ValueTypeOf(shape->ret)});
    }
    m.max_locals = slot;
    return m;
  }

  const PatternEdge* CreatedContainer(const std::string& id) const {
    for (const auto& e : rule_.edges) {
      if (e.role == Role::kCreate && e.to == id && IsContainment(e.relation)) {
        return &e;
      }
    }
    return nullptr;
  }

  void CreateNodes() {
    std::vector<const PatternNode*> insns;
    for (const auto& n : rule_.nodes) {
      if (n.role != Role::kCreate) continue;
      if (n.type.element == ElementType::kInstruction) {
        insns.push_back(&n);
        continue;
      }
      const PatternEdge* in = CreatedContainer(n.id);
      const ElementKey& parent = keys_.at(in->from);
      Clazz* c = FindClass(project_, parent.class_name);
      if (!c) throw StaleMatch(parent.ToString() + " is not in the project");
      auto attrs = Attributes(n);
      ElementKey key;
      key.type = n.type.element;
      key.class_name = c->name;
      key.member_name = Str(n, attrs, "name");
      key.member_descriptor = Str(n, attrs, "descriptor");
      if (n.type.element == ElementType::kField) {
        Field f;
        f.name = key.member_name;
        f.descriptor = key.member_descriptor;
        f.access_flags = static_cast<uint16_t>(Int(n, attrs, "accessFlags", 0));
        c->fields.push_back(std::move(f));
      } else {
        std::string body = Str(n, attrs, "body");
        if (body != "delegateToSuper") {
          Bad(rule_, "node '" + n.id + "': unknown body '" + body + "'");
        }
        c->methods.push_back(DelegatingMethod(
            *c, key.member_name, key.member_descriptor,
            static_cast<uint16_t>(
                Int(n, attrs, "accessFlags", access::kPublic))));
      }
      keys_[n.id] = std::move(key);
    }

    // Instructions go into the method named by their container edge or
    // by a control-flow neighbour.
    std::vector<const PatternNode*> pending = insns;
    while (!pending.empty()) {
      bool progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        const PatternNode& n = **it;
        std::optional<ElementKey> home;
        if (const PatternEdge* in = CreatedContainer(n.id)) {
          home = keys_.at(in->from);
        } else {
          for (const auto& e : rule_.edges) {
            if (e.role != Role::kCreate || !IsCfg(e.relation)) continue;
            const std::string* other = e.to == n.id     ? &e.from
                                       : e.from == n.id ? &e.to
                                                        : nullptr;
            if (other && keys_.count(*other)) {
              home = keys_.at(*other);
              break;
            }
          }
        }
        if (!home) {
          ++it;
          continue;
        }
        Method& m = MethodOf(*home);
        Instruction insn{m.NextId(), BuildOperation(n), 0};
        m.instructions.push_back(insn);
        ElementKey key = *home;
        key.type = ElementType::kInstruction;
        key.insn = insn.id;
        keys_[n.id] = key;
        created_.push_back(n.id);
        touched_.insert(MethodId(key));
        it = pending.erase(it);
        progress = true;
      }
      if (!progress) Bad(rule_, "created instruction without a method");
    }
  }

  void CreateEdges() {
    for (const auto& e : rule_.edges) {
      if (e.role != Role::kCreate) continue;
      const PatternNode* child = rule_.FindNode(e.to);
      if (IsContainment(e.relation)) {
        if (child->role == Role::kCreate) continue;
        MoveMember(keys_.at(e.to), keys_.at(e.from).class_name);
        continue;
      }
      const ElementKey& a = keys_.at(e.from);
      const ElementKey& b = keys_.at(e.to);
      if (!SameMethod(a, b)) {
        Bad(rule_, "edge " + e.Label() + " would cross methods");
      }
      EdgeKind kind = EdgeKindOf(e.relation);
      MethodOf(a).edges.push_back({kind, a.insn, b.insn});
      touched_.insert(MethodId(a));
    }
  }

  void MoveMember(ElementKey& key, const std::string& to) {
    Clazz* from = FindClass(project_, key.class_name);
    Clazz* dest = FindClass(project_, to);
    if (!from || !dest) throw StaleMatch("moved member lost its class");
    if (key.type == ElementType::kField) {
      auto it = std::find_if(from->fields.begin(), from->fields.end(),
                             [&](const Field& f) {
                               return f.name == key.member_name &&
                                      f.descriptor == key.member_descriptor;
                             });
      if (it == from->fields.end()) throw StaleMatch("moved field is gone");
      Field f = std::move(*it);
      from->fields.erase(it);
      dest->fields.push_back(std::move(f));
    } else {
      auto it = std::find_if(from->methods.begin(), from->methods.end(),
                             [&](const Method& m) {
                               return m.name == key.member_name &&
                                      m.descriptor == key.member_descriptor;
                             });
      if (it == from->methods.end()) throw StaleMatch("moved method is gone");
      Method m = std::move(*it);
      from->methods.erase(it);
      dest->methods.push_back(std::move(m));
    }
    std::string old = key.class_name;
    ElementKey moved = key;
    for (auto& [id, k] : keys_) {
      if (k.class_name == old && k.member_name == moved.member_name &&
          k.member_descriptor == moved.member_descriptor &&
          (k.type == moved.type || (moved.type == ElementType::kMethod &&
                                    k.type > ElementType::kMethod))) {
        k.class_name = to;
      }
    }
  }

  void PlaceCreated() {
    if (created_.empty()) return;
    std::set<std::string> placed_ids;
    std::map<std::string, std::vector<Instruction>> held;
    // Lift every created instruction out of its method, then put each
    // next to a control-flow neighbour.
    for (const auto& id : created_) {
      const ElementKey& k = keys_.at(id);
      Method& m = MethodOf(k);
      auto idx = *m.IndexOf(k.insn);
      held[id].push_back(m.instructions[idx]);
      m.instructions.erase(m.instructions.begin() +
                           static_cast<std::ptrdiff_t>(idx));
    }
    std::vector<std::string> pending = created_;
    while (!pending.empty()) {
      bool progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        const ElementKey& k = keys_.at(*it);
        Method& m = MethodOf(k);
        std::optional<std::size_t> pos;
        for (const auto& e : rule_.edges) {
          if (e.role != Role::kCreate || !IsCfg(e.relation)) continue;
          bool placed_from = !rule_.FindNode(e.from) ||
                             rule_.FindNode(e.from)->role != Role::kCreate ||
                             placed_ids.count(e.from);
          bool placed_to = rule_.FindNode(e.to)->role != Role::kCreate ||
                           placed_ids.count(e.to);
          if (e.to == *it && e.from != *it && placed_from) {
            if (auto i = m.IndexOf(keys_.at(e.from).insn)) {
              pos = *i + 1;
              break;
            }
          }
          if (e.from == *it && e.to != *it && placed_to && !pos) {
            if (auto i = m.IndexOf(keys_.at(e.to).insn)) pos = *i;
          }
        }
        if (!pos) {
          ++it;
          continue;
        }
        m.instructions.insert(m.instructions.begin() +
                                  static_cast<std::ptrdiff_t>(*pos),
                              held[*it].front());
        placed_ids.insert(*it);
        it = pending.erase(it);
        progress = true;
      }
      if (!progress) {
        for (const auto& id : pending) {
          MethodOf(keys_.at(id)).instructions.push_back(held[id].front());
        }
        break;
      }
    }
  }

  void ApplySets() {
    struct Pending {
      const PatternNode* node;
      std::string attr;
      Value value;
      std::vector<Instruction*> cascade;
    };
    std::vector<Pending> sets;
    for (const auto& n : rule_.nodes) {
      for (const auto& [attr, term] : n.sets) {
        sets.push_back({&n, attr, Eval(term), {}});
      }
    }
    if (sets.empty()) return;

    // References follow a retyped field or parameter.
    ProjectView view(project_);
    for (auto& s : sets) {
      bool field_cascade = s.node->type.element == ElementType::kField &&
                           s.attr == "valueType";
      bool method_cascade = s.node->type.element == ElementType::kMethod &&
                            s.attr == "param0";
      if (!field_cascade && !method_cascade) continue;
      auto target = view.Resolve(keys_.at(s.node->id));
      if (!target) continue;
      ElementType ref_type = field_cascade ? ElementType::kFieldRef
                                           : ElementType::kMethodRef;
      for (ElementRef ref : view.Sources(RelationKind::kTarget, *target)) {
        if (ref.type != ref_type) continue;
        ElementKey k = view.KeyOf(ref);
        s.cascade.push_back(MethodOf(k).Find(k.insn));
      }
    }

    // Resolve every target before changing anything so that swaps see
    // the original names.
    struct Target {
      Field* field = nullptr;
      Method* method = nullptr;
      Instruction* insn = nullptr;
    };
    std::vector<Target> targets;
    for (const auto& s : sets) {
      const ElementKey& k = keys_.at(s.node->id);
      Target t;
      switch (k.type) {
        case ElementType::kField: t.field = FindField(project_, k); break;
        case ElementType::kMethod: t.method = FindMethod(project_, k); break;
        default: t.insn = MethodOf(k).Find(k.insn); break;
      }
      if (!t.field && !t.method && !t.insn) {
        throw StaleMatch(k.ToString() + " is not in the project");
      }
      targets.push_back(t);
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
      Set(sets[i].node, sets[i].attr, sets[i].value, targets[i].field,
          targets[i].method, targets[i].insn, sets[i].cascade);
      const ElementKey& k = keys_.at(sets[i].node->id);
      if (k.type >= ElementType::kInstruction) touched_.insert(MethodId(k));
    }
  }

  std::string AsString(const PatternNode& n, const std::string& attr,
                       const Value& v) const {
    const std::string* s = std::get_if<std::string>(&v);
    if (!s) Bad(rule_, "node '" + n.id + "': " + attr + " expects a string");
    return *s;
  }

  int64_t AsInt(const PatternNode& n, const std::string& attr,
                const Value& v) const {
    const int64_t* i = std::get_if<int64_t>(&v);
    if (!i) Bad(rule_, "node '" + n.id + "': " + attr + " expects an int");
    return *i;
  }

  void Set(const PatternNode* n, const std::string& attr, const Value& v,
           Field* field, Method* method, Instruction* insn,
           const std::vector<Instruction*>& cascade) {
    if (field) {
      if (attr == "name") {
        field->name = AsString(*n, attr, v);
      } else if (attr == "accessFlags") {
        field->access_flags = static_cast<uint16_t>(AsInt(*n, attr, v));
      } else {
        field->descriptor = AsString(*n, attr, v);
        for (Instruction* ref : cascade) {
          std::get<op::FieldAccess>(ref->op).ref.descriptor =
              field->descriptor;
        }
      }
      return;
    }
    if (method) {
      if (attr == "name") {
        method->name = AsString(*n, attr, v);
      } else if (attr == "descriptor") {
        method->descriptor = AsString(*n, attr, v);
      } else if (attr == "accessFlags") {
        method->access_flags = static_cast<uint16_t>(AsInt(*n, attr, v));
      } else {
        auto shape = descriptor::ParseMethod(method->descriptor);
        if (!shape || shape->params.empty()) {
          Bad(rule_, "node '" + n->id + "': method has no parameter");
        }
        shape->params[0] = AsString(*n, attr, v);
        method->descriptor = descriptor::BuildMethod(*shape);
        for (Instruction* ref : cascade) {
          std::get<op::Invoke>(ref->op).ref.descriptor = method->descriptor;
        }
      }
      return;
    }
    SetInstruction(*n, attr, v, *insn);
  }

  void SetInstruction(const PatternNode& n, const std::string& attr,
                      const Value& v, Instruction& insn) {
    auto bad = [&]() { Bad(rule_, "node '" + n.id + "': bad value for " + attr); };
    if (attr == "mnemonic") {
      auto o = OperandFreeOperation(AsString(n, attr, v));
      if (!o) bad();
      insn.op = *o;
      return;
    }
    if (n.type.element != ElementType::kInstruction) {
      std::string s = AsString(n, attr, v);
      if (auto* fa = insn.as<op::FieldAccess>()) {
        (attr == "owner" ? fa->ref.owner
                         : attr == "name" ? fa->ref.name : fa->ref.descriptor) = s;
      } else if (auto* iv = insn.as<op::Invoke>()) {
        (attr == "owner" ? iv->ref.owner
                         : attr == "name" ? iv->ref.name : iv->ref.descriptor) = s;
      } else if (auto* nw = insn.as<op::New>()) {
        nw->type.name = s;
      } else if (auto* tc = insn.as<op::TypeCheck>()) {
        tc->type.name = s;
      } else if (auto* na = insn.as<op::NewArray>()) {
        na->array_type.name = s;
      }
      return;
    }
    std::visit(
        [&](auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, op::Load> ||
                        std::is_same_v<T, op::Store>) {
            int64_t slot = AsInt(n, attr, v);
            if (slot < 0 || slot > 0xffff) bad();
            o.slot = static_cast<uint16_t>(slot);
          } else if constexpr (std::is_same_v<T, op::Increment>) {
            o.delta = static_cast<int16_t>(AsInt(n, attr, v));
          } else if constexpr (std::is_same_v<T, op::Arithmetic>) {
            auto a = ArithmeticOpFromName(AsString(n, attr, v));
            if (!a) bad();
            o.op = *a;
          } else if constexpr (std::is_same_v<T, op::Branch>) {
            if (attr == "operands") {
              auto b = BranchOperandsFromName(AsString(n, attr, v));
              if (!b) bad();
              o.operands = *b;
            } else {
              auto r = RelationFromName(AsString(n, attr, v));
              if (!r) bad();
              o.relation = *r;
            }
          } else if constexpr (std::is_same_v<T, op::FieldAccess>) {
            std::string s = AsString(n, attr, v);
            if (attr == "op") {
              auto f = FieldOpFromName(s);
              if (!f) bad();
              o.op = *f;
            } else {
              (attr == "owner" ? o.ref.owner
                               : attr == "name" ? o.ref.name
                                                : o.ref.descriptor) = s;
            }
          } else if constexpr (std::is_same_v<T, op::Invoke>) {
            std::string s = AsString(n, attr, v);
            if (attr == "invokeKind") {
              auto k = InvokeKindFromName(s);
              if (!k) bad();
              o.kind = *k;
              o.ref.interface = *k == InvokeKind::kInterface;
            } else {
              (attr == "owner" ? o.ref.owner
                               : attr == "name" ? o.ref.name
                                                : o.ref.descriptor) = s;
            }
          } else if constexpr (std::is_same_v<T, op::New> ||
                               std::is_same_v<T, op::TypeCheck>) {
            o.type.name = AsString(n, attr, v);
          } else if constexpr (std::is_same_v<T, op::Push>) {
            switch (o.value.kind) {
              case Constant::Kind::kInteger:
                o.value = Constant::Integer(
                    static_cast<int32_t>(AsInt(n, attr, v)));
                break;
              case Constant::Kind::kLong:
                o.value = Constant::Long(AsInt(n, attr, v));
                break;
              case Constant::Kind::kString:
                o.value = Constant::String(AsString(n, attr, v));
                break;
              default:
                bad();
            }
          } else {
            bad();
          }
        },
        insn.op);
  }

  const Rule& rule_;
  const Match& match_;
  Project& project_;
  std::map<std::string, ElementKey> keys_;
  std::vector<std::string> created_;
  std::set<std::string> touched_;
};

}  // namespace

Project ApplyMatch(const Rule& rule, const Match& match,
                   const Project& project) {
  Project out = project;
  Rewriter(rule, match, out).Run();
  return out;
}

namespace {

const Rule& StepRule(const Unit& unit, const std::vector<Rule>& rules,
                     std::size_t i) {
  for (const auto& r : rules) {
    if (r.name == unit.steps[i]) return r;
  }
  throw IllFormedRule("unit '" + unit.name + "': unknown rule '" +
                      unit.steps[i] + "'");
}

Project RunSteps(const Unit& unit, const std::vector<Rule>& rules,
                 Project current, std::size_t from, ParamValues values) {
  for (std::size_t i = from; i < unit.steps.size(); ++i) {
    const Rule& rule = StepRule(unit, rules, i);
    ParamValues fixed;
    for (const auto& p : rule.parameters) {
      if (auto it = values.find(p.name); it != values.end()) {
        fixed.insert(*it);
      }
    }
    auto matches = FindMatches(rule, current, fixed);
    if (matches.empty()) throw UnitStepFailed(i);
    current = ApplyMatch(rule, matches.front(), current);
    for (const auto& [k, v] : matches.front().values) values.insert_or_assign(k, v);
  }
  return current;
}

}  // namespace

Project ApplyUnit(const Unit& unit, const std::vector<Rule>& rules,
                  const Project& project, const ParamValues& fixed) {
  return RunSteps(unit, rules, project, 0, fixed);
}

Project ApplyUnitFrom(const Unit& unit, const std::vector<Rule>& rules,
                      const Project& project, const Match& first) {
  if (unit.steps.empty()) return project;
  const Rule& rule = StepRule(unit, rules, 0);
  Project after = ApplyMatch(rule, first, project);
  return RunSteps(unit, rules, std::move(after), 1, first.values);
}

}  // namespace jmut
