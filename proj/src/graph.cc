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


#include "jmut/graph.h"

#include <algorithm>
#include <array>
#include <set>

#include "jmut/descriptor.h"
#include "jmut/mnemonic.h"

namespace jmut {

std::string ValueToString(const Value& v) {
  if (auto* i = std::get_if<int64_t>(&v)) return std::to_string(*i);
  return "\"" + std::get<std::string>(v) + "\"";
}

const char* ElementTypeName(ElementType type) {
  switch (type) {
    case ElementType::kProject: return "Project";
    case ElementType::kClazz: return "Clazz";
    case ElementType::kField: return "Field";
    case ElementType::kMethod: return "Method";
    case ElementType::kInstruction: return "Instruction";
    case ElementType::kFieldRef: return "FieldRef";
    case ElementType::kMethodRef: return "MethodRef";
    case ElementType::kTypeRef: return "TypeReference";
  }
  return "?";
}

std::string ElementKey::ToString() const {
  std::string out = ElementTypeName(type);
  if (type == ElementType::kProject) return out;
  out += " " + class_name;
  if (type == ElementType::kClazz) return out;
  out += "." + member_name;
  if (type == ElementType::kField) return out + ":" + member_descriptor;
  out += member_descriptor;
  if (type == ElementType::kMethod) return out;
  return out + "#" + std::to_string(insn_index);
}

namespace {

constexpr std::array<std::string_view, 17> kCollectionOwners = {
    "java/util/Collection",   "java/util/List",
    "java/util/Set",          "java/util/Queue",
    "java/util/Deque",        "java/util/SortedSet",
    "java/util/NavigableSet", "java/util/AbstractCollection",
    "java/util/AbstractList", "java/util/AbstractSet",
    "java/util/ArrayList",    "java/util/LinkedList",
    "java/util/HashSet",      "java/util/LinkedHashSet",
    "java/util/TreeSet",      "java/util/ArrayDeque",
    "java/util/Vector",
};

constexpr std::array<std::string_view, 9> kMapOwners = {
    "java/util/Map",           "java/util/SortedMap",
    "java/util/NavigableMap",  "java/util/AbstractMap",
    "java/util/HashMap",       "java/util/LinkedHashMap",
    "java/util/TreeMap",       "java/util/Hashtable",
    "java/util/concurrent/ConcurrentHashMap",
};

bool StartsWithUpper(std::string_view name, std::string_view prefix) {
  return name.size() > prefix.size() && name.starts_with(prefix) &&
         name[prefix.size()] >= 'A' && name[prefix.size()] <= 'Z';
}

}  // namespace

std::string OwnerKindOf(std::string_view owner) {
  for (auto o : kCollectionOwners) {
    if (o == owner) return "collection";
  }
  for (auto o : kMapOwners) {
    if (o == owner) return "map";
  }
  return "";
}

std::string AccessorKindOf(std::string_view name, std::string_view descriptor) {
  auto shape = descriptor::ParseMethod(descriptor);
  if (!shape) return "";
  if (shape->params.empty() && shape->ret != "V") {
    if (StartsWithUpper(name, "get")) return "accessor";
    if (StartsWithUpper(name, "is") && shape->ret == "Z") return "accessor";
  }
  if (shape->params.size() == 1 && shape->ret == "V" &&
      StartsWithUpper(name, "set")) {
    return "modifier";
  }
  return "";
}

namespace {

struct RelationInfo {
  const char* name;
  RelationKind kind;
};

constexpr RelationInfo kRelations[] = {
    {"classes", RelationKind::kClasses},
    {"fields", RelationKind::kFields},
    {"methods", RelationKind::kMethods},
    {"superclass", RelationKind::kSuperclass},
    {"instructions", RelationKind::kInstructions},
    {"cfgNext", RelationKind::kCfgNext},
    {"cfgBranch", RelationKind::kCfgBranch},
    {"cfgException", RelationKind::kCfgException},
    {"fieldRef", RelationKind::kFieldRef},
    {"methodRef", RelationKind::kMethodRef},
    {"typeRef", RelationKind::kTypeRef},
    {"target", RelationKind::kTarget},
};

std::optional<EdgeKind> CfgKind(RelationKind r) {
  switch (r) {
    case RelationKind::kCfgNext: return EdgeKind::kUnconditional;
    case RelationKind::kCfgBranch: return EdgeKind::kConditional;
    case RelationKind::kCfgException: return EdgeKind::kExceptional;
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<RelationKind> RelationKindFromName(std::string_view name) {
  for (const auto& r : kRelations) {
    if (name == r.name) return r.kind;
  }
  return std::nullopt;
}

const char* RelationKindName(RelationKind r) {
  for (const auto& info : kRelations) {
    if (info.kind == r) return info.name;
  }
  return "?";
}

bool IsContainment(RelationKind r) {
  return r == RelationKind::kClasses || r == RelationKind::kFields ||
         r == RelationKind::kMethods || r == RelationKind::kInstructions;
}

bool IsCfg(RelationKind r) { return CfgKind(r).has_value(); }

std::optional<NodeType> NodeTypeFromName(std::string_view name) {
  constexpr std::array<std::pair<std::string_view, ElementType>, 8> kPlain = {{
      {"Project", ElementType::kProject},
      {"Clazz", ElementType::kClazz},
      {"Field", ElementType::kField},
      {"Method", ElementType::kMethod},
      {"Instruction", ElementType::kInstruction},
      {"FieldRef", ElementType::kFieldRef},
      {"MethodRef", ElementType::kMethodRef},
      {"TypeReference", ElementType::kTypeRef},
  }};
  for (const auto& [n, t] : kPlain) {
    if (n == name) return NodeType{t, std::nullopt};
  }
  if (auto kind = InstructionKindFromName(name)) {
    return NodeType{ElementType::kInstruction, kind};
  }
  return std::nullopt;
}

std::string NodeTypeName(const NodeType& t) {
  if (t.kind) return InstructionKindName(*t.kind);
  return ElementTypeName(t.element);
}

bool RelationAllowed(RelationKind relation, ElementType from, ElementType to) {
  using E = ElementType;
  switch (relation) {
    case RelationKind::kClasses: return from == E::kProject && to == E::kClazz;
    case RelationKind::kFields: return from == E::kClazz && to == E::kField;
    case RelationKind::kMethods: return from == E::kClazz && to == E::kMethod;
    case RelationKind::kSuperclass:
      return from == E::kClazz && to == E::kClazz;
    case RelationKind::kInstructions:
      return from == E::kMethod && to == E::kInstruction;
    case RelationKind::kCfgNext:
    case RelationKind::kCfgBranch:
    case RelationKind::kCfgException:
      return from == E::kInstruction && to == E::kInstruction;
    case RelationKind::kFieldRef:
      return from == E::kInstruction && to == E::kFieldRef;
    case RelationKind::kMethodRef:
      return from == E::kInstruction && to == E::kMethodRef;
    case RelationKind::kTypeRef:
      return from == E::kInstruction && to == E::kTypeRef;
    case RelationKind::kTarget:
      return (from == E::kFieldRef && to == E::kField) ||
             (from == E::kMethodRef && to == E::kMethod);
  }
  return false;
}

namespace {

using KindSet = std::vector<InstructionKind>;

struct AttrSpec {
  const char* name;
  ElementType element;
  KindSet kinds;  // instruction kinds carrying it; empty means all
};

const std::vector<AttrSpec>& AttrSpecs() {
  using E = ElementType;
  using K = InstructionKind;
  static const std::vector<AttrSpec> specs = {
      {"name", E::kClazz, {}},
      {"superName", E::kClazz, {}},
      {"accessFlags", E::kClazz, {}},
      {"isInterface", E::kClazz, {}},
      {"isAbstract", E::kClazz, {}},
      {"descriptor", E::kClazz, {}},
      {"name", E::kField, {}},
      {"descriptor", E::kField, {}},
      {"accessFlags", E::kField, {}},
      {"isStatic", E::kField, {}},
      {"isBasic", E::kField, {}},
      {"isPrimitive", E::kField, {}},
      {"valueType", E::kField, {}},
      {"owner", E::kField, {}},
      {"name", E::kMethod, {}},
      {"descriptor", E::kMethod, {}},
      {"accessFlags", E::kMethod, {}},
      {"isStatic", E::kMethod, {}},
      {"isAbstract", E::kMethod, {}},
      {"isConstructor", E::kMethod, {}},
      {"returnType", E::kMethod, {}},
      {"param0", E::kMethod, {}},
      {"paramCount", E::kMethod, {}},
      {"accessorKind", E::kMethod, {}},
      {"owner", E::kMethod, {}},
      {"body", E::kMethod, {}},
      {"kind", E::kInstruction, {}},
      {"index", E::kInstruction, {}},
      {"mnemonic", E::kInstruction, {}},
      {"type", E::kInstruction, {K::kLoad, K::kStore, K::kArithmetic,
                                 K::kReturn}},
      {"slot", E::kInstruction, {K::kLoad, K::kStore, K::kIncrement}},
      {"paramDescriptor", E::kInstruction, {K::kLoad, K::kStore}},
      {"delta", E::kInstruction, {K::kIncrement}},
      {"operation", E::kInstruction, {K::kArithmetic}},
      {"operands", E::kInstruction, {K::kBranch}},
      {"relation", E::kInstruction, {K::kBranch}},
      {"keyCount", E::kInstruction, {K::kSwitch}},
      {"op", E::kInstruction, {K::kFieldAccess, K::kTypeCheck, K::kStack}},
      {"owner", E::kInstruction, {K::kFieldAccess, K::kInvoke}},
      {"name", E::kInstruction, {K::kFieldAccess, K::kInvoke}},
      {"descriptor", E::kInstruction, {K::kFieldAccess, K::kInvoke}},
      {"invokeKind", E::kInstruction, {K::kInvoke}},
      {"ownerKind", E::kInstruction, {K::kInvoke}},
      {"accessorKind", E::kInstruction, {K::kInvoke}},
      {"typeName", E::kInstruction, {K::kNew, K::kNewArray, K::kTypeCheck}},
      {"constantKind", E::kInstruction, {K::kPush}},
      {"value", E::kInstruction, {K::kPush}},
      {"owner", E::kFieldRef, {}},
      {"name", E::kFieldRef, {}},
      {"descriptor", E::kFieldRef, {}},
      {"owner", E::kMethodRef, {}},
      {"name", E::kMethodRef, {}},
      {"descriptor", E::kMethodRef, {}},
      {"ownerKind", E::kMethodRef, {}},
      {"accessorKind", E::kMethodRef, {}},
      {"name", E::kTypeRef, {}},
  };
  return specs;
}

Value Bool(bool b) { return Value(int64_t{b ? 1 : 0}); }
Value Str(std::string s) { return Value(std::move(s)); }
Value Int(int64_t i) { return Value(i); }

}  // namespace

bool AttributeKnown(const NodeType& t, std::string_view attr) {
  for (const auto& spec : AttrSpecs()) {
    if (spec.element != t.element || attr != spec.name) continue;
    if (!t.kind || spec.kinds.size() == 0) return true;
    if (std::find(spec.kinds.begin(), spec.kinds.end(), *t.kind) !=
        spec.kinds.end()) {
      return true;
    }
  }
  return false;
}

ProjectView::ProjectView(const Project& project) : project_(&project) {
  for (uint32_t i = 0; i < project.classes.size(); ++i) {
    class_index_.emplace(project.classes[i].name, i);
  }
}

std::optional<uint32_t> ProjectView::ClassIndex(std::string_view name) const {
  auto it = class_index_.find(name);
  if (it == class_index_.end()) return std::nullopt;
  return it->second;
}

const Clazz* ProjectView::clazz(ElementRef e) const {
  if (e.type == ElementType::kProject) return nullptr;
  if (e.cls >= project_->classes.size()) return nullptr;
  return &project_->classes[e.cls];
}

const Field* ProjectView::field(ElementRef e) const {
  const Clazz* c = clazz(e);
  if (!c || e.type != ElementType::kField || e.member >= c->fields.size()) {
    return nullptr;
  }
  return &c->fields[e.member];
}

const Method* ProjectView::method(ElementRef e) const {
  const Clazz* c = clazz(e);
  if (!c || e.type == ElementType::kClazz || e.type == ElementType::kField ||
      e.member >= c->methods.size()) {
    return nullptr;
  }
  return &c->methods[e.member];
}

const Instruction* ProjectView::instruction(ElementRef e) const {
  if (e.type < ElementType::kInstruction) return nullptr;
  const Method* m = method(e);
  return m ? m->Find(e.insn) : nullptr;
}

std::size_t ProjectView::InsnIndex(const Method& m, InstructionId id) const {
  return m.IndexOf(id).value_or(0);
}

namespace {

bool RefKindMatches(ElementType type, const Instruction& insn) {
  switch (type) {
    case ElementType::kFieldRef: return insn.field_ref() != nullptr;
    case ElementType::kMethodRef: return insn.method_ref() != nullptr;
    case ElementType::kTypeRef: return insn.type_ref() != nullptr;
    default: return true;
  }
}

ElementType RefTypeOf(RelationKind r) {
  switch (r) {
    case RelationKind::kFieldRef: return ElementType::kFieldRef;
    case RelationKind::kMethodRef: return ElementType::kMethodRef;
    default: return ElementType::kTypeRef;
  }
}

}  // namespace

bool ProjectView::Exists(ElementRef e) const {
  switch (e.type) {
    case ElementType::kProject: return true;
    case ElementType::kClazz: return clazz(e) != nullptr;
    case ElementType::kField: return field(e) != nullptr;
    case ElementType::kMethod: return method(e) != nullptr;
    default: {
      const Instruction* insn = instruction(e);
      return insn && RefKindMatches(e.type, *insn);
    }
  }
}

bool ProjectView::Matches(ElementRef e, const NodeType& type) const {
  if (e.type != type.element || !Exists(e)) return false;
  if (type.kind) return instruction(e)->kind() == *type.kind;
  return true;
}

std::vector<ElementRef> ProjectView::All(const NodeType& type) const {
  std::vector<ElementRef> out;
  const auto& classes = project_->classes;
  switch (type.element) {
    case ElementType::kProject:
      out.push_back({});
      return out;
    case ElementType::kClazz:
      for (uint32_t c = 0; c < classes.size(); ++c) {
        out.push_back({ElementType::kClazz, c, 0, 0});
      }
      return out;
    case ElementType::kField:
      for (uint32_t c = 0; c < classes.size(); ++c) {
        for (uint32_t f = 0; f < classes[c].fields.size(); ++f) {
          out.push_back({ElementType::kField, c, f, 0});
        }
      }
      return out;
    case ElementType::kMethod:
      for (uint32_t c = 0; c < classes.size(); ++c) {
        for (uint32_t m = 0; m < classes[c].methods.size(); ++m) {
          out.push_back({ElementType::kMethod, c, m, 0});
        }
      }
      return out;
    default:
      for (uint32_t c = 0; c < classes.size(); ++c) {
        for (uint32_t m = 0; m < classes[c].methods.size(); ++m) {
          for (const auto& insn : classes[c].methods[m].instructions) {
            if (type.kind && insn.kind() != *type.kind) continue;
            if (!RefKindMatches(type.element, insn)) continue;
            out.push_back({type.element, c, m, insn.id});
          }
        }
      }
      return out;
  }
}

std::optional<Value> ProjectView::Attribute(ElementRef e,
                                            std::string_view name) const {
  switch (e.type) {
    case ElementType::kProject: return std::nullopt;
    case ElementType::kClazz: {
      const Clazz* c = clazz(e);
      if (!c) return std::nullopt;
      if (name == "name") return Str(c->name);
      if (name == "superName") return Str(c->super_name);
      if (name == "descriptor") return Str(descriptor::OfClassName(c->name));
      if (name == "accessFlags") return Int(c->access_flags);
      if (name == "isInterface") return Bool(c->is_interface());
      if (name == "isAbstract") {
        return Bool(c->access_flags & access::kAbstract);
      }
      return std::nullopt;
    }
    case ElementType::kField: {
      const Field* f = field(e);
      if (!f) return std::nullopt;
      if (name == "name") return Str(f->name);
      if (name == "descriptor" || name == "valueType") {
        return Str(f->descriptor);
      }
      if (name == "accessFlags") return Int(f->access_flags);
      if (name == "isStatic") return Bool(f->is_static());
      if (name == "isBasic") return Bool(descriptor::IsBasic(f->descriptor));
      if (name == "isPrimitive") {
        return Bool(descriptor::IsPrimitive(f->descriptor));
      }
      if (name == "owner") return Str(clazz(e)->name);
      return std::nullopt;
    }
    case ElementType::kMethod: {
      const Method* m = method(e);
      if (!m) return std::nullopt;
      if (name == "name") return Str(m->name);
      if (name == "descriptor") return Str(m->descriptor);
      if (name == "accessFlags") return Int(m->access_flags);
      if (name == "isStatic") return Bool(m->is_static());
      if (name == "isAbstract") {
        return Bool(m->access_flags & access::kAbstract);
      }
      if (name == "isConstructor") return Bool(m->is_constructor());
      if (name == "owner") return Str(clazz(e)->name);
      if (name == "accessorKind") {
        return Str(AccessorKindOf(m->name, m->descriptor));
      }
      auto shape = descriptor::ParseMethod(m->descriptor);
      if (!shape) return std::nullopt;
      if (name == "returnType") return Str(shape->ret);
      if (name == "param0") {
        return Str(shape->params.empty() ? "" : shape->params[0]);
      }
      if (name == "paramCount") {
        return Int(static_cast<int64_t>(shape->params.size()));
      }
      return std::nullopt;
    }
    case ElementType::kFieldRef:
    case ElementType::kMethodRef:
    case ElementType::kTypeRef: {
      const Instruction* insn = instruction(e);
      if (!insn) return std::nullopt;
      if (e.type == ElementType::kTypeRef) {
        const TypeRef* t = insn->type_ref();
        if (t && name == "name") return Str(t->name);
        return std::nullopt;
      }
      if (e.type == ElementType::kFieldRef) {
        const FieldRef* r = insn->field_ref();
        if (!r) return std::nullopt;
        if (name == "owner") return Str(r->owner);
        if (name == "name") return Str(r->name);
        if (name == "descriptor") return Str(r->descriptor);
        return std::nullopt;
      }
      const MethodRef* r = insn->method_ref();
      if (!r) return std::nullopt;
      if (name == "owner") return Str(r->owner);
      if (name == "name") return Str(r->name);
      if (name == "descriptor") return Str(r->descriptor);
      if (name == "ownerKind") return Str(OwnerKindOf(r->owner));
      if (name == "accessorKind") {
        return Str(AccessorKindOf(r->name, r->descriptor));
      }
      return std::nullopt;
    }
    case ElementType::kInstruction:
      break;
  }

  const Method* m = method(e);
  const Instruction* insn = instruction(e);
  if (!insn) return std::nullopt;
  if (name == "kind") return Str(InstructionKindName(insn->kind()));
  if (name == "index") {
    return Int(static_cast<int64_t>(InsnIndex(*m, insn->id)));
  }
  if (name == "mnemonic") return Str(MnemonicOf(*insn));

  auto param_descriptor = [&](uint16_t slot) -> std::string {
    auto shape = descriptor::ParseMethod(m->descriptor);
    if (!shape) return "";
    int s = m->is_static() ? 0 : 1;
    for (const auto& p : shape->params) {
      if (s == slot) return p;
      s += descriptor::SlotSize(p);
    }
    return "";
  };

  return std::visit(
      [&](const auto& o) -> std::optional<Value> {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Load> ||
                      std::is_same_v<T, op::Store>) {
          if (name == "type") return Str(std::string(1, TypeLetter(o.type)));
          if (name == "slot") return Int(o.slot);
          if (name == "paramDescriptor") return Str(param_descriptor(o.slot));
        } else if constexpr (std::is_same_v<T, op::Increment>) {
          if (name == "slot") return Int(o.slot);
          if (name == "delta") return Int(o.delta);
        } else if constexpr (std::is_same_v<T, op::Arithmetic>) {
          if (name == "type") return Str(std::string(1, TypeLetter(o.type)));
          if (name == "operation") return Str(ArithmeticOpName(o.op));
        } else if constexpr (std::is_same_v<T, op::Branch>) {
          if (name == "operands") return Str(BranchOperandsName(o.operands));
          if (name == "relation") return Str(RelationName(o.relation));
        } else if constexpr (std::is_same_v<T, op::Switch>) {
          if (name == "keyCount") {
            return Int(static_cast<int64_t>(o.keys.size()));
          }
        } else if constexpr (std::is_same_v<T, op::FieldAccess>) {
          if (name == "op") return Str(FieldOpName(o.op));
          if (name == "owner") return Str(o.ref.owner);
          if (name == "name") return Str(o.ref.name);
          if (name == "descriptor") return Str(o.ref.descriptor);
        } else if constexpr (std::is_same_v<T, op::Invoke>) {
          if (name == "invokeKind") return Str(InvokeKindName(o.kind));
          if (name == "owner") return Str(o.ref.owner);
          if (name == "name") return Str(o.ref.name);
          if (name == "descriptor") return Str(o.ref.descriptor);
          if (name == "ownerKind") return Str(OwnerKindOf(o.ref.owner));
          if (name == "accessorKind") {
            return Str(AccessorKindOf(o.ref.name, o.ref.descriptor));
          }
        } else if constexpr (std::is_same_v<T, op::New> ||
                             std::is_same_v<T, op::TypeCheck>) {
          if (name == "typeName") return Str(o.type.name);
          if constexpr (std::is_same_v<T, op::TypeCheck>) {
            if (name == "op") return Str(TypeCheckOpName(o.op));
          }
        } else if constexpr (std::is_same_v<T, op::NewArray>) {
          if (name == "typeName") return Str(o.array_type.name);
        } else if constexpr (std::is_same_v<T, op::Push>) {
          if (name == "constantKind") return Str(KindName(o.value.kind));
          if (name == "value") {
            if (o.value.kind == Constant::Kind::kInteger ||
                o.value.kind == Constant::Kind::kLong) {
              return Int(o.value.bits);
            }
            return Str(o.value.ToString());
          }
        } else if constexpr (std::is_same_v<T, op::Return>) {
          if (name == "type") {
            return Str(o.type ? std::string(1, TypeLetter(*o.type)) : "V");
          }
        } else if constexpr (std::is_same_v<T, op::Stack>) {
          if (name == "op") return Str(StackOpName(o.op));
        }
        return std::nullopt;
      },
      insn->op);
}

std::optional<ElementRef> ProjectView::ResolveField(
    std::string_view owner, std::string_view name,
    std::string_view desc) const {
  std::set<std::string_view> seen;
  // Superclass chain first, interfaces after it.
  std::vector<std::string_view> interfaces;
  for (std::string_view cls = owner; !cls.empty();) {
    auto idx = ClassIndex(cls);
    if (!idx || !seen.insert(cls).second) break;
    const Clazz& c = project_->classes[*idx];
    for (uint32_t f = 0; f < c.fields.size(); ++f) {
      if (c.fields[f].name == name && c.fields[f].descriptor == desc) {
        return ElementRef{ElementType::kField, *idx, f, 0};
      }
    }
    for (const auto& i : c.interfaces) interfaces.push_back(i);
    cls = c.super_name;
  }
  while (!interfaces.empty()) {
    std::string_view cls = interfaces.front();
    interfaces.erase(interfaces.begin());
    auto idx = ClassIndex(cls);
    if (!idx || !seen.insert(cls).second) continue;
    const Clazz& c = project_->classes[*idx];
    for (uint32_t f = 0; f < c.fields.size(); ++f) {
      if (c.fields[f].name == name && c.fields[f].descriptor == desc) {
        return ElementRef{ElementType::kField, *idx, f, 0};
      }
    }
    for (const auto& i : c.interfaces) interfaces.push_back(i);
  }
  return std::nullopt;
}

std::optional<ElementRef> ProjectView::ResolveMethod(
    std::string_view owner, std::string_view name,
    std::string_view desc) const {
  std::set<std::string_view> seen;
  std::vector<std::string_view> interfaces;
  for (std::string_view cls = owner; !cls.empty();) {
    auto idx = ClassIndex(cls);
    if (!idx || !seen.insert(cls).second) break;
    const Clazz& c = project_->classes[*idx];
    for (uint32_t m = 0; m < c.methods.size(); ++m) {
      if (c.methods[m].name == name && c.methods[m].descriptor == desc) {
        return ElementRef{ElementType::kMethod, *idx, m, 0};
      }
    }
    for (const auto& i : c.interfaces) interfaces.push_back(i);
    cls = c.super_name;
  }
  while (!interfaces.empty()) {
    std::string_view cls = interfaces.front();
    interfaces.erase(interfaces.begin());
    auto idx = ClassIndex(cls);
    if (!idx || !seen.insert(cls).second) continue;
    const Clazz& c = project_->classes[*idx];
    for (uint32_t m = 0; m < c.methods.size(); ++m) {
      if (c.methods[m].name == name && c.methods[m].descriptor == desc) {
        return ElementRef{ElementType::kMethod, *idx, m, 0};
      }
    }
    for (const auto& i : c.interfaces) interfaces.push_back(i);
  }
  return std::nullopt;
}

std::optional<ElementRef> ProjectView::RefTarget(ElementRef ref) const {
  const Instruction* insn = instruction(ref);
  if (!insn) return std::nullopt;
  if (ref.type == ElementType::kFieldRef) {
    const FieldRef* r = insn->field_ref();
    if (r) return ResolveField(r->owner, r->name, r->descriptor);
  } else if (ref.type == ElementType::kMethodRef) {
    const MethodRef* r = insn->method_ref();
    if (r) return ResolveMethod(r->owner, r->name, r->descriptor);
  }
  return std::nullopt;
}

std::vector<ElementRef> ProjectView::Targets(ElementRef from,
                                             RelationKind r) const {
  std::vector<ElementRef> out;
  if (!Exists(from)) return out;
  switch (r) {
    case RelationKind::kClasses:
      if (from.type == ElementType::kProject) {
        return All({ElementType::kClazz, std::nullopt});
      }
      return out;
    case RelationKind::kFields:
      if (const Clazz* c = from.type == ElementType::kClazz ? clazz(from)
                                                            : nullptr) {
        for (uint32_t f = 0; f < c->fields.size(); ++f) {
          out.push_back({ElementType::kField, from.cls, f, 0});
        }
      }
      return out;
    case RelationKind::kMethods:
      if (const Clazz* c = from.type == ElementType::kClazz ? clazz(from)
                                                            : nullptr) {
        for (uint32_t m = 0; m < c->methods.size(); ++m) {
          out.push_back({ElementType::kMethod, from.cls, m, 0});
        }
      }
      return out;
    case RelationKind::kSuperclass:
      if (from.type == ElementType::kClazz) {
        if (auto idx = ClassIndex(clazz(from)->super_name)) {
          out.push_back({ElementType::kClazz, *idx, 0, 0});
        }
      }
      return out;
    case RelationKind::kInstructions:
      if (from.type == ElementType::kMethod) {
        for (const auto& insn : method(from)->instructions) {
          out.push_back(
              {ElementType::kInstruction, from.cls, from.member, insn.id});
        }
      }
      return out;
    case RelationKind::kCfgNext:
    case RelationKind::kCfgBranch:
    case RelationKind::kCfgException:
      if (from.type == ElementType::kInstruction) {
        EdgeKind kind = *CfgKind(r);
        for (const auto* edge : method(from)->OutEdges(from.insn)) {
          if (edge->kind != kind) continue;
          ElementRef to{ElementType::kInstruction, from.cls, from.member,
                        edge->end};
          if (Exists(to)) out.push_back(to);
        }
      }
      return out;
    case RelationKind::kFieldRef:
    case RelationKind::kMethodRef:
    case RelationKind::kTypeRef:
      if (from.type == ElementType::kInstruction) {
        ElementRef to{RefTypeOf(r), from.cls, from.member, from.insn};
        if (Exists(to)) out.push_back(to);
      }
      return out;
    case RelationKind::kTarget:
      if (from.type == ElementType::kFieldRef ||
          from.type == ElementType::kMethodRef) {
        if (auto t = RefTarget(from)) out.push_back(*t);
      }
      return out;
  }
  return out;
}

std::vector<ElementRef> ProjectView::Sources(RelationKind r,
                                             ElementRef to) const {
  std::vector<ElementRef> out;
  if (!Exists(to)) return out;
  switch (r) {
    case RelationKind::kClasses:
      if (to.type == ElementType::kClazz) out.push_back({});
      return out;
    case RelationKind::kFields:
      if (to.type == ElementType::kField) {
        out.push_back({ElementType::kClazz, to.cls, 0, 0});
      }
      return out;
    case RelationKind::kMethods:
      if (to.type == ElementType::kMethod) {
        out.push_back({ElementType::kClazz, to.cls, 0, 0});
      }
      return out;
    case RelationKind::kSuperclass:
      if (to.type == ElementType::kClazz) {
        const std::string& name = clazz(to)->name;
        for (uint32_t c = 0; c < project_->classes.size(); ++c) {
          if (project_->classes[c].super_name == name) {
            out.push_back({ElementType::kClazz, c, 0, 0});
          }
        }
      }
      return out;
    case RelationKind::kInstructions:
      if (to.type == ElementType::kInstruction) {
        out.push_back({ElementType::kMethod, to.cls, to.member, 0});
      }
      return out;
    case RelationKind::kCfgNext:
    case RelationKind::kCfgBranch:
    case RelationKind::kCfgException:
      if (to.type == ElementType::kInstruction) {
        EdgeKind kind = *CfgKind(r);
        std::set<InstructionId> seen;
        for (const auto* edge : method(to)->InEdges(to.insn)) {
          if (edge->kind != kind || !seen.insert(edge->start).second) {
            continue;
          }
          ElementRef from{ElementType::kInstruction, to.cls, to.member,
                          edge->start};
          if (Exists(from)) out.push_back(from);
        }
        std::sort(out.begin(), out.end(), [&](ElementRef a, ElementRef b) {
          return InsnIndex(*method(a), a.insn) < InsnIndex(*method(b), b.insn);
        });
      }
      return out;
    case RelationKind::kFieldRef:
    case RelationKind::kMethodRef:
    case RelationKind::kTypeRef:
      if (to.type == RefTypeOf(r)) {
        out.push_back({ElementType::kInstruction, to.cls, to.member, to.insn});
      }
      return out;
    case RelationKind::kTarget: {
      ElementType ref_type;
      if (to.type == ElementType::kField) {
        ref_type = ElementType::kFieldRef;
      } else if (to.type == ElementType::kMethod) {
        ref_type = ElementType::kMethodRef;
      } else {
        return out;
      }
      for (ElementRef ref : All({ref_type, std::nullopt})) {
        if (RefTarget(ref) == to) out.push_back(ref);
      }
      return out;
    }
  }
  return out;
}

bool ProjectView::Related(ElementRef from, RelationKind r,
                          ElementRef to) const {
  if (!Exists(from) || !Exists(to)) return false;
  switch (r) {
    case RelationKind::kClasses:
      return from.type == ElementType::kProject &&
             to.type == ElementType::kClazz;
    case RelationKind::kFields:
      return from.type == ElementType::kClazz &&
             to.type == ElementType::kField && from.cls == to.cls;
    case RelationKind::kMethods:
      return from.type == ElementType::kClazz &&
             to.type == ElementType::kMethod && from.cls == to.cls;
    case RelationKind::kSuperclass:
      return from.type == ElementType::kClazz &&
             to.type == ElementType::kClazz &&
             clazz(from)->super_name == clazz(to)->name;
    case RelationKind::kInstructions:
      return from.type == ElementType::kMethod &&
             to.type == ElementType::kInstruction && from.cls == to.cls &&
             from.member == to.member;
    case RelationKind::kCfgNext:
    case RelationKind::kCfgBranch:
    case RelationKind::kCfgException: {
      if (from.type != ElementType::kInstruction ||
          to.type != ElementType::kInstruction || from.cls != to.cls ||
          from.member != to.member) {
        return false;
      }
      EdgeKind kind = *CfgKind(r);
      for (const auto* edge : method(from)->OutEdges(from.insn)) {
        if (edge->kind == kind && edge->end == to.insn) return true;
      }
      return false;
    }
    case RelationKind::kFieldRef:
    case RelationKind::kMethodRef:
    case RelationKind::kTypeRef:
      return from.type == ElementType::kInstruction &&
             to.type == RefTypeOf(r) && from.cls == to.cls &&
             from.member == to.member && from.insn == to.insn;
    case RelationKind::kTarget:
      return RefTarget(from) == to;
  }
  return false;
}

ElementKey ProjectView::KeyOf(ElementRef e) const {
  ElementKey key;
  key.type = e.type;
  if (e.type == ElementType::kProject) return key;
  key.class_name = clazz(e)->name;
  if (e.type == ElementType::kClazz) return key;
  if (e.type == ElementType::kField) {
    key.member_name = field(e)->name;
    key.member_descriptor = field(e)->descriptor;
    return key;
  }
  const Method* m = method(e);
  key.member_name = m->name;
  key.member_descriptor = m->descriptor;
  if (e.type != ElementType::kMethod) {
    key.insn = e.insn;
    key.insn_index = InsnIndex(*m, e.insn);
  }
  return key;
}

std::optional<ElementRef> ProjectView::Resolve(const ElementKey& key) const {
  if (key.type == ElementType::kProject) return ElementRef{};
  auto cls = ClassIndex(key.class_name);
  if (!cls) return std::nullopt;
  ElementRef e{key.type, *cls, 0, 0};
  if (key.type == ElementType::kClazz) return e;
  const Clazz& c = project_->classes[*cls];
  if (key.type == ElementType::kField) {
    for (uint32_t f = 0; f < c.fields.size(); ++f) {
      if (c.fields[f].name == key.member_name &&
          c.fields[f].descriptor == key.member_descriptor) {
        e.member = f;
        return e;
      }
    }
    return std::nullopt;
  }
  for (uint32_t m = 0; m < c.methods.size(); ++m) {
    if (c.methods[m].name == key.member_name &&
        c.methods[m].descriptor == key.member_descriptor) {
      e.member = m;
      if (key.type == ElementType::kMethod) return e;
      e.insn = key.insn;
      if (!Exists(e)) return std::nullopt;
      return e;
    }
  }
  return std::nullopt;
}

}  // namespace jmut
