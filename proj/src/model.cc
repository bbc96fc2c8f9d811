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

#include "jmut/model.h"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <unordered_map>

namespace jmut {

Constant Constant::Integer(int32_t v) {
  Constant c;
  c.kind = Kind::kInteger;
  c.bits = v;
  return c;
}

Constant Constant::Long(int64_t v) {
  Constant c;
  c.kind = Kind::kLong;
  c.bits = v;
  return c;
}

Constant Constant::Float(float v) {
  Constant c;
  c.kind = Kind::kFloat;
  c.bits = std::bit_cast<uint32_t>(v);
  return c;
}

Constant Constant::Double(double v) {
  Constant c;
  c.kind = Kind::kDouble;
  c.bits = static_cast<int64_t>(std::bit_cast<uint64_t>(v));
  return c;
}

Constant Constant::String(std::string v) {
  Constant c;
  c.kind = Kind::kString;
  c.text = std::move(v);
  return c;
}

Constant Constant::Class(std::string internal_name) {
  Constant c;
  c.kind = Kind::kClass;
  c.text = std::move(internal_name);
  return c;
}

Constant Constant::Utf8(std::string v) {
  Constant c;
  c.kind = Kind::kUtf8;
  c.text = std::move(v);
  return c;
}

float Constant::as_float() const {
  return std::bit_cast<float>(static_cast<uint32_t>(bits));
}

double Constant::as_double() const {
  return std::bit_cast<double>(static_cast<uint64_t>(bits));
}

namespace {

template <typename T>
std::string ShortestDecimal(T v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

std::string Constant::ToString() const {
  switch (kind) {
    case Kind::kNull: return "null";
    case Kind::kInteger:
    case Kind::kLong: return std::to_string(bits);
    case Kind::kFloat: return ShortestDecimal(as_float());
    case Kind::kDouble: return ShortestDecimal(as_double());
    case Kind::kUtf8:
    case Kind::kString:
    case Kind::kClass:
    case Kind::kModule:
    case Kind::kPackage:
    case Kind::kMethodType: return text;
    case Kind::kFieldRef:
    case Kind::kMethodRef:
    case Kind::kInterfaceMethodRef: return owner + "." + name + ":" + descriptor;
    case Kind::kNameAndType: return name + ":" + descriptor;
    case Kind::kMethodHandle:
      return "handle(" + std::to_string(index) + "," +
             (target.empty() ? std::string() : target[0].ToString()) + ")";
    case Kind::kDynamic:
    case Kind::kInvokeDynamic:
      return "bsm" + std::to_string(index) + ":" + name + ":" + descriptor;
  }
  return {};
}

const char* KindName(Constant::Kind kind) {
  switch (kind) {
    case Constant::Kind::kNull: return "null";
    case Constant::Kind::kUtf8: return "utf8";
    case Constant::Kind::kInteger: return "int";
    case Constant::Kind::kFloat: return "float";
    case Constant::Kind::kLong: return "long";
    case Constant::Kind::kDouble: return "double";
    case Constant::Kind::kClass: return "class";
    case Constant::Kind::kString: return "string";
    case Constant::Kind::kFieldRef: return "fieldref";
    case Constant::Kind::kMethodRef: return "methodref";
    case Constant::Kind::kInterfaceMethodRef: return "interfacemethodref";
    case Constant::Kind::kNameAndType: return "nameandtype";
    case Constant::Kind::kMethodHandle: return "methodhandle";
    case Constant::Kind::kMethodType: return "methodtype";
    case Constant::Kind::kDynamic: return "dynamic";
    case Constant::Kind::kInvokeDynamic: return "invokedynamic";
    case Constant::Kind::kModule: return "module";
    case Constant::Kind::kPackage: return "package";
  }
  return "?";
}

char TypeLetter(ValueType type) {
  switch (type) {
    case ValueType::kInt: return 'I';
    case ValueType::kLong: return 'J';
    case ValueType::kFloat: return 'F';
    case ValueType::kDouble: return 'D';
    case ValueType::kReference: return 'A';
  }
  return '?';
}

std::optional<ValueType> ValueTypeFromLetter(std::string_view letter) {
  if (letter == "I") return ValueType::kInt;
  if (letter == "J") return ValueType::kLong;
  if (letter == "F") return ValueType::kFloat;
  if (letter == "D") return ValueType::kDouble;
  if (letter == "A") return ValueType::kReference;
  return std::nullopt;
}

namespace {

constexpr std::array<const char*, kInstructionKindCount> kKindNames = {
    "LoadInstruction",       "StoreInstruction",    "IncrementInstruction",
    "ArithmeticInstruction", "BranchInstruction",   "GotoInstruction",
    "SwitchInstruction",     "FieldInstruction",    "InvokeInstruction",
    "DynamicInvokeInstruction", "NewInstruction",   "NewArrayInstruction",
    "ConstantInstruction",   "ReturnInstruction",   "ThrowInstruction",
    "TypeCheckInstruction",  "StackInstruction",    "RawInstruction",
};

}  // namespace

const char* InstructionKindName(InstructionKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<InstructionKind> InstructionKindFromName(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (name == kKindNames[i]) return static_cast<InstructionKind>(i);
  }
  return std::nullopt;
}

const char* EdgeKindName(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kUnconditional: return "UnconditionalEdge";
    case EdgeKind::kConditional: return "ConditionalEdge";
    case EdgeKind::kExceptional: return "ExceptionalEdge";
  }
  return "?";
}

const FieldRef* Instruction::field_ref() const {
  if (auto* f = as<op::FieldAccess>()) return &f->ref;
  return nullptr;
}

const MethodRef* Instruction::method_ref() const {
  if (auto* i = as<op::Invoke>()) return &i->ref;
  return nullptr;
}

const TypeRef* Instruction::type_ref() const {
  if (auto* n = as<op::New>()) return &n->type;
  if (auto* a = as<op::NewArray>()) return &a->array_type;
  if (auto* t = as<op::TypeCheck>()) return &t->type;
  return nullptr;
}

std::optional<std::size_t> Method::IndexOf(InstructionId id) const {
  // Freshly parsed methods number instructions by layout position.
  if (id < instructions.size() && instructions[id].id == id) return id;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    if (instructions[i].id == id) return i;
  }
  return std::nullopt;
}

const Instruction* Method::Find(InstructionId id) const {
  auto idx = IndexOf(id);
  return idx ? &instructions[*idx] : nullptr;
}

Instruction* Method::Find(InstructionId id) {
  auto idx = IndexOf(id);
  return idx ? &instructions[*idx] : nullptr;
}

InstructionId Method::NextId() const {
  InstructionId next = 0;
  for (const auto& insn : instructions) next = std::max(next, insn.id + 1);
  return next;
}

std::vector<const ControlFlowEdge*> Method::OutEdges(InstructionId id) const {
  std::vector<const ControlFlowEdge*> out;
  for (const auto& e : edges) {
    if (e.start == id) out.push_back(&e);
  }
  return out;
}

std::vector<const ControlFlowEdge*> Method::InEdges(InstructionId id) const {
  std::vector<const ControlFlowEdge*> out;
  for (const auto& e : edges) {
    if (e.end == id) out.push_back(&e);
  }
  return out;
}

std::vector<std::vector<const ControlFlowEdge*>> OutEdgesByIndex(
    const Method& method) {
  std::unordered_map<InstructionId, std::size_t> index;
  for (std::size_t i = 0; i < method.instructions.size(); ++i) {
    index[method.instructions[i].id] = i;
  }
  std::vector<std::vector<const ControlFlowEdge*>> out(
      method.instructions.size());
  for (const auto& e : method.edges) {
    auto it = index.find(e.start);
    if (it != index.end()) out[it->second].push_back(&e);
  }
  return out;
}

void Method::RebuildExceptionalEdges() {
  std::erase_if(edges, [](const ControlFlowEdge& e) {
    return e.kind == EdgeKind::kExceptional;
  });
  for (const auto& h : exception_handlers) {
    edges.push_back({EdgeKind::kExceptional, h.start, h.handler});
  }
}

const Method* Clazz::FindMethod(std::string_view n,
                                std::string_view d) const {
  for (const auto& m : methods) {
    if (m.name == n && m.descriptor == d) return &m;
  }
  return nullptr;
}

const Field* Clazz::FindField(std::string_view n, std::string_view d) const {
  for (const auto& f : fields) {
    if (f.name == n && f.descriptor == d) return &f;
  }
  return nullptr;
}

const Clazz* Project::FindClass(std::string_view name) const {
  for (const auto& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Method Canonical(const Method& method) {
  Method out = method;
  std::unordered_map<InstructionId, InstructionId> renumber;
  for (std::size_t i = 0; i < out.instructions.size(); ++i) {
    renumber[out.instructions[i].id] = static_cast<InstructionId>(i);
    out.instructions[i].id = static_cast<InstructionId>(i);
    out.instructions[i].offset = 0;
  }
  auto map = [&](InstructionId id) {
    auto it = renumber.find(id);
    return it == renumber.end() ? kNoInstruction : it->second;
  };
  for (auto& e : out.edges) {
    e.start = map(e.start);
    e.end = map(e.end);
  }
  // Edge order only matters among edges leaving the same instruction.
  std::stable_sort(out.edges.begin(), out.edges.end(),
                   [](const ControlFlowEdge& a, const ControlFlowEdge& b) {
                     return a.start < b.start;
                   });
  for (auto& h : out.exception_handlers) {
    h.start = map(h.start);
    h.end = h.end == kNoInstruction ? kNoInstruction : map(h.end);
    h.handler = map(h.handler);
  }
  for (auto& l : out.line_table) l.instruction = map(l.instruction);
  out.max_stack = 0;
  out.max_locals = 0;
  return out;
}

bool Isomorphic(const Method& a, const Method& b) {
  return Canonical(a) == Canonical(b);
}

bool Isomorphic(const Clazz& a, const Clazz& b) {
  if (a.name != b.name || a.super_name != b.super_name ||
      a.interfaces != b.interfaces || a.access_flags != b.access_flags ||
      a.fields != b.fields || a.version != b.version ||
      a.attributes != b.attributes || a.methods.size() != b.methods.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.methods.size(); ++i) {
    if (!Isomorphic(a.methods[i], b.methods[i])) return false;
  }
  return true;
}

bool Isomorphic(const Project& a, const Project& b) {
  if (a.classes.size() != b.classes.size()) return false;
  auto sorted = [](const Project& p) {
    std::vector<const Clazz*> v;
    for (const auto& c : p.classes) v.push_back(&c);
    std::sort(v.begin(), v.end(),
              [](auto* x, auto* y) { return x->name < y->name; });
    return v;
  };
  auto sa = sorted(a);
  auto sb = sorted(b);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (!Isomorphic(*sa[i], *sb[i])) return false;
  }
  return true;
}

}  // namespace jmut
