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
// The typed graph model of a set of class files. A Project owns classes,
// classes own fields and methods, and a method's code is a control-flow
// graph over Instruction values connected by ControlFlowEdge values.
// Everything here is a plain value: copying a Project yields an
// independent model, which is how mutants are produced.

#ifndef JMUT_MODEL_H_
#define JMUT_MODEL_H_

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jmut/constant.h"

namespace jmut {

namespace access {
inline constexpr uint16_t kPublic = 0x0001;
inline constexpr uint16_t kPrivate = 0x0002;
inline constexpr uint16_t kProtected = 0x0004;
inline constexpr uint16_t kStatic = 0x0008;
inline constexpr uint16_t kFinal = 0x0010;
inline constexpr uint16_t kSuper = 0x0020;
inline constexpr uint16_t kSynchronized = 0x0020;
inline constexpr uint16_t kVolatile = 0x0040;
inline constexpr uint16_t kBridge = 0x0040;
inline constexpr uint16_t kTransient = 0x0080;
inline constexpr uint16_t kVarargs = 0x0080;
inline constexpr uint16_t kNative = 0x0100;
inline constexpr uint16_t kInterface = 0x0200;
inline constexpr uint16_t kAbstract = 0x0400;
inline constexpr uint16_t kStrict = 0x0800;
inline constexpr uint16_t kSynthetic = 0x1000;
inline constexpr uint16_t kAnnotation = 0x2000;
inline constexpr uint16_t kEnum = 0x4000;
inline constexpr uint16_t kModule = 0x8000;
}  // namespace access

using InstructionId = uint32_t;
inline constexpr InstructionId kNoInstruction =
    std::numeric_limits<InstructionId>::max();

enum class ValueType : uint8_t { kInt, kLong, kFloat, kDouble, kReference };

// 'I', 'J', 'F', 'D' or 'A'.
char TypeLetter(ValueType type);
std::optional<ValueType> ValueTypeFromLetter(std::string_view letter);

struct FieldRef {
  std::string owner;
  std::string name;
  std::string descriptor;
  bool operator==(const FieldRef&) const = default;
};

struct MethodRef {
  std::string owner;
  std::string name;
  std::string descriptor;
  bool interface = false;  // InterfaceMethodref in the pool
  bool operator==(const MethodRef&) const = default;
};

// An internal class name ("java/lang/String") or an array descriptor.
struct TypeRef {
  std::string name;
  bool operator==(const TypeRef&) const = default;
};

enum class ArithmeticOp : uint8_t {
  kAdd, kSub, kMul, kDiv, kRem, kNeg, kShl, kShr, kUshr, kAnd, kOr, kXor
};

enum class Relation : uint8_t { kEq, kNe, kLt, kGe, kGt, kLe };

// What a conditional branch compares.
enum class BranchOperands : uint8_t {
  kIntZero,   // ifeq .. ifle
  kIntInt,    // if_icmpeq .. if_icmple
  kRefRef,    // if_acmpeq, if_acmpne
  kRefNull,   // ifnull (kEq), ifnonnull (kNe)
};

enum class FieldOp : uint8_t { kGetField, kPutField, kGetStatic, kPutStatic };
enum class InvokeKind : uint8_t { kVirtual, kSpecial, kStatic, kInterface };
enum class TypeCheckOp : uint8_t { kCheckCast, kInstanceOf };
enum class StackOpKind : uint8_t {
  kPop, kPop2, kDup, kDupX1, kDupX2, kDup2, kDup2X1, kDup2X2, kSwap
};

namespace op {

struct Load {
  ValueType type;
  uint16_t slot;
  bool operator==(const Load&) const = default;
};
struct Store {
  ValueType type;
  uint16_t slot;
  bool operator==(const Store&) const = default;
};
struct Increment {
  uint16_t slot;
  int16_t delta;
  bool operator==(const Increment&) const = default;
};
struct Arithmetic {
  ValueType type;  // never kReference
  ArithmeticOp op;
  bool operator==(const Arithmetic&) const = default;
};
// Conditional branch. Taken target is the Conditional edge, fall-through the
// Unconditional edge.
struct Branch {
  BranchOperands operands;
  Relation relation;
  bool operator==(const Branch&) const = default;
};
struct Goto {
  bool operator==(const Goto&) const = default;
};
// Case targets are the Conditional edges in key order; the default target is
// the single Unconditional edge.
struct Switch {
  bool table;  // tableswitch with contiguous keys
  std::vector<int32_t> keys;
  bool operator==(const Switch&) const = default;
};
struct FieldAccess {
  FieldOp op;
  FieldRef ref;
  bool operator==(const FieldAccess&) const = default;
};
struct Invoke {
  InvokeKind kind;
  MethodRef ref;
  bool operator==(const Invoke&) const = default;
};
struct InvokeDynamic {
  Constant call_site;  // kInvokeDynamic
  bool operator==(const InvokeDynamic&) const = default;
};
struct New {
  TypeRef type;
  bool operator==(const New&) const = default;
};
// newarray / anewarray / multianewarray; `array_type` is the descriptor of
// the created array.
struct NewArray {
  TypeRef array_type;
  uint8_t dimensions = 1;
  bool multi = false;
  bool operator==(const NewArray&) const = default;
};
// Any constant push: aconst_null, iconst_*, bipush, sipush, ldc*.
struct Push {
  Constant value;
  bool operator==(const Push&) const = default;
};
struct Return {
  std::optional<ValueType> type;  // nullopt for `return`
  bool operator==(const Return&) const = default;
};
struct Throw {
  bool operator==(const Throw&) const = default;
};
struct TypeCheck {
  TypeCheckOp op;
  TypeRef type;
  bool operator==(const TypeCheck&) const = default;
};
struct Stack {
  StackOpKind op;
  bool operator==(const Stack&) const = default;
};
// Every operand-free opcode without a dedicated variant (conversions, array
// element access, comparisons of long/float/double, monitors, nop).
struct Raw {
  uint8_t opcode;
  bool operator==(const Raw&) const = default;
};

}  // namespace op

using Operation =
    std::variant<op::Load, op::Store, op::Increment, op::Arithmetic,
                 op::Branch, op::Goto, op::Switch, op::FieldAccess, op::Invoke,
                 op::InvokeDynamic, op::New, op::NewArray, op::Push,
                 op::Return, op::Throw, op::TypeCheck, op::Stack, op::Raw>;

// Mirrors the alternatives of Operation, in order.
enum class InstructionKind : uint8_t {
  kLoad, kStore, kIncrement, kArithmetic, kBranch, kGoto, kSwitch,
  kFieldAccess, kInvoke, kInvokeDynamic, kNew, kNewArray, kPush, kReturn,
  kThrow, kTypeCheck, kStack, kRaw,
};
inline constexpr int kInstructionKindCount = 18;

// Model type name used by rules, e.g. "LoadInstruction".
const char* InstructionKindName(InstructionKind kind);
std::optional<InstructionKind> InstructionKindFromName(std::string_view name);

struct Instruction {
  InstructionId id = 0;
  Operation op;
  uint32_t offset = 0;  // bytecode offset at parse time; provenance only

  InstructionKind kind() const {
    return static_cast<InstructionKind>(op.index());
  }
  template <typename T>
  const T* as() const { return std::get_if<T>(&op); }
  template <typename T>
  T* as() { return std::get_if<T>(&op); }

  const FieldRef* field_ref() const;
  const MethodRef* method_ref() const;
  const TypeRef* type_ref() const;

  // Offsets are provenance, not identity.
  bool operator==(const Instruction& other) const {
    return id == other.id && op == other.op;
  }
};

enum class EdgeKind : uint8_t { kUnconditional, kConditional, kExceptional };
const char* EdgeKindName(EdgeKind kind);

struct ControlFlowEdge {
  EdgeKind kind;
  InstructionId start;
  InstructionId end;
  bool operator==(const ControlFlowEdge&) const = default;
};

struct ExceptionHandler {
  InstructionId start;
  InstructionId end;  // exclusive; kNoInstruction means end of code
  InstructionId handler;
  std::string catch_type;  // empty catches everything
  bool operator==(const ExceptionHandler&) const = default;
};

struct LineEntry {
  InstructionId instruction;
  uint16_t line;
  bool operator==(const LineEntry&) const = default;
};

// An attribute the model does not interpret. Constant-pool indices inside
// `bytes` are zeroed and listed in `slots` so the attribute survives the
// pool being rebuilt.
struct OpaqueAttribute {
  struct Slot {
    uint32_t offset;  // position of a big-endian u2 pool index
    Constant value;
    bool operator==(const Slot&) const = default;
  };
  std::string name;
  std::vector<uint8_t> bytes;
  std::vector<Slot> slots;
  bool operator==(const OpaqueAttribute&) const = default;
};

struct Field {
  std::string name;
  std::string descriptor;
  uint16_t access_flags = 0;
  std::optional<Constant> constant_value;
  std::vector<OpaqueAttribute> attributes;

  bool is_static() const { return access_flags & access::kStatic; }
  bool operator==(const Field&) const = default;
};

struct Method {
  std::string name;
  std::string descriptor;
  uint16_t access_flags = 0;
  bool has_code = false;  // false for abstract and native methods
  std::vector<Instruction> instructions;  // layout order; first is the entry
  std::vector<ControlFlowEdge> edges;
  std::vector<ExceptionHandler> exception_handlers;
  std::vector<LineEntry> line_table;
  uint16_t max_stack = 0;
  uint16_t max_locals = 0;
  std::vector<OpaqueAttribute> attributes;

  bool is_static() const { return access_flags & access::kStatic; }
  bool is_constructor() const { return name == "<init>"; }

  // Layout index of `id`, or nullopt.
  std::optional<std::size_t> IndexOf(InstructionId id) const;
  const Instruction* Find(InstructionId id) const;
  Instruction* Find(InstructionId id);
  InstructionId NextId() const;

  std::vector<const ControlFlowEdge*> OutEdges(InstructionId id) const;
  std::vector<const ControlFlowEdge*> InEdges(InstructionId id) const;

  // Rebuilds the Exceptional edges from `exception_handlers`, one per
  // handler from the first covered instruction to the handler.
  void RebuildExceptionalEdges();

  bool operator==(const Method&) const = default;
};

// Outgoing edges of every instruction, indexed by layout position, in edge
// list order. Edges from unknown instructions are left out.
std::vector<std::vector<const ControlFlowEdge*>> OutEdgesByIndex(
    const Method& method);

struct ClassVersion {
  uint16_t major = 52;
  uint16_t minor = 0;
  bool operator==(const ClassVersion&) const = default;
};

struct Clazz {
  std::string name;        // internal binary name, e.g. "pkg/Child"
  std::string super_name;  // empty only for java/lang/Object
  std::vector<std::string> interfaces;
  uint16_t access_flags = 0;
  std::vector<Field> fields;
  std::vector<Method> methods;
  ClassVersion version;
  std::vector<OpaqueAttribute> attributes;

  bool is_interface() const { return access_flags & access::kInterface; }
  const Method* FindMethod(std::string_view name,
                           std::string_view descriptor) const;
  const Field* FindField(std::string_view name,
                         std::string_view descriptor) const;
  bool operator==(const Clazz&) const = default;
};

struct Project {
  std::vector<Clazz> classes;
  std::map<std::string, std::string> origin;  // class name -> source path

  const Clazz* FindClass(std::string_view name) const;
  bool operator==(const Project&) const = default;
};

// Structural comparison up to instruction renumbering: instruction ids are
// matched by layout position, and offsets and max_stack/max_locals are
// ignored. This is the "graph-isomorphic" relation used for round trips.
bool Isomorphic(const Method& a, const Method& b);
bool Isomorphic(const Clazz& a, const Clazz& b);
bool Isomorphic(const Project& a, const Project& b);

// Renumbers instruction ids to layout positions and drops provenance.
Method Canonical(const Method& method);

}  // namespace jmut

#endif  // JMUT_MODEL_H_
