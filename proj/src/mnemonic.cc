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


#include "jmut/mnemonic.h"

#include <array>
#include <bit>
#include <cstring>

#include "jmut/opcodes.h"

namespace jmut {
namespace {

namespace oc = opcodes;

int TypeIndex(ValueType t) {
  switch (t) {
    case ValueType::kInt: return 0;
    case ValueType::kLong: return 1;
    case ValueType::kFloat: return 2;
    case ValueType::kDouble: return 3;
    case ValueType::kReference: return 4;
  }
  return 0;
}

std::string PushMnemonic(const Constant& v) {
  using K = Constant::Kind;
  switch (v.kind) {
    case K::kNull: return "aconst_null";
    case K::kInteger: {
      int32_t x = v.as_int();
      if (x == -1) return "iconst_m1";
      if (x >= 0 && x <= 5) return "iconst_" + std::to_string(x);
      if (x >= -128 && x <= 127) return "bipush";
      if (x >= -32768 && x <= 32767) return "sipush";
      return "ldc";
    }
    case K::kLong:
      return v.bits == 0 || v.bits == 1 ? "lconst_" + std::to_string(v.bits)
                                        : "ldc2_w";
    case K::kFloat:
      for (int i = 0; i <= 2; ++i) {
        if (std::bit_cast<uint32_t>(static_cast<float>(i)) ==
            static_cast<uint32_t>(v.bits)) {
          return "fconst_" + std::to_string(i);
        }
      }
      return "ldc";
    case K::kDouble:
      for (int i = 0; i <= 1; ++i) {
        if (std::bit_cast<uint64_t>(static_cast<double>(i)) ==
            static_cast<uint64_t>(v.bits)) {
          return "dconst_" + std::to_string(i);
        }
      }
      return "ldc2_w";
    case K::kDynamic:
      return !v.descriptor.empty() &&
                     (v.descriptor[0] == 'J' || v.descriptor[0] == 'D')
                 ? "ldc2_w"
                 : "ldc";
    default: return "ldc";
  }
}

struct Namer {
  std::string operator()(const op::Load& o) const {
    return oc::Mnemonic(oc::kIload + TypeIndex(o.type));
  }
  std::string operator()(const op::Store& o) const {
    return oc::Mnemonic(oc::kIstore + TypeIndex(o.type));
  }
  std::string operator()(const op::Increment&) const { return "iinc"; }
  std::string operator()(const op::Arithmetic& o) const {
    int ti = TypeIndex(o.type);
    int k = static_cast<int>(o.op);
    if (o.op <= ArithmeticOp::kRem) return oc::Mnemonic(oc::kIadd + k * 4 + ti);
    if (o.op == ArithmeticOp::kNeg) return oc::Mnemonic(0x74 + ti);
    return oc::Mnemonic(0x78 + (k - static_cast<int>(ArithmeticOp::kShl)) * 2 +
                        ti);
  }
  std::string operator()(const op::Branch& o) const {
    int r = static_cast<int>(o.relation);
    switch (o.operands) {
      case BranchOperands::kIntZero: return oc::Mnemonic(oc::kIfeq + r);
      case BranchOperands::kIntInt: return oc::Mnemonic(oc::kIfIcmpeq + r);
      case BranchOperands::kRefRef: return r == 0 ? "if_acmpeq" : "if_acmpne";
      case BranchOperands::kRefNull: return r == 0 ? "ifnull" : "ifnonnull";
    }
    return "?";
  }
  std::string operator()(const op::Goto&) const { return "goto"; }
  std::string operator()(const op::Switch& o) const {
    return o.table ? "tableswitch" : "lookupswitch";
  }
  std::string operator()(const op::FieldAccess& o) const {
    return FieldOpName(o.op);
  }
  std::string operator()(const op::Invoke& o) const {
    return std::string("invoke") + InvokeKindName(o.kind);
  }
  std::string operator()(const op::InvokeDynamic&) const {
    return "invokedynamic";
  }
  std::string operator()(const op::New&) const { return "new"; }
  std::string operator()(const op::NewArray& o) const {
    if (o.multi) return "multianewarray";
    const std::string& t = o.array_type.name;
    return t.size() == 2 && t[1] != 'L' && t[1] != '[' ? "newarray"
                                                       : "anewarray";
  }
  std::string operator()(const op::Push& o) const {
    return PushMnemonic(o.value);
  }
  std::string operator()(const op::Return& o) const {
    return o.type ? oc::Mnemonic(oc::kIreturn + TypeIndex(*o.type)) : "return";
  }
  std::string operator()(const op::Throw&) const { return "athrow"; }
  std::string operator()(const op::TypeCheck& o) const {
    return TypeCheckOpName(o.op);
  }
  std::string operator()(const op::Stack& o) const {
    return StackOpName(o.op);
  }
  std::string operator()(const op::Raw& o) const {
    return oc::Mnemonic(o.opcode);
  }
};

template <typename E, std::size_t N>
std::optional<E> Lookup(const std::array<const char*, N>& names,
                        std::string_view name) {
  for (std::size_t i = 0; i < N; ++i) {
    if (name == names[i]) return static_cast<E>(i);
  }
  return std::nullopt;
}

constexpr std::array<const char*, 12> kArith = {
    "add", "sub", "mul", "div", "rem", "neg",
    "shl", "shr", "ushr", "and", "or", "xor"};
constexpr std::array<const char*, 6> kRelations = {"eq", "ne", "lt",
                                                   "ge", "gt", "le"};
constexpr std::array<const char*, 4> kOperands = {"intZero", "intInt",
                                                  "refRef", "refNull"};
constexpr std::array<const char*, 4> kFieldOps = {"getfield", "putfield",
                                                  "getstatic", "putstatic"};
constexpr std::array<const char*, 4> kInvokeKinds = {"virtual", "special",
                                                     "static", "interface"};
constexpr std::array<const char*, 2> kTypeChecks = {"checkcast",
                                                    "instanceof"};
constexpr std::array<const char*, 9> kStackOps = {
    "pop", "pop2", "dup", "dup_x1", "dup_x2", "dup2", "dup2_x1", "dup2_x2",
    "swap"};

}  // namespace

std::string MnemonicOf(const Instruction& insn) {
  return std::visit(Namer{}, insn.op);
}

std::optional<Operation> OperandFreeOperation(std::string_view mnemonic) {
  int code = -1;
  for (int i = 0; i <= 0xc9; ++i) {
    if (mnemonic == oc::Mnemonic(static_cast<uint8_t>(i))) {
      code = i;
      break;
    }
  }
  if (code < 0) return std::nullopt;
  auto c = static_cast<uint8_t>(code);
  constexpr std::array<ValueType, 5> kTypes = {
      ValueType::kInt, ValueType::kLong, ValueType::kFloat, ValueType::kDouble,
      ValueType::kReference};
  if (c >= oc::kPop && c <= oc::kSwap) {
    return op::Stack{static_cast<StackOpKind>(c - oc::kPop)};
  }
  if (c >= oc::kIadd && c <= oc::kLxor) {
    Instruction probe;
    for (int k = 0; k < 12; ++k) {
      for (int t = 0; t < 4; ++t) {
        probe.op = op::Arithmetic{kTypes[t], static_cast<ArithmeticOp>(k)};
        if (k >= 6 && t > 1) continue;
        if (MnemonicOf(probe) == mnemonic) return probe.op;
      }
    }
    return std::nullopt;
  }
  if (c >= oc::kIreturn && c <= oc::kAreturn) {
    return op::Return{kTypes[c - oc::kIreturn]};
  }
  if (c == oc::kReturn) return op::Return{std::nullopt};
  if (c == oc::kAthrow) return op::Throw{};
  if (c == oc::kAconstNull) return op::Push{Constant::Null()};
  if (c >= oc::kIconstM1 && c <= oc::kIconst5) {
    return op::Push{Constant::Integer(c - oc::kIconst0)};
  }
  if (oc::IsRaw(c)) return op::Raw{c};
  return std::nullopt;
}

const char* ArithmeticOpName(ArithmeticOp op) {
  return kArith[static_cast<std::size_t>(op)];
}
std::optional<ArithmeticOp> ArithmeticOpFromName(std::string_view name) {
  return Lookup<ArithmeticOp>(kArith, name);
}
const char* RelationName(Relation r) {
  return kRelations[static_cast<std::size_t>(r)];
}
std::optional<Relation> RelationFromName(std::string_view name) {
  return Lookup<Relation>(kRelations, name);
}
Relation Negate(Relation r) {
  switch (r) {
    case Relation::kEq: return Relation::kNe;
    case Relation::kNe: return Relation::kEq;
    case Relation::kLt: return Relation::kGe;
    case Relation::kGe: return Relation::kLt;
    case Relation::kGt: return Relation::kLe;
    case Relation::kLe: return Relation::kGt;
  }
  return r;
}
const char* BranchOperandsName(BranchOperands o) {
  return kOperands[static_cast<std::size_t>(o)];
}
std::optional<BranchOperands> BranchOperandsFromName(std::string_view name) {
  return Lookup<BranchOperands>(kOperands, name);
}
const char* FieldOpName(FieldOp op) {
  return kFieldOps[static_cast<std::size_t>(op)];
}
std::optional<FieldOp> FieldOpFromName(std::string_view name) {
  return Lookup<FieldOp>(kFieldOps, name);
}
const char* InvokeKindName(InvokeKind k) {
  return kInvokeKinds[static_cast<std::size_t>(k)];
}
std::optional<InvokeKind> InvokeKindFromName(std::string_view name) {
  return Lookup<InvokeKind>(kInvokeKinds, name);
}
const char* TypeCheckOpName(TypeCheckOp op) {
  return kTypeChecks[static_cast<std::size_t>(op)];
}
std::optional<TypeCheckOp> TypeCheckOpFromName(std::string_view name) {
  return Lookup<TypeCheckOp>(kTypeChecks, name);
}
const char* StackOpName(StackOpKind op) {
  return kStackOps[static_cast<std::size_t>(op)];
}
std::optional<StackOpKind> StackOpFromName(std::string_view name) {
  return Lookup<StackOpKind>(kStackOps, name);
}

}  // namespace jmut
