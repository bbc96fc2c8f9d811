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

#ifndef JMUT_MNEMONIC_H_
#define JMUT_MNEMONIC_H_

#include <optional>
#include <string>
#include <string_view>

#include "jmut/model.h"

namespace jmut {

// Canonical mnemonic of an instruction, e.g. "iload", "if_icmplt",
// "invokeinterface", "ldc". Constant pushes report the short form the
// emitter picks ("iconst_2", "bipush", "ldc2_w", ...).
std::string MnemonicOf(const Instruction& insn);

// The operation for a mnemonic that takes no operands ("pop2", "iadd",
// "areturn", "arraylength", ...), or nullopt.
std::optional<Operation> OperandFreeOperation(std::string_view mnemonic);

const char* ArithmeticOpName(ArithmeticOp op);        // "add"
std::optional<ArithmeticOp> ArithmeticOpFromName(std::string_view name);
const char* RelationName(Relation r);                 // "lt"
std::optional<Relation> RelationFromName(std::string_view name);
Relation Negate(Relation r);
const char* BranchOperandsName(BranchOperands o);     // "intInt"
std::optional<BranchOperands> BranchOperandsFromName(std::string_view name);
const char* FieldOpName(FieldOp op);                  // "getfield"
std::optional<FieldOp> FieldOpFromName(std::string_view name);
const char* InvokeKindName(InvokeKind k);             // "virtual"
std::optional<InvokeKind> InvokeKindFromName(std::string_view name);
const char* TypeCheckOpName(TypeCheckOp op);          // "checkcast"
std::optional<TypeCheckOp> TypeCheckOpFromName(std::string_view name);
const char* StackOpName(StackOpKind op);              // "dup_x1"
std::optional<StackOpKind> StackOpFromName(std::string_view name);

}  // namespace jmut

#endif  // JMUT_MNEMONIC_H_
