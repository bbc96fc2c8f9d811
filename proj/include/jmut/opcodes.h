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

#ifndef JMUT_OPCODES_H_
#define JMUT_OPCODES_H_

#include <cstdint>

namespace jmut::opcodes {

enum : uint8_t {
  kNop = 0x00, kAconstNull = 0x01, kIconstM1 = 0x02, kIconst0 = 0x03,
  kIconst5 = 0x08, kLconst0 = 0x09, kLconst1 = 0x0a, kFconst0 = 0x0b,
  kFconst2 = 0x0d, kDconst0 = 0x0e, kDconst1 = 0x0f, kBipush = 0x10,
  kSipush = 0x11, kLdc = 0x12, kLdcW = 0x13, kLdc2W = 0x14,
  kIload = 0x15, kLload = 0x16, kFload = 0x17, kDload = 0x18, kAload = 0x19,
  kIload0 = 0x1a, kAload3 = 0x2d,
  kIaload = 0x2e, kLaload = 0x2f, kFaload = 0x30, kDaload = 0x31,
  kAaload = 0x32, kBaload = 0x33, kCaload = 0x34, kSaload = 0x35,
  kIstore = 0x36, kLstore = 0x37, kFstore = 0x38, kDstore = 0x39,
  kAstore = 0x3a, kIstore0 = 0x3b, kAstore3 = 0x4e,
  kIastore = 0x4f, kLastore = 0x50, kFastore = 0x51, kDastore = 0x52,
  kAastore = 0x53, kBastore = 0x54, kCastore = 0x55, kSastore = 0x56,
  kPop = 0x57, kPop2 = 0x58, kDup = 0x59, kDupX1 = 0x5a, kDupX2 = 0x5b,
  kDup2 = 0x5c, kDup2X1 = 0x5d, kDup2X2 = 0x5e, kSwap = 0x5f,
  kIadd = 0x60, kLxor = 0x83,
  kIinc = 0x84,
  kI2l = 0x85, kI2f = 0x86, kI2d = 0x87, kL2i = 0x88, kL2f = 0x89,
  kL2d = 0x8a, kF2i = 0x8b, kF2l = 0x8c, kF2d = 0x8d, kD2i = 0x8e,
  kD2l = 0x8f, kD2f = 0x90, kI2b = 0x91, kI2c = 0x92, kI2s = 0x93,
  kLcmp = 0x94, kFcmpl = 0x95, kFcmpg = 0x96, kDcmpl = 0x97, kDcmpg = 0x98,
  kIfeq = 0x99, kIfle = 0x9e, kIfIcmpeq = 0x9f, kIfIcmple = 0xa4,
  kIfAcmpeq = 0xa5, kIfAcmpne = 0xa6,
  kGoto = 0xa7, kJsr = 0xa8, kRet = 0xa9,
  kTableswitch = 0xaa, kLookupswitch = 0xab,
  kIreturn = 0xac, kLreturn = 0xad, kFreturn = 0xae, kDreturn = 0xaf,
  kAreturn = 0xb0, kReturn = 0xb1,
  kGetstatic = 0xb2, kPutstatic = 0xb3, kGetfield = 0xb4, kPutfield = 0xb5,
  kInvokevirtual = 0xb6, kInvokespecial = 0xb7, kInvokestatic = 0xb8,
  kInvokeinterface = 0xb9, kInvokedynamic = 0xba,
  kNew = 0xbb, kNewarray = 0xbc, kAnewarray = 0xbd, kArraylength = 0xbe,
  kAthrow = 0xbf, kCheckcast = 0xc0, kInstanceof = 0xc1,
  kMonitorenter = 0xc2, kMonitorexit = 0xc3, kWide = 0xc4,
  kMultianewarray = 0xc5, kIfnull = 0xc6, kIfnonnull = 0xc7,
  kGotoW = 0xc8, kJsrW = 0xc9,
};

// Mnemonic for any defined opcode, "<invalid>" otherwise.
const char* Mnemonic(uint8_t opcode);

// True for opcodes represented by the Raw instruction variant.
bool IsRaw(uint8_t opcode);

}  // namespace jmut::opcodes

#endif  // JMUT_OPCODES_H_
