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

#ifndef JMUT_CONSTANT_H_
#define JMUT_CONSTANT_H_

#include <cstdint>
#include <string>
#include <vector>

namespace jmut {

// A symbolic constant-pool value. The pool itself is never kept in the
// model: every reference is resolved to one of these on parse and
// re-interned on emit.
struct Constant {
  enum class Kind : uint8_t {
    kNull,  // aconst_null; never stored in a pool
    kUtf8,
    kInteger,
    kFloat,
    kLong,
    kDouble,
    kClass,
    kString,
    kFieldRef,
    kMethodRef,
    kInterfaceMethodRef,
    kNameAndType,
    kMethodHandle,
    kMethodType,
    kDynamic,
    kInvokeDynamic,
    kModule,
    kPackage,
  };

  Kind kind = Kind::kNull;
  // kInteger/kLong value, or raw IEEE bits for kFloat/kDouble so that NaN
  // payloads and signed zeros survive.
  int64_t bits = 0;
  // kUtf8/kString text, kClass/kModule/kPackage name, kMethodType descriptor.
  std::string text;
  // Member refs, kNameAndType, kDynamic, kInvokeDynamic.
  std::string owner;
  std::string name;
  std::string descriptor;
  // kMethodHandle reference kind, kDynamic/kInvokeDynamic bootstrap index.
  uint16_t index = 0;
  // kMethodHandle target (exactly one element).
  std::vector<Constant> target;

  bool operator==(const Constant&) const = default;

  static Constant Null() { return {}; }
  static Constant Integer(int32_t v);
  static Constant Long(int64_t v);
  static Constant Float(float v);
  static Constant Double(double v);
  static Constant String(std::string v);
  static Constant Class(std::string internal_name);
  static Constant Utf8(std::string v);

  int32_t as_int() const { return static_cast<int32_t>(bits); }
  float as_float() const;
  double as_double() const;
  bool is_wide() const { return kind == Kind::kLong || kind == Kind::kDouble; }

  // Stable textual form used for rule attributes and reports.
  std::string ToString() const;
};

const char* KindName(Constant::Kind kind);

}  // namespace jmut

#endif  // JMUT_CONSTANT_H_
