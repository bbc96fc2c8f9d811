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

#ifndef JMUT_DESCRIPTOR_H_
#define JMUT_DESCRIPTOR_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jmut/model.h"

namespace jmut::descriptor {

bool IsValidField(std::string_view desc);
bool IsValidMethod(std::string_view desc);

struct MethodShape {
  std::vector<std::string> params;
  std::string ret;  // "V" for void
};

std::optional<MethodShape> ParseMethod(std::string_view desc);
std::string BuildMethod(const MethodShape& shape);

// Length of the field descriptor starting at `desc[0]`, or 0 if invalid.
std::size_t FieldLength(std::string_view desc);

// 2 for J and D, 0 for V, otherwise 1.
int SlotSize(std::string_view field_desc);
// Sum of parameter slot sizes (excluding the receiver).
int ArgumentSlots(std::string_view method_desc);

bool IsPrimitive(std::string_view field_desc);
bool IsReference(std::string_view field_desc);
// Primitive types and java.lang.String.
bool IsBasic(std::string_view field_desc);
ValueType ValueTypeOf(std::string_view field_desc);

// "Ljava/lang/String;" -> "java/lang/String"; arrays are returned as-is.
std::string ClassNameOf(std::string_view field_desc);
// Inverse of ClassNameOf.
std::string OfClassName(std::string_view internal_name);

}  // namespace jmut::descriptor

#endif  // JMUT_DESCRIPTOR_H_
