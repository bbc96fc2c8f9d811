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

#include "jmut/descriptor.h"

namespace jmut::descriptor {

std::size_t FieldLength(std::string_view desc) {
  std::size_t i = 0;
  while (i < desc.size() && desc[i] == '[') ++i;
  if (i > 255 || i >= desc.size()) return 0;
  switch (desc[i]) {
    case 'B': case 'C': case 'D': case 'F': case 'I': case 'J': case 'S':
    case 'Z':
      return i + 1;
    case 'L': {
      std::size_t end = desc.find(';', i);
      if (end == std::string_view::npos || end == i + 1) return 0;
      for (std::size_t k = i + 1; k < end; ++k) {
        char c = desc[k];
        if (c == '.' || c == '[') return 0;
        if (c == '/' && (k == i + 1 || desc[k - 1] == '/' || k + 1 == end)) {
          return 0;
        }
      }
      return end + 1;
    }
    default:
      return 0;
  }
}

bool IsValidField(std::string_view desc) {
  return !desc.empty() && FieldLength(desc) == desc.size();
}

std::optional<MethodShape> ParseMethod(std::string_view desc) {
  if (desc.empty() || desc[0] != '(') return std::nullopt;
  MethodShape shape;
  std::size_t i = 1;
  while (i < desc.size() && desc[i] != ')') {
    std::size_t n = FieldLength(desc.substr(i));
    if (n == 0) return std::nullopt;
    shape.params.emplace_back(desc.substr(i, n));
    i += n;
  }
  if (i >= desc.size()) return std::nullopt;
  std::string_view ret = desc.substr(i + 1);
  if (ret != "V" && !IsValidField(ret)) return std::nullopt;
  shape.ret = std::string(ret);
  return shape;
}

bool IsValidMethod(std::string_view desc) {
  return ParseMethod(desc).has_value();
}

std::string BuildMethod(const MethodShape& shape) {
  std::string out = "(";
  for (const auto& p : shape.params) out += p;
  out += ')';
  out += shape.ret;
  return out;
}

int SlotSize(std::string_view field_desc) {
  if (field_desc == "V") return 0;
  if (field_desc == "J" || field_desc == "D") return 2;
  return 1;
}

int ArgumentSlots(std::string_view method_desc) {
  auto shape = ParseMethod(method_desc);
  if (!shape) return 0;
  int n = 0;
  for (const auto& p : shape->params) n += SlotSize(p);
  return n;
}

bool IsPrimitive(std::string_view field_desc) {
  return field_desc.size() == 1 &&
         std::string_view("BCDFIJSZ").find(field_desc[0]) !=
             std::string_view::npos;
}

bool IsReference(std::string_view field_desc) {
  return !field_desc.empty() && (field_desc[0] == 'L' || field_desc[0] == '[');
}

bool IsBasic(std::string_view field_desc) {
  return IsPrimitive(field_desc) || field_desc == "Ljava/lang/String;";
}

ValueType ValueTypeOf(std::string_view field_desc) {
  switch (field_desc.empty() ? 'L' : field_desc[0]) {
    case 'J': return ValueType::kLong;
    case 'F': return ValueType::kFloat;
    case 'D': return ValueType::kDouble;
    case 'L': case '[': return ValueType::kReference;
    default: return ValueType::kInt;
  }
}

std::string ClassNameOf(std::string_view field_desc) {
  if (field_desc.size() >= 2 && field_desc.front() == 'L' &&
      field_desc.back() == ';') {
    return std::string(field_desc.substr(1, field_desc.size() - 2));
  }
  return std::string(field_desc);
}

std::string OfClassName(std::string_view internal_name) {
  if (!internal_name.empty() && internal_name[0] == '[') {
    return std::string(internal_name);
  }
  return "L" + std::string(internal_name) + ";";
}

}  // namespace jmut::descriptor
