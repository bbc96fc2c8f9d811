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

#include "jmut/hierarchy.h"

#include <set>
#include <vector>

namespace jmut {

namespace {

constexpr std::string_view kObject = "java/lang/Object";

struct Builtin {
  const char* name;
  const char* super_name;
  bool is_interface;
};

constexpr Builtin kBuiltins[] = {
    {"java/lang/Object", "", false},
    {"java/lang/String", "java/lang/Object", false},
    {"java/lang/StringBuilder", "java/lang/Object", false},
    {"java/lang/Number", "java/lang/Object", false},
    {"java/lang/Integer", "java/lang/Number", false},
    {"java/lang/Long", "java/lang/Number", false},
    {"java/lang/Double", "java/lang/Number", false},
    {"java/lang/Boolean", "java/lang/Object", false},
    {"java/lang/Class", "java/lang/Object", false},
    {"java/lang/System", "java/lang/Object", false},
    {"java/lang/Math", "java/lang/Object", false},
    {"java/lang/Throwable", "java/lang/Object", false},
    {"java/lang/Exception", "java/lang/Throwable", false},
    {"java/lang/Error", "java/lang/Throwable", false},
    {"java/lang/AssertionError", "java/lang/Error", false},
    {"java/lang/RuntimeException", "java/lang/Exception", false},
    {"java/lang/ArithmeticException", "java/lang/RuntimeException", false},
    {"java/lang/NullPointerException", "java/lang/RuntimeException", false},
    {"java/lang/ClassCastException", "java/lang/RuntimeException", false},
    {"java/lang/IllegalArgumentException", "java/lang/RuntimeException",
     false},
    {"java/lang/IllegalStateException", "java/lang/RuntimeException", false},
    {"java/lang/IndexOutOfBoundsException", "java/lang/RuntimeException",
     false},
    {"java/lang/ArrayIndexOutOfBoundsException",
     "java/lang/IndexOutOfBoundsException", false},
    {"java/io/IOException", "java/lang/Exception", false},
    {"java/io/OutputStream", "java/lang/Object", false},
    {"java/io/FilterOutputStream", "java/io/OutputStream", false},
    {"java/io/PrintStream", "java/io/FilterOutputStream", false},
    {"java/util/AbstractCollection", "java/lang/Object", false},
    {"java/util/AbstractList", "java/util/AbstractCollection", false},
    {"java/util/ArrayList", "java/util/AbstractList", false},
    {"java/util/AbstractSequentialList", "java/util/AbstractList", false},
    {"java/util/LinkedList", "java/util/AbstractSequentialList", false},
    {"java/util/AbstractSet", "java/util/AbstractCollection", false},
    {"java/util/HashSet", "java/util/AbstractSet", false},
    {"java/util/AbstractMap", "java/lang/Object", false},
    {"java/util/HashMap", "java/util/AbstractMap", false},
    {"java/lang/Iterable", "java/lang/Object", true},
    {"java/lang/Comparable", "java/lang/Object", true},
    {"java/lang/CharSequence", "java/lang/Object", true},
    {"java/lang/Runnable", "java/lang/Object", true},
    {"java/lang/Cloneable", "java/lang/Object", true},
    {"java/io/Serializable", "java/lang/Object", true},
    {"java/util/Collection", "java/lang/Object", true},
    {"java/util/List", "java/lang/Object", true},
    {"java/util/Set", "java/lang/Object", true},
    {"java/util/Map", "java/lang/Object", true},
    {"java/util/Iterator", "java/lang/Object", true},
};

bool IsArray(std::string_view t) { return !t.empty() && t[0] == '['; }

// Component of an array descriptor as a class name or descriptor, or
// nullopt for primitive components.
std::optional<std::string> RefComponent(std::string_view array) {
  std::string_view comp = array.substr(1);
  if (comp.empty()) return std::nullopt;
  if (comp[0] == '[') return std::string(comp);
  if (comp[0] == 'L' && comp.back() == ';') {
    return std::string(comp.substr(1, comp.size() - 2));
  }
  return std::nullopt;
}

std::string ArrayOf(std::string_view component) {
  if (IsArray(component)) return "[" + std::string(component);
  return "[L" + std::string(component) + ";";
}

}  // namespace

ClassHierarchy::ClassHierarchy() {
  for (const auto& b : kBuiltins) {
    entries_[b.name] = {b.super_name, b.is_interface};
  }
}

ClassHierarchy::ClassHierarchy(const Project& project) : ClassHierarchy() {
  for (const auto& c : project.classes) {
    Add(c.name, c.super_name, c.is_interface());
  }
}

void ClassHierarchy::Add(std::string name, std::string super_name,
                         bool is_interface) {
  entries_[std::move(name)] = {std::move(super_name), is_interface};
}

bool ClassHierarchy::Known(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

bool ClassHierarchy::IsInterface(std::string_view name) const {
  auto it = entries_.find(name);
  return it != entries_.end() && it->second.is_interface;
}

std::optional<std::string> ClassHierarchy::SuperOf(
    std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return it->second.super_name;
}

std::string ClassHierarchy::CommonSuperclass(std::string_view a,
                                             std::string_view b) const {
  if (a == b) return std::string(a);
  if (IsArray(a) || IsArray(b)) {
    if (IsArray(a) && IsArray(b)) {
      auto ca = RefComponent(a);
      auto cb = RefComponent(b);
      if (ca && cb) return ArrayOf(CommonSuperclass(*ca, *cb));
    }
    return std::string(kObject);
  }
  if (IsInterface(a) || IsInterface(b)) return std::string(kObject);
  std::set<std::string, std::less<>> chain;
  std::string cur(a);
  for (int guard = 0; guard < 256 && !cur.empty(); ++guard) {
    chain.insert(cur);
    auto up = SuperOf(cur);
    if (!up) break;
    cur = *up;
  }
  cur = std::string(b);
  for (int guard = 0; guard < 256 && !cur.empty(); ++guard) {
    if (chain.count(cur)) return cur;
    auto up = SuperOf(cur);
    if (!up) break;
    cur = *up;
  }
  return std::string(kObject);
}

bool ClassHierarchy::IsAssignable(std::string_view from,
                                  std::string_view to) const {
  if (from == to || to == kObject) return true;
  if (IsArray(to)) {
    if (!IsArray(from)) return false;
    auto cf = RefComponent(from);
    auto ct = RefComponent(to);
    if (cf && ct) return IsAssignable(*cf, *ct);
    return from == to;
  }
  if (IsArray(from)) {
    return to == "java/lang/Cloneable" || to == "java/io/Serializable" ||
           !Known(to);
  }
  // Interfaces are checked at run time by the JVM's verifier rules.
  if (IsInterface(to) || !Known(to)) return true;
  std::string cur(from);
  for (int guard = 0; guard < 256; ++guard) {
    if (cur == to) return true;
    auto up = SuperOf(cur);
    if (!up) return true;  // chain leaves known territory
    if (up->empty()) return false;
    cur = *up;
  }
  return true;
}

}  // namespace jmut
