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

#ifndef JMUT_HIERARCHY_H_
#define JMUT_HIERARCHY_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "jmut/model.h"

namespace jmut {

// Superclass knowledge for type merging and assignability. Knows the
// project's classes plus a fixed table of common JDK types; anything else
// is "unknown", and questions about unknown types are answered leniently.
class ClassHierarchy {
 public:
  ClassHierarchy();
  explicit ClassHierarchy(const Project& project);

  void Add(std::string name, std::string super_name, bool is_interface);

  bool Known(std::string_view name) const;
  bool IsInterface(std::string_view name) const;
  // Empty for java/lang/Object, nullopt for unknown classes.
  std::optional<std::string> SuperOf(std::string_view name) const;

  // Nearest common superclass of two class or array types. Falls back to
  // java/lang/Object when the chains cannot be followed.
  std::string CommonSuperclass(std::string_view a, std::string_view b) const;

  // Whether a value of reference type `from` may be used where `to` is
  // expected. Only answers false when both chains are fully known.
  bool IsAssignable(std::string_view from, std::string_view to) const;

 private:
  struct Entry {
    std::string super_name;
    bool is_interface;
  };
  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace jmut

#endif  // JMUT_HIERARCHY_H_
