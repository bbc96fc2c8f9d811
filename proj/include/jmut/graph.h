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
// A read-only, attribute-typed view of a Project: every class, member,
// instruction and symbolic reference is an element that rules can bind.

#ifndef JMUT_GRAPH_H_
#define JMUT_GRAPH_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jmut/model.h"

namespace jmut {

using Value = std::variant<int64_t, std::string>;
std::string ValueToString(const Value& v);

enum class ElementType : uint8_t {
  kProject, kClazz, kField, kMethod, kInstruction, kFieldRef, kMethodRef,
  kTypeRef,
};
const char* ElementTypeName(ElementType type);

// Positional handle into one Project value. Refs share the address of the
// instruction that holds them.
struct ElementRef {
  ElementType type = ElementType::kProject;
  uint32_t cls = 0;
  uint32_t member = 0;
  InstructionId insn = 0;
  auto operator<=>(const ElementRef&) const = default;
};

// Name-based handle that survives copying a project; used by matches.
struct ElementKey {
  ElementType type = ElementType::kProject;
  std::string class_name;
  std::string member_name;
  std::string member_descriptor;
  InstructionId insn = 0;
  std::size_t insn_index = 0;  // layout position when the key was taken
  bool operator==(const ElementKey& o) const {
    return type == o.type && class_name == o.class_name &&
           member_name == o.member_name &&
           member_descriptor == o.member_descriptor && insn == o.insn;
  }
  std::string ToString() const;
};

// "collection", "map" or "" for a JDK owner name.
std::string OwnerKindOf(std::string_view owner);
// "accessor", "modifier" or "".
std::string AccessorKindOf(std::string_view name, std::string_view descriptor);

enum class RelationKind : uint8_t {
  kClasses, kFields, kMethods, kSuperclass, kInstructions, kCfgNext,
  kCfgBranch, kCfgException, kFieldRef, kMethodRef, kTypeRef, kTarget,
};
std::optional<RelationKind> RelationKindFromName(std::string_view name);
const char* RelationKindName(RelationKind r);
bool IsContainment(RelationKind r);
bool IsCfg(RelationKind r);

// Node-type vocabulary of rules. An instruction node may be restricted to
// one instruction kind.
struct NodeType {
  ElementType element = ElementType::kProject;
  std::optional<InstructionKind> kind;
  bool operator==(const NodeType&) const = default;
};
std::optional<NodeType> NodeTypeFromName(std::string_view name);
std::string NodeTypeName(const NodeType& t);

// Whether `relation` may connect elements of the two types.
bool RelationAllowed(RelationKind relation, ElementType from, ElementType to);
// Whether `attr` exists on some element of type `t`.
bool AttributeKnown(const NodeType& t, std::string_view attr);

class ProjectView {
 public:
  explicit ProjectView(const Project& project);

  const Project& project() const { return *project_; }

  std::vector<ElementRef> All(const NodeType& type) const;
  bool Matches(ElementRef e, const NodeType& type) const;
  bool Exists(ElementRef e) const;

  std::optional<Value> Attribute(ElementRef e, std::string_view name) const;

  std::vector<ElementRef> Targets(ElementRef from, RelationKind r) const;
  std::vector<ElementRef> Sources(RelationKind r, ElementRef to) const;
  bool Related(ElementRef from, RelationKind r, ElementRef to) const;

  ElementKey KeyOf(ElementRef e) const;
  std::optional<ElementRef> Resolve(const ElementKey& key) const;

  const Clazz* clazz(ElementRef e) const;
  const Field* field(ElementRef e) const;
  const Method* method(ElementRef e) const;
  const Instruction* instruction(ElementRef e) const;

  // Member resolution along the superclass chain (then interfaces) of
  // classes in the project.
  std::optional<ElementRef> ResolveField(std::string_view owner,
                                         std::string_view name,
                                         std::string_view desc) const;
  std::optional<ElementRef> ResolveMethod(std::string_view owner,
                                          std::string_view name,
                                          std::string_view desc) const;
  std::optional<uint32_t> ClassIndex(std::string_view name) const;

 private:
  std::optional<ElementRef> RefTarget(ElementRef ref) const;
  std::size_t InsnIndex(const Method& m, InstructionId id) const;

  const Project* project_;
  std::map<std::string, uint32_t, std::less<>> class_index_;
};

}  // namespace jmut

#endif  // JMUT_GRAPH_H_
