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
// Type-state inference over a method's control-flow graph. Used by the
// emitter to size frames and write StackMapTable entries, and by the
// validity checker to reject code a verifier would reject.

#ifndef JMUT_FRAMES_H_
#define JMUT_FRAMES_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jmut/hierarchy.h"
#include "jmut/model.h"

namespace jmut {

struct VType {
  // kTop doubles as the second slot of a long or double.
  enum class Tag : uint8_t {
    kTop, kInteger, kFloat, kLong, kDouble, kNull, kUninitializedThis,
    kUninitialized, kObject,
  };
  Tag tag = Tag::kTop;
  std::string name;               // kObject: class name or array descriptor
  InstructionId site = 0;         // kUninitialized: the `new` instruction

  static VType Top() { return {}; }
  static VType Int() { return {Tag::kInteger, {}, 0}; }
  static VType Float() { return {Tag::kFloat, {}, 0}; }
  static VType Long() { return {Tag::kLong, {}, 0}; }
  static VType Double() { return {Tag::kDouble, {}, 0}; }
  static VType Null() { return {Tag::kNull, {}, 0}; }
  static VType UninitThis() { return {Tag::kUninitializedThis, {}, 0}; }
  static VType Uninit(InstructionId site) {
    return {Tag::kUninitialized, {}, site};
  }
  static VType Object(std::string name) {
    return {Tag::kObject, std::move(name), 0};
  }

  bool is_wide() const { return tag == Tag::kLong || tag == Tag::kDouble; }
  bool is_reference() const {
    return tag == Tag::kNull || tag == Tag::kObject ||
           tag == Tag::kUninitialized || tag == Tag::kUninitializedThis;
  }
  std::string ToString() const;
  bool operator==(const VType&) const = default;
};

// Slot-level state: a long occupies two entries, the second being kTop.
struct Frame {
  std::vector<VType> locals;
  std::vector<VType> stack;
  bool operator==(const Frame&) const = default;
};

struct FrameAnalysis {
  bool ok = false;
  std::string error;
  InstructionId error_at = kNoInstruction;
  // State on entry to every reachable instruction.
  std::map<InstructionId, Frame> entry;
  uint16_t max_stack = 0;
  uint16_t max_locals = 0;
};

// Frame implied by the method descriptor alone.
Frame InitialFrame(const Clazz& owner, const Method& method);

FrameAnalysis AnalyzeFrames(const Clazz& owner, const Method& method,
                            const ClassHierarchy& hierarchy);

// Converts a slot-level frame into StackMapTable entries: the second half
// of wide values is dropped and trailing kTop locals are trimmed.
std::vector<VType> CompactLocals(const std::vector<VType>& locals);
std::vector<VType> CompactStack(const std::vector<VType>& stack);

// Verification type for a field descriptor, e.g. "I" -> Integer.
VType VTypeOfDescriptor(std::string_view field_desc);

}  // namespace jmut

#endif  // JMUT_FRAMES_H_
