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

#ifndef JMUT_CLASSFILE_H_
#define JMUT_CLASSFILE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "jmut/hierarchy.h"
#include "jmut/model.h"

namespace jmut {

// Newest class-file major version accepted (Java 17).
inline constexpr uint16_t kMaxMajorVersion = 61;

// Throws MalformedClassFile or UnsupportedVersion.
Clazz ParseClass(std::span<const uint8_t> bytes);

// Parses every file; errors are rethrown with the offending path prepended.
// Throws DuplicateClassName when two files define the same class.
Project ParseProject(const std::vector<std::filesystem::path>& paths);

// All *.class files below `dir`, in sorted path order.
std::vector<std::filesystem::path> ListClassFiles(
    const std::filesystem::path& dir);
Project ParseProjectDir(const std::filesystem::path& dir);

// Serializes a class with a freshly built constant pool, recomputed
// offsets, max_stack/max_locals and StackMapTable. Throws UnverifiableMethod
// when frame inference fails for any method.
std::vector<uint8_t> EmitClass(const Clazz& clazz,
                               const ClassHierarchy& hierarchy);
std::vector<uint8_t> EmitClass(const Project& project, const Clazz& clazz);

// The superclass when it is part of the project, else nullptr.
const Clazz* ResolveSuper(const Project& project, const Clazz& clazz);

// Source line of an instruction: the nearest line entry at or before it in
// layout order. Throws ForeignInstruction if `id` is not in `method`.
std::optional<uint16_t> LineOf(const Method& method, InstructionId id);

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes);

}  // namespace jmut

#endif  // JMUT_CLASSFILE_H_
