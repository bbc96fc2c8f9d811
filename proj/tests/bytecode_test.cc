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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "jmut/classfile.h"
#include "jmut/errors.h"
#include "jmut/model.h"
#include "test_support.h"

namespace jmut {
namespace {

using testing::AllFixtureClasses;
using testing::ClassNamed;
using testing::Fixture;
using testing::LoadFixture;
using testing::MethodNamed;

Clazz ParseFile(const std::filesystem::path& p) {
  auto bytes = ReadFileBytes(p);
  return ParseClass(bytes);
}

TEST(ParseClass, ChildExtendsParent) {
  Clazz c = ParseFile(Fixture("inherit/classes/demo/Child.class"));
  EXPECT_EQ(c.name, "demo/Child");
  EXPECT_EQ(c.super_name, "demo/Parent");
  ASSERT_EQ(c.methods.size(), 2u);
  EXPECT_EQ(c.methods[0].name, "<init>");
  EXPECT_EQ(c.methods[1].name, "printY");
  EXPECT_EQ(c.methods[1].descriptor, "()V");
}

TEST(ParseClass, EmptyInterface) {
  Clazz c = ParseFile(Fixture("coverage/classes/cov/Empty.class"));
  EXPECT_TRUE(c.methods.empty());
  EXPECT_TRUE(c.is_interface());
}

TEST(ParseClass, RejectsBadInput) {
  EXPECT_THROW(ParseFile(Fixture("bad/BadMagic.class")), MalformedClassFile);
  EXPECT_THROW(ParseFile(Fixture("bad/Truncated.class")), MalformedClassFile);
  EXPECT_THROW(ParseFile(Fixture("bad/BadTag.class")), MalformedClassFile);
  EXPECT_THROW(ParseFile(Fixture("bad/Future.class")), UnsupportedVersion);
  std::vector<uint8_t> nothing;
  EXPECT_THROW(ParseClass(nothing), MalformedClassFile);
}

TEST(ParseClass, VersionBoundary) {
  EXPECT_EQ(ParseFile(Fixture("coverage/classes/cov/Point.class")).version.major,
            61);
  EXPECT_EQ(ParseFile(Fixture("coverage/classes/cov/Old.class")).version.major,
            49);
}

TEST(ParseProject, ParentAndChild) {
  Project p = LoadFixture("inherit");
  ASSERT_EQ(p.classes.size(), 2u);
  const Clazz& child = ClassNamed(p, "demo/Child");
  const Clazz* parent = ResolveSuper(p, child);
  ASSERT_NE(parent, nullptr);
  EXPECT_EQ(parent->name, "demo/Parent");
  EXPECT_EQ(ResolveSuper(p, *parent), nullptr);
  Clazz detached;
  detached.name = "x/Detached";
  detached.super_name = "x/Missing";
  EXPECT_EQ(ResolveSuper(p, detached), nullptr);
  EXPECT_EQ(p.origin.at("demo/Child"),
            Fixture("inherit/classes/demo/Child.class").string());
}

TEST(ParseProject, EmptyAndDuplicate) {
  EXPECT_TRUE(ParseProject({}).classes.empty());
  auto tmp = std::filesystem::temp_directory_path() / "jmut_dup_test";
  std::filesystem::remove_all(tmp);
  std::filesystem::create_directories(tmp / "a");
  auto src = Fixture("inherit/classes/demo/Parent.class");
  std::filesystem::copy_file(src, tmp / "a" / "Copy.class");
  EXPECT_THROW(ParseProject({src, tmp / "a" / "Copy.class"}),
               DuplicateClassName);
  try {
    ParseProject({src, Fixture("bad/BadMagic.class")});
    FAIL() << "expected MalformedClassFile";
  } catch (const MalformedClassFile& e) {
    EXPECT_NE(std::string(e.what()).find("BadMagic.class"), std::string::npos);
  }
  std::filesystem::remove_all(tmp);
}

TEST(LineOf, ToolDemoLines) {
  Project p = LoadFixture("whatsup");
  const Method& init = MethodNamed(ClassNamed(p, "app/User"), "<init>");
  std::map<std::string, uint16_t> lines;
  for (const auto& ins : init.instructions) {
    if (auto* f = ins.as<op::FieldAccess>()) {
      lines[f->ref.name] = LineOf(init, ins.id).value();
    }
  }
  EXPECT_EQ(lines["id"], 11);
  EXPECT_EQ(lines["lastname"], 15);
  EXPECT_EQ(lines["profile"], 16);

  Project bare = LoadFixture("coverage");
  const Method& id = MethodNamed(ClassNamed(bare, "cov/Bare"), "id");
  EXPECT_FALSE(LineOf(id, id.instructions.front().id).has_value());
  EXPECT_THROW(LineOf(id, 999999), ForeignInstruction);
}

// Number of Unconditional and Conditional edges each kind must have.
std::pair<int, int> EdgeContract(const Instruction& ins) {
  switch (ins.kind()) {
    case InstructionKind::kBranch: return {1, 1};
    case InstructionKind::kGoto: return {1, 0};
    case InstructionKind::kSwitch:
      return {1, static_cast<int>(ins.as<op::Switch>()->keys.size())};
    case InstructionKind::kReturn:
    case InstructionKind::kThrow: return {0, 0};
    default: return {1, 0};
  }
}

TEST(Cfg, EdgeContractsHoldForEveryFixtureMethod) {
  int methods = 0;
  for (const auto& path : AllFixtureClasses()) {
    Clazz c = ParseFile(path);
    for (const auto& m : c.methods) {
      ++methods;
      std::set<InstructionId> ids;
      for (const auto& ins : m.instructions) ids.insert(ins.id);
      for (const auto& e : m.edges) {
        EXPECT_TRUE(ids.count(e.start) && ids.count(e.end))
            << c.name << "." << m.name;
      }
      std::set<InstructionId> handler_starts;
      for (const auto& h : m.exception_handlers) handler_starts.insert(h.start);
      for (const auto& ins : m.instructions) {
        int uncond = 0, cond = 0, exc = 0;
        for (const auto* e : m.OutEdges(ins.id)) {
          if (e->kind == EdgeKind::kUnconditional) ++uncond;
          if (e->kind == EdgeKind::kConditional) ++cond;
          if (e->kind == EdgeKind::kExceptional) ++exc;
        }
        auto [want_u, want_c] = EdgeContract(ins);
        EXPECT_EQ(uncond, want_u) << c.name << "." << m.name << " #" << ins.id;
        EXPECT_EQ(cond, want_c) << c.name << "." << m.name << " #" << ins.id;
        if (!handler_starts.count(ins.id)) {
          EXPECT_EQ(exc, 0);
        }
      }
    }
  }
  EXPECT_GT(methods, 100);
}

TEST(RoundTrip, EveryFixtureIsGraphIsomorphic) {
  auto files = AllFixtureClasses();
  ASSERT_GE(files.size(), 30u);
  ClassHierarchy hierarchy;
  for (const auto& path : files) {
    SCOPED_TRACE(path.string());
    Clazz original = ParseFile(path);
    std::vector<uint8_t> emitted = EmitClass(original, hierarchy);
    Clazz reparsed = ParseClass(emitted);
    EXPECT_TRUE(Isomorphic(original, reparsed));
    // Emission is a pure function, and a second round trip is byte stable.
    EXPECT_EQ(EmitClass(original, hierarchy), emitted);
    EXPECT_EQ(EmitClass(reparsed, hierarchy), emitted);
  }
}

TEST(RoundTrip, FarJumpIsWidened) {
  Clazz c = ParseFile(Fixture("coverage/classes/cov/Far.class"));
  Clazz back = ParseClass(EmitClass(c, ClassHierarchy()));
  EXPECT_TRUE(Isomorphic(c, back));
  const Method& jump = MethodNamed(back, "jump");
  EXPECT_GT(jump.instructions.back().offset, 32767u);
}

TEST(RoundTrip, OpaqueAttributesSurvive) {
  Clazz c = ParseFile(Fixture("coverage/classes/cov/Attrs.class"));
  std::set<std::string> names;
  for (const auto& a : c.attributes) names.insert(a.name);
  EXPECT_TRUE(names.count("com.example.Custom"));
  EXPECT_TRUE(names.count("RuntimeVisibleAnnotations"));
  Clazz back = ParseClass(EmitClass(c, ClassHierarchy()));
  EXPECT_EQ(c.attributes, back.attributes);
  EXPECT_EQ(c.fields, back.fields);
}

TEST(EmitClass, BranchToDeletedInstructionIsUnverifiable) {
  Project p = LoadFixture("ops/rel");
  Clazz c = ClassNamed(p, "ops/rel/Cmp");
  Method& m = c.methods[1];
  ASSERT_EQ(m.name, "icmp");
  // Drop the target of the first conditional branch but keep the edge.
  InstructionId target = kNoInstruction;
  for (const auto& e : m.edges) {
    if (e.kind == EdgeKind::kConditional) {
      target = e.end;
      break;
    }
  }
  ASSERT_NE(target, kNoInstruction);
  m.instructions.erase(
      std::find_if(m.instructions.begin(), m.instructions.end(),
                   [&](const Instruction& i) { return i.id == target; }));
  EXPECT_THROW(EmitClass(p, c), UnverifiableMethod);
}

TEST(EmitClass, PoolIsRebuiltInFirstUseOrder) {
  Clazz c = ParseFile(Fixture("inherit/classes/demo/Parent.class"));
  auto bytes = EmitClass(c, ClassHierarchy());
  // this_class is the first symbolic use: its name is entry 1 and the
  // Class entry pointing at it is entry 2.
  ASSERT_GT(bytes.size(), 40u);
  const std::string name = "demo/Parent";
  EXPECT_EQ(bytes[10], 1);  // CONSTANT_Utf8
  EXPECT_EQ(bytes[11], 0);
  EXPECT_EQ(bytes[12], name.size());
  EXPECT_EQ(std::string(bytes.begin() + 13, bytes.begin() + 13 + name.size()),
            name);
  std::size_t at = 13 + name.size();
  EXPECT_EQ(bytes[at], 7);  // CONSTANT_Class
  EXPECT_EQ(bytes[at + 2], 1);
}

}  // namespace
}  // namespace jmut
