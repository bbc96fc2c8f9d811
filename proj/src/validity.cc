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


#include "jmut/validity.h"

#include <algorithm>
#include <map>
#include <set>

#include "jmut/frames.h"
#include "jmut/graph.h"
#include "jmut/hierarchy.h"

namespace jmut {
namespace {

constexpr const char* kObject = "java/lang/Object";

bool IsObjectMethod(std::string_view name, std::string_view desc) {
  static const std::set<std::pair<std::string_view, std::string_view>> kMethods =
      {{"toString", "()Ljava/lang/String;"},
       {"equals", "(Ljava/lang/Object;)Z"},
       {"hashCode", "()I"},
       {"getClass", "()Ljava/lang/Class;"},
       {"clone", "()Ljava/lang/Object;"},
       {"finalize", "()V"},
       {"notify", "()V"},
       {"notifyAll", "()V"},
       {"wait", "()V"},
       {"wait", "(J)V"},
       {"wait", "(JI)V"}};
  return kMethods.count({name, desc}) > 0;
}

class Checker {
 public:
  explicit Checker(const Project& p) : project_(p), view_(p), hierarchy_(p) {}

  ValidityReport Run() {
    CheckHierarchy();
    for (const auto& c : project_.classes) {
      CheckMembers(c);
      for (const auto& m : c.methods) {
        CheckReferences(c, m);
        bool cfg_ok = CheckCfg(c, m);
        if (cfg_ok && m.has_code && !cyclic_.count(c.name)) CheckFrames(c, m);
      }
    }
    return std::move(report_);
  }

 private:
  void Add(const char* id, Location loc, std::string message,
           std::string related = {}) {
    report_.violations.push_back(
        {id, std::move(loc), std::move(message), std::move(related), true});
  }

  static Location At(const Clazz& c, const Method& m,
                     std::optional<std::size_t> i = std::nullopt) {
    return {c.name, m.name + m.descriptor, i};
  }

  // C6, plus the set of classes on or leading into a cycle.
  void CheckHierarchy() {
    for (const auto& c : project_.classes) {
      std::set<std::string> seen{c.name};
      const Clazz* cur = &c;
      while (!cur->super_name.empty()) {
        const Clazz* next = project_.FindClass(cur->super_name);
        if (!next) break;
        if (!seen.insert(next->name).second) {
          cyclic_.insert(c.name);
          Add("C6", {c.name, {}, {}},
              "superclass chain revisits " + next->name);
          break;
        }
        cur = next;
      }
    }
  }

  // C3 and C4.
  void CheckMembers(const Clazz& c) {
    std::set<std::pair<std::string, std::string>> fields, methods;
    for (const auto& f : c.fields) {
      if (!fields.emplace(f.name, f.descriptor).second) {
        Add("C3", {c.name, f.name + ":" + f.descriptor, {}}, "duplicate field");
      }
    }
    bool has_ctor = false;
    for (const auto& m : c.methods) {
      has_ctor = has_ctor || m.is_constructor();
      if (!methods.emplace(m.name, m.descriptor).second) {
        Add("C3", At(c, m), "duplicate method");
      }
    }
    if (!c.is_interface() && !has_ctor) {
      Add("C4", {c.name, {}, {}}, "class declares no constructor");
    }
  }

  // Whether a failed lookup may still succeed outside the project: true
  // when some class on the owner's supertype graph is not in the project
  // (java/lang/Object excepted, see IsObjectMethod).
  bool LeavesProject(std::string_view owner) const {
    std::vector<std::string> work{std::string(owner)};
    std::set<std::string> seen;
    while (!work.empty()) {
      std::string name = work.back();
      work.pop_back();
      if (!seen.insert(name).second) continue;
      const Clazz* c = project_.FindClass(name);
      if (!c) {
        if (name != kObject) return true;
        continue;
      }
      if (!c->super_name.empty()) work.push_back(c->super_name);
      for (const auto& i : c->interfaces) work.push_back(i);
    }
    return false;
  }

  // C1.
  void CheckReferences(const Clazz& c, const Method& m) {
    for (std::size_t i = 0; i < m.instructions.size(); ++i) {
      const Instruction& insn = m.instructions[i];
      if (const auto* fa = insn.as<op::FieldAccess>()) {
        const FieldRef& r = fa->ref;
        if (!project_.FindClass(r.owner)) continue;
        auto found = view_.ResolveField(r.owner, r.name, r.descriptor);
        if (!found) {
          if (!LeavesProject(r.owner)) {
            Add("C1", At(c, m, i),
                "field " + r.owner + "." + r.name + ":" + r.descriptor +
                    " does not resolve",
                r.owner);
          }
          continue;
        }
        bool want_static =
            fa->op == FieldOp::kGetStatic || fa->op == FieldOp::kPutStatic;
        if (view_.field(*found)->is_static() != want_static) {
          Add("C1", At(c, m, i),
              "field " + r.owner + "." + r.name + " has the wrong staticness",
              r.owner);
        }
      } else if (const auto* inv = insn.as<op::Invoke>()) {
        const MethodRef& r = inv->ref;
        if (!project_.FindClass(r.owner)) continue;
        if (r.name == "<init>") {
          if (!project_.FindClass(r.owner)->FindMethod(r.name, r.descriptor)) {
            Add("C1", At(c, m, i),
                "constructor " + r.owner + "." + r.descriptor + " is missing",
                r.owner);
          }
          continue;
        }
        auto found = view_.ResolveMethod(r.owner, r.name, r.descriptor);
        if (!found) {
          if (!LeavesProject(r.owner) && !IsObjectMethod(r.name, r.descriptor)) {
            Add("C1", At(c, m, i),
                "method " + r.owner + "." + r.name + r.descriptor +
                    " does not resolve",
                r.owner);
          }
          continue;
        }
        const Method* target = view_.method(*found);
        if (target->is_static() != (inv->kind == InvokeKind::kStatic)) {
          Add("C1", At(c, m, i),
              "method " + r.owner + "." + r.name + r.descriptor +
                  " has the wrong staticness",
              r.owner);
        }
      }
    }
  }

  // C2. Returns whether the graph is sound enough for frame inference.
  bool CheckCfg(const Clazz& c, const Method& m) {
    bool abstract = m.access_flags & (access::kAbstract | access::kNative);
    if (!m.has_code) {
      if (!abstract) {
        Add("C2", At(c, m), "concrete method without code");
        return false;
      }
      return true;
    }
    if (abstract) Add("C2", At(c, m), "abstract or native method has code");
    if (m.instructions.empty()) {
      Add("C2", At(c, m), "method has no entry instruction");
      return false;
    }
    std::set<InstructionId> ids;
    for (std::size_t i = 0; i < m.instructions.size(); ++i) {
      if (!ids.insert(m.instructions[i].id).second) {
        Add("C2", At(c, m, i), "duplicate instruction id");
        return false;
      }
    }
    bool ok = true;
    std::map<InstructionId, std::pair<int, int>> out;  // uncond, cond
    for (const auto& e : m.edges) {
      if (!ids.count(e.start) || !ids.count(e.end)) {
        Add("C2", At(c, m), "edge to or from a missing instruction");
        ok = false;
        continue;
      }
      if (e.kind == EdgeKind::kUnconditional) out[e.start].first++;
      if (e.kind == EdgeKind::kConditional) out[e.start].second++;
    }
    for (std::size_t i = 0; i < m.instructions.size(); ++i) {
      const Instruction& insn = m.instructions[i];
      auto [uncond, cond] = out[insn.id];
      int want_cond = 0, want_uncond = 1;
      switch (insn.kind()) {
        case InstructionKind::kBranch: want_cond = 1; break;
        case InstructionKind::kSwitch:
          want_cond = static_cast<int>(insn.as<op::Switch>()->keys.size());
          break;
        case InstructionKind::kReturn:
        case InstructionKind::kThrow: want_uncond = 0; break;
        default: break;
      }
      if (uncond != want_uncond || cond != want_cond) {
        Add("C2", At(c, m, i),
            std::string(InstructionKindName(insn.kind())) + " has " +
                std::to_string(uncond) + " unconditional and " +
                std::to_string(cond) + " conditional successors, expected " +
                std::to_string(want_uncond) + " and " +
                std::to_string(want_cond));
        ok = false;
      }
    }
    for (const auto& h : m.exception_handlers) {
      bool end_ok = h.end == kNoInstruction || ids.count(h.end);
      if (!ids.count(h.start) || !ids.count(h.handler) || !end_ok) {
        Add("C2", At(c, m), "exception handler names a missing instruction");
        ok = false;
      }
    }
    return ok;
  }

  // C5.
  void CheckFrames(const Clazz& c, const Method& m) {
    FrameAnalysis fa = AnalyzeFrames(c, m, hierarchy_);
    if (fa.ok) return;
    Add("C5", At(c, m, m.IndexOf(fa.error_at)), fa.error);
  }

  const Project& project_;
  ProjectView view_;
  ClassHierarchy hierarchy_;
  std::set<std::string> cyclic_;
  ValidityReport report_;
};

}  // namespace

std::string Location::ToString() const {
  std::string out = class_name;
  if (!member.empty()) out += "." + member;
  if (instruction) out += "#" + std::to_string(*instruction);
  return out;
}

std::vector<std::string> ValidityReport::Constraints() const {
  std::set<std::string> ids;
  for (const auto& v : violations) ids.insert(v.constraint);
  return {ids.begin(), ids.end()};
}

const char* ConstraintTitle(const std::string& id) {
  static const std::map<std::string, const char*> kTitles = {
      {"C1", "member references resolve"},
      {"C2", "control-flow edge contracts"},
      {"C3", "unique member signatures"},
      {"C4", "constructor present"},
      {"C5", "frame inference succeeds"},
      {"C6", "acyclic superclass chain"},
  };
  auto it = kTitles.find(id);
  return it == kTitles.end() ? "unknown" : it->second;
}

ValidityReport CheckProject(const Project& project) {
  return Checker(project).Run();
}

ValidityReport CheckMutant(const Project& original, const Project& mutated) {
  ValidityReport report = CheckProject(mutated);
  auto changed = [&](const std::string& name) {
    if (name.empty()) return false;
    const Clazz* a = original.FindClass(name);
    const Clazz* b = mutated.FindClass(name);
    return !a || !b || !(*a == *b);
  };
  for (auto& v : report.violations) {
    v.attributable =
        changed(v.location.class_name) || changed(v.related_class);
  }
  return report;
}

}  // namespace jmut
