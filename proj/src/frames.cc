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

#include "jmut/frames.h"

#include <algorithm>
#include <set>

#include "jmut/descriptor.h"
#include "jmut/opcodes.h"

namespace jmut {

namespace {

using Tag = VType::Tag;

struct VerifyError {
  std::string message;
};

[[noreturn]] void Fail(std::string message) {
  throw VerifyError{std::move(message)};
}

bool IsArrayName(std::string_view n) { return !n.empty() && n[0] == '['; }

// Component type of an array reference for aaload.
VType ComponentOf(const VType& array) {
  if (array.tag == Tag::kNull) return VType::Null();
  std::string_view comp = std::string_view(array.name).substr(1);
  if (comp.empty() || (comp[0] != 'L' && comp[0] != '[')) {
    Fail("aaload on non-reference array " + array.name);
  }
  return VType::Object(descriptor::ClassNameOf(comp));
}

class Analyzer {
 public:
  Analyzer(const Clazz& owner, const Method& method,
           const ClassHierarchy& hierarchy)
      : owner_(owner), method_(method), hierarchy_(hierarchy) {}

  FrameAnalysis Run() {
    FrameAnalysis result;
    InstructionId current = kNoInstruction;
    try {
      if (!method_.has_code || method_.instructions.empty()) {
        Fail("method has no code");
      }
      ComputeMaxLocals();
      Frame initial = InitialFrame(owner_, method_);
      if (initial.locals.size() > max_locals_) {
        Fail("arguments exceed max_locals");
      }
      initial.locals.resize(max_locals_, VType::Top());
      out_edges_ = OutEdgesByIndex(method_);
      IndexHandlers();
      Merge(0, initial);
      while (!work_.empty()) {
        std::size_t idx = *work_.begin();
        work_.erase(work_.begin());
        const Instruction& insn = method_.instructions[idx];
        current = insn.id;
        Frame in = states_.at(idx);
        Frame out = in;
        Execute(insn, out);
        max_stack_ = std::max({max_stack_, in.stack.size(), out.stack.size()});
        for (const auto* e : out_edges_[idx]) {
          if (e->kind == EdgeKind::kExceptional) continue;
          auto target = method_.IndexOf(e->end);
          if (!target) Fail("edge to unknown instruction");
          Merge(*target, out);
        }
        PropagateToHandlers(idx, in, out);
      }
      current = kNoInstruction;
      if (max_stack_ > 0xffff) Fail("operand stack too deep");
      result.ok = true;
      for (const auto& [idx, frame] : states_) {
        result.entry[method_.instructions[idx].id] = frame;
      }
      result.max_stack = static_cast<uint16_t>(max_stack_);
      result.max_locals = static_cast<uint16_t>(max_locals_);
    } catch (const VerifyError& e) {
      result.ok = false;
      result.error = e.message;
      result.error_at = current;
    }
    return result;
  }

 private:
  void ComputeMaxLocals() {
    std::size_t n = descriptor::ArgumentSlots(method_.descriptor) +
                    (method_.is_static() ? 0 : 1);
    for (const auto& insn : method_.instructions) {
      if (auto* l = insn.as<op::Load>()) {
        n = std::max<std::size_t>(n, l->slot + Width(l->type));
      } else if (auto* s = insn.as<op::Store>()) {
        n = std::max<std::size_t>(n, s->slot + Width(s->type));
      } else if (auto* i = insn.as<op::Increment>()) {
        n = std::max<std::size_t>(n, i->slot + 1u);
      }
    }
    if (n > 0xffff) Fail("too many locals");
    max_locals_ = n;
  }

  static std::size_t Width(ValueType t) {
    return t == ValueType::kLong || t == ValueType::kDouble ? 2 : 1;
  }

  static VType OfValueType(ValueType t) {
    switch (t) {
      case ValueType::kInt: return VType::Int();
      case ValueType::kLong: return VType::Long();
      case ValueType::kFloat: return VType::Float();
      case ValueType::kDouble: return VType::Double();
      case ValueType::kReference: return VType::Null();
    }
    return VType::Top();
  }

  // Merging.

  std::optional<VType> MergeValue(const VType& a, const VType& b) const {
    if (a == b) return a;
    auto initialized_ref = [](const VType& v) {
      return v.tag == Tag::kNull || v.tag == Tag::kObject;
    };
    if (initialized_ref(a) && initialized_ref(b)) {
      if (a.tag == Tag::kNull) return b;
      if (b.tag == Tag::kNull) return a;
      return VType::Object(hierarchy_.CommonSuperclass(a.name, b.name));
    }
    return std::nullopt;
  }

  void Merge(std::size_t idx, const Frame& incoming) {
    auto it = states_.find(idx);
    if (it == states_.end()) {
      states_.emplace(idx, incoming);
      work_.insert(idx);
      return;
    }
    Frame& cur = it->second;
    if (cur.stack.size() != incoming.stack.size()) {
      Fail("inconsistent stack height at join (" +
           std::to_string(cur.stack.size()) + " vs " +
           std::to_string(incoming.stack.size()) + ")");
    }
    bool changed = false;
    for (std::size_t i = 0; i < cur.stack.size(); ++i) {
      auto m = MergeValue(cur.stack[i], incoming.stack[i]);
      if (!m) {
        Fail("incompatible stack values at join: " + cur.stack[i].ToString() +
             " vs " + incoming.stack[i].ToString());
      }
      if (*m != cur.stack[i]) {
        cur.stack[i] = *m;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < cur.locals.size(); ++i) {
      VType m = MergeValue(cur.locals[i], incoming.locals[i])
                    .value_or(VType::Top());
      if (m != cur.locals[i]) {
        cur.locals[i] = m;
        changed = true;
      }
    }
    // A wide local whose second half was lost is unusable.
    for (std::size_t i = 0; i + 1 < cur.locals.size(); ++i) {
      if (cur.locals[i].is_wide() && cur.locals[i + 1].tag != Tag::kTop) {
        cur.locals[i] = VType::Top();
        changed = true;
      }
    }
    if (changed) work_.insert(idx);
  }

  void IndexHandlers() {
    for (const auto& h : method_.exception_handlers) {
      auto start = method_.IndexOf(h.start);
      auto end = h.end == kNoInstruction ? std::optional<std::size_t>(
                                               method_.instructions.size())
                                         : method_.IndexOf(h.end);
      auto handler = method_.IndexOf(h.handler);
      if (!start || !end || !handler) Fail("handler refers to unknown code");
      handlers_.push_back({*start, *end, *handler,
                           h.catch_type.empty() ? "java/lang/Throwable"
                                                : h.catch_type});
    }
  }

  void PropagateToHandlers(std::size_t idx, const Frame& in,
                           const Frame& out) {
    for (const auto& h : handlers_) {
      if (idx < h.start || idx >= h.end) continue;
      Frame f;
      f.locals = in.locals;
      f.stack = {VType::Object(h.catch_type)};
      Merge(h.handler, f);
      f.locals = out.locals;
      Merge(h.handler, f);
    }
  }

  // Operand stack.

  static void Push(Frame& f, const VType& v) {
    f.stack.push_back(v);
    if (v.is_wide()) f.stack.push_back(VType::Top());
  }

  static VType Pop1(Frame& f) {
    if (f.stack.empty()) Fail("operand stack underflow");
    VType v = f.stack.back();
    if (v.tag == Tag::kTop) Fail("expected a category-1 value, found wide");
    f.stack.pop_back();
    return v;
  }

  static void PopWide(Frame& f, Tag tag) {
    if (f.stack.size() < 2 || f.stack.back().tag != Tag::kTop ||
        f.stack[f.stack.size() - 2].tag != tag) {
      Fail(std::string("expected ") + (tag == Tag::kLong ? "long" : "double") +
           " on stack");
    }
    f.stack.resize(f.stack.size() - 2);
  }

  static void PopTag(Frame& f, Tag tag) {
    if (tag == Tag::kLong || tag == Tag::kDouble) {
      PopWide(f, tag);
      return;
    }
    VType v = Pop1(f);
    if (v.tag != tag) {
      Fail("expected " + VType{tag, {}, 0}.ToString() + ", found " +
           v.ToString());
    }
  }

  static VType PopRef(Frame& f) {
    VType v = Pop1(f);
    if (!v.is_reference()) Fail("expected reference, found " + v.ToString());
    return v;
  }

  static VType PopInitializedRef(Frame& f) {
    VType v = PopRef(f);
    if (v.tag == Tag::kUninitialized || v.tag == Tag::kUninitializedThis) {
      Fail("use of uninitialized object");
    }
    return v;
  }

  void CheckAssignable(const VType& v, std::string_view target_class) const {
    if (v.tag == Tag::kNull) return;
    if (!hierarchy_.IsAssignable(v.name, target_class)) {
      Fail(v.name + " is not assignable to " + std::string(target_class));
    }
  }

  void PopDescriptor(Frame& f, std::string_view desc) const {
    VType want = VTypeOfDescriptor(desc);
    if (want.tag == Tag::kObject) {
      CheckAssignable(PopInitializedRef(f), want.name);
    } else {
      PopTag(f, want.tag);
    }
  }

  static void PushDescriptor(Frame& f, std::string_view desc) {
    if (desc == "V") return;
    Push(f, VTypeOfDescriptor(desc));
  }

  static void RequireBoundary(const Frame& f, std::size_t k) {
    if (f.stack.size() < k) Fail("operand stack underflow");
    if (f.stack[f.stack.size() - k].tag == Tag::kTop) {
      Fail("stack operation splits a wide value");
    }
  }

  static void StackOp(Frame& f, StackOpKind op) {
    auto& s = f.stack;
    auto copy_top = [&](std::size_t n, std::size_t depth) {
      std::vector<VType> top(s.end() - n, s.end());
      s.insert(s.end() - depth, top.begin(), top.end());
    };
    switch (op) {
      case StackOpKind::kPop:
        RequireBoundary(f, 1);
        s.pop_back();
        return;
      case StackOpKind::kPop2:
        RequireBoundary(f, 2);
        s.resize(s.size() - 2);
        return;
      case StackOpKind::kDup:
        RequireBoundary(f, 1);
        copy_top(1, 0);
        return;
      case StackOpKind::kDupX1:
        RequireBoundary(f, 1);
        RequireBoundary(f, 2);
        copy_top(1, 2);
        return;
      case StackOpKind::kDupX2:
        RequireBoundary(f, 1);
        RequireBoundary(f, 3);
        copy_top(1, 3);
        return;
      case StackOpKind::kDup2:
        RequireBoundary(f, 2);
        copy_top(2, 0);
        return;
      case StackOpKind::kDup2X1:
        RequireBoundary(f, 2);
        RequireBoundary(f, 3);
        copy_top(2, 3);
        return;
      case StackOpKind::kDup2X2:
        RequireBoundary(f, 2);
        RequireBoundary(f, 4);
        copy_top(2, 4);
        return;
      case StackOpKind::kSwap:
        RequireBoundary(f, 1);
        RequireBoundary(f, 2);
        std::swap(s[s.size() - 1], s[s.size() - 2]);
        return;
    }
  }

  // Locals.

  const VType& Local(const Frame& f, uint16_t slot) const {
    if (slot >= f.locals.size()) Fail("local slot out of range");
    return f.locals[slot];
  }

  static void SetLocal(Frame& f, uint16_t slot, const VType& v) {
    if (slot > 0 && f.locals[slot - 1].is_wide()) {
      f.locals[slot - 1] = VType::Top();
    }
    if (f.locals[slot].is_wide() && slot + 1u < f.locals.size()) {
      f.locals[slot + 1] = VType::Top();
    }
    f.locals[slot] = v;
    if (v.is_wide()) f.locals[slot + 1] = VType::Top();
  }

  static void Replace(Frame& f, const VType& from, const VType& to) {
    for (auto& v : f.locals) {
      if (v == from) v = to;
    }
    for (auto& v : f.stack) {
      if (v == from) v = to;
    }
  }

  // Transfer function.

  void Execute(const Instruction& insn, Frame& f) {
    std::visit([&](const auto& o) { Step(insn, o, f); }, insn.op);
  }

  void Step(const Instruction&, const op::Load& o, Frame& f) {
    const VType& v = Local(f, o.slot);
    if (o.type == ValueType::kReference) {
      if (!v.is_reference()) {
        Fail("aload of non-reference local " + std::to_string(o.slot));
      }
      Push(f, v);
      return;
    }
    VType want = OfValueType(o.type);
    if (v.tag != want.tag) {
      Fail("load of " + want.ToString() + " from local " +
           std::to_string(o.slot) + " holding " + v.ToString());
    }
    Push(f, v);
  }

  void Step(const Instruction&, const op::Store& o, Frame& f) {
    VType v;
    if (o.type == ValueType::kReference) {
      v = PopRef(f);
    } else {
      v = OfValueType(o.type);
      PopTag(f, v.tag);
    }
    SetLocal(f, o.slot, v);
  }

  void Step(const Instruction&, const op::Increment& o, Frame& f) {
    if (Local(f, o.slot).tag != Tag::kInteger) {
      Fail("iinc on non-int local " + std::to_string(o.slot));
    }
  }

  void Step(const Instruction&, const op::Arithmetic& o, Frame& f) {
    if (o.type == ValueType::kReference) Fail("arithmetic on references");
    VType t = OfValueType(o.type);
    bool integral = o.type == ValueType::kInt || o.type == ValueType::kLong;
    switch (o.op) {
      case ArithmeticOp::kNeg:
        PopTag(f, t.tag);
        break;
      case ArithmeticOp::kShl:
      case ArithmeticOp::kShr:
      case ArithmeticOp::kUshr:
        if (!integral) Fail("shift of floating-point value");
        PopTag(f, Tag::kInteger);
        PopTag(f, t.tag);
        break;
      case ArithmeticOp::kAnd:
      case ArithmeticOp::kOr:
      case ArithmeticOp::kXor:
        if (!integral) Fail("bitwise operation on floating-point value");
        [[fallthrough]];
      default:
        PopTag(f, t.tag);
        PopTag(f, t.tag);
        break;
    }
    Push(f, t);
  }

  void Step(const Instruction&, const op::Branch& o, Frame& f) {
    switch (o.operands) {
      case BranchOperands::kIntZero:
        PopTag(f, Tag::kInteger);
        break;
      case BranchOperands::kIntInt:
        PopTag(f, Tag::kInteger);
        PopTag(f, Tag::kInteger);
        break;
      case BranchOperands::kRefRef:
        PopRef(f);
        PopRef(f);
        break;
      case BranchOperands::kRefNull:
        if (o.relation != Relation::kEq && o.relation != Relation::kNe) {
          Fail("null comparison must be eq or ne");
        }
        PopRef(f);
        break;
    }
    if ((o.operands == BranchOperands::kRefRef) &&
        o.relation != Relation::kEq && o.relation != Relation::kNe) {
      Fail("reference comparison must be eq or ne");
    }
  }

  void Step(const Instruction&, const op::Goto&, Frame&) {}

  void Step(const Instruction&, const op::Switch&, Frame& f) {
    PopTag(f, Tag::kInteger);
  }

  void Step(const Instruction&, const op::FieldAccess& o, Frame& f) {
    if (!descriptor::IsValidField(o.ref.descriptor)) {
      Fail("bad field descriptor " + o.ref.descriptor);
    }
    switch (o.op) {
      case FieldOp::kGetStatic:
        PushDescriptor(f, o.ref.descriptor);
        return;
      case FieldOp::kPutStatic:
        PopDescriptor(f, o.ref.descriptor);
        return;
      case FieldOp::kGetField:
        CheckAssignable(PopInitializedRef(f), o.ref.owner);
        PushDescriptor(f, o.ref.descriptor);
        return;
      case FieldOp::kPutField: {
        PopDescriptor(f, o.ref.descriptor);
        VType recv = PopRef(f);
        if (recv.tag == Tag::kUninitializedThis) {
          if (o.ref.owner != owner_.name) {
            Fail("putfield on uninitialized this for inherited field");
          }
          return;
        }
        if (recv.tag == Tag::kUninitialized) {
          Fail("putfield on uninitialized object");
        }
        CheckAssignable(recv, o.ref.owner);
        return;
      }
    }
  }

  void Step(const Instruction&, const op::Invoke& o, Frame& f) {
    auto shape = descriptor::ParseMethod(o.ref.descriptor);
    if (!shape) Fail("bad method descriptor " + o.ref.descriptor);
    if (o.ref.name == "<clinit>") Fail("explicit call of <clinit>");
    for (auto it = shape->params.rbegin(); it != shape->params.rend(); ++it) {
      PopDescriptor(f, *it);
    }
    if (o.kind != InvokeKind::kStatic) {
      if (o.ref.name == "<init>") {
        if (o.kind != InvokeKind::kSpecial) Fail("<init> via non-special");
        if (shape->ret != "V") Fail("<init> must return void");
        VType recv = PopRef(f);
        if (recv.tag == Tag::kUninitialized) {
          const Instruction* site = method_.Find(recv.site);
          const op::New* n = site ? site->as<op::New>() : nullptr;
          if (!n) Fail("uninitialized value without a new");
          if (n->type.name != o.ref.owner) {
            Fail("constructor of " + o.ref.owner + " called on new " +
                 n->type.name);
          }
          Replace(f, recv, VType::Object(n->type.name));
        } else if (recv.tag == Tag::kUninitializedThis) {
          if (o.ref.owner != owner_.name && o.ref.owner != owner_.super_name) {
            Fail("constructor chaining to unrelated class " + o.ref.owner);
          }
          Replace(f, recv, VType::Object(owner_.name));
        } else {
          Fail("<init> on initialized object");
        }
      } else {
        VType recv = PopInitializedRef(f);
        if (o.kind != InvokeKind::kInterface) CheckAssignable(recv, o.ref.owner);
      }
    } else if (o.ref.name == "<init>") {
      Fail("static call of <init>");
    }
    PushDescriptor(f, shape->ret);
  }

  void Step(const Instruction&, const op::InvokeDynamic& o, Frame& f) {
    auto shape = descriptor::ParseMethod(o.call_site.descriptor);
    if (!shape) Fail("bad call site descriptor");
    for (auto it = shape->params.rbegin(); it != shape->params.rend(); ++it) {
      PopDescriptor(f, *it);
    }
    PushDescriptor(f, shape->ret);
  }

  void Step(const Instruction& insn, const op::New& o, Frame& f) {
    if (IsArrayName(o.type.name)) Fail("new of array type");
    Push(f, VType::Uninit(insn.id));
  }

  void Step(const Instruction&, const op::NewArray& o, Frame& f) {
    if (!IsArrayName(o.array_type.name)) Fail("newarray of non-array type");
    int dims = o.multi ? o.dimensions : 1;
    if (dims < 1) Fail("zero-dimension array");
    for (int i = 0; i < dims; ++i) PopTag(f, Tag::kInteger);
    Push(f, VType::Object(o.array_type.name));
  }

  void Step(const Instruction&, const op::Push& o, Frame& f) {
    using K = Constant::Kind;
    switch (o.value.kind) {
      case K::kNull: Push(f, VType::Null()); return;
      case K::kInteger: Push(f, VType::Int()); return;
      case K::kFloat: Push(f, VType::Float()); return;
      case K::kLong: Push(f, VType::Long()); return;
      case K::kDouble: Push(f, VType::Double()); return;
      case K::kString: Push(f, VType::Object("java/lang/String")); return;
      case K::kClass: Push(f, VType::Object("java/lang/Class")); return;
      case K::kMethodType:
        Push(f, VType::Object("java/lang/invoke/MethodType"));
        return;
      case K::kMethodHandle:
        Push(f, VType::Object("java/lang/invoke/MethodHandle"));
        return;
      case K::kDynamic:
        if (!descriptor::IsValidField(o.value.descriptor)) {
          Fail("bad dynamic constant descriptor");
        }
        Push(f, VTypeOfDescriptor(o.value.descriptor));
        return;
      default:
        Fail(std::string("cannot push constant of kind ") +
             KindName(o.value.kind));
    }
  }

  void Step(const Instruction&, const op::Return& o, Frame& f) {
    auto shape = descriptor::ParseMethod(method_.descriptor);
    if (!shape) Fail("bad method descriptor");
    if (shape->ret == "V") {
      if (o.type) Fail("value return from void method");
      if (method_.is_constructor()) {
        for (const auto& v : f.locals) {
          if (v.tag == Tag::kUninitializedThis) {
            Fail("constructor returns before calling super or this");
          }
        }
      }
      return;
    }
    if (!o.type) Fail("void return from non-void method");
    ValueType want = descriptor::ValueTypeOf(shape->ret);
    if (*o.type != want) Fail("return type mismatch");
    PopDescriptor(f, shape->ret);
  }

  void Step(const Instruction&, const op::Throw&, Frame& f) {
    CheckAssignable(PopInitializedRef(f), "java/lang/Throwable");
  }

  void Step(const Instruction&, const op::TypeCheck& o, Frame& f) {
    PopInitializedRef(f);
    if (o.op == TypeCheckOp::kCheckCast) {
      Push(f, VType::Object(o.type.name));
    } else {
      Push(f, VType::Int());
    }
  }

  void Step(const Instruction&, const op::Stack& o, Frame& f) {
    StackOp(f, o.op);
  }

  VType PopArray(Frame& f) {
    VType v = PopInitializedRef(f);
    if (v.tag == Tag::kObject && !IsArrayName(v.name)) {
      Fail("array operation on non-array " + v.name);
    }
    return v;
  }

  void Step(const Instruction&, const op::Raw& o, Frame& f) {
    namespace oc = opcodes;
    uint8_t c = o.opcode;
    switch (c) {
      case oc::kNop: return;
      case oc::kIaload: case oc::kBaload: case oc::kCaload: case oc::kSaload:
        PopTag(f, Tag::kInteger);
        PopArray(f);
        Push(f, VType::Int());
        return;
      case oc::kLaload:
        PopTag(f, Tag::kInteger);
        PopArray(f);
        Push(f, VType::Long());
        return;
      case oc::kFaload:
        PopTag(f, Tag::kInteger);
        PopArray(f);
        Push(f, VType::Float());
        return;
      case oc::kDaload:
        PopTag(f, Tag::kInteger);
        PopArray(f);
        Push(f, VType::Double());
        return;
      case oc::kAaload: {
        PopTag(f, Tag::kInteger);
        Push(f, ComponentOf(PopArray(f)));
        return;
      }
      case oc::kIastore: case oc::kBastore: case oc::kCastore:
      case oc::kSastore:
        PopTag(f, Tag::kInteger);
        PopTag(f, Tag::kInteger);
        PopArray(f);
        return;
      case oc::kLastore:
        PopWide(f, Tag::kLong);
        PopTag(f, Tag::kInteger);
        PopArray(f);
        return;
      case oc::kFastore:
        PopTag(f, Tag::kFloat);
        PopTag(f, Tag::kInteger);
        PopArray(f);
        return;
      case oc::kDastore:
        PopWide(f, Tag::kDouble);
        PopTag(f, Tag::kInteger);
        PopArray(f);
        return;
      case oc::kAastore:
        PopInitializedRef(f);
        PopTag(f, Tag::kInteger);
        PopArray(f);
        return;
      case oc::kArraylength:
        PopArray(f);
        Push(f, VType::Int());
        return;
      case oc::kMonitorenter:
      case oc::kMonitorexit:
        PopInitializedRef(f);
        return;
      case oc::kLcmp:
        PopWide(f, Tag::kLong);
        PopWide(f, Tag::kLong);
        Push(f, VType::Int());
        return;
      case oc::kFcmpl: case oc::kFcmpg:
        PopTag(f, Tag::kFloat);
        PopTag(f, Tag::kFloat);
        Push(f, VType::Int());
        return;
      case oc::kDcmpl: case oc::kDcmpg:
        PopWide(f, Tag::kDouble);
        PopWide(f, Tag::kDouble);
        Push(f, VType::Int());
        return;
      default:
        break;
    }
    if (c >= oc::kI2l && c <= oc::kI2s) {
      // Conversions: source and result types indexed by opcode.
      static constexpr Tag kFrom[] = {
          Tag::kInteger, Tag::kInteger, Tag::kInteger, Tag::kLong,
          Tag::kLong,    Tag::kLong,    Tag::kFloat,   Tag::kFloat,
          Tag::kFloat,   Tag::kDouble,  Tag::kDouble,  Tag::kDouble,
          Tag::kInteger, Tag::kInteger, Tag::kInteger};
      static constexpr Tag kTo[] = {
          Tag::kLong,    Tag::kFloat,   Tag::kDouble,  Tag::kInteger,
          Tag::kFloat,   Tag::kDouble,  Tag::kInteger, Tag::kLong,
          Tag::kDouble,  Tag::kInteger, Tag::kLong,    Tag::kFloat,
          Tag::kInteger, Tag::kInteger, Tag::kInteger};
      PopTag(f, kFrom[c - oc::kI2l]);
      Push(f, VType{kTo[c - oc::kI2l], {}, 0});
      return;
    }
    Fail(std::string("unsupported opcode ") + opcodes::Mnemonic(c));
  }

  const Clazz& owner_;
  const Method& method_;
  const ClassHierarchy& hierarchy_;
  std::size_t max_locals_ = 0;
  std::size_t max_stack_ = 0;
  std::map<std::size_t, Frame> states_;
  std::set<std::size_t> work_;
  struct HandlerRange {
    std::size_t start, end, handler;
    std::string catch_type;
  };
  std::vector<std::vector<const ControlFlowEdge*>> out_edges_;
  std::vector<HandlerRange> handlers_;
};

}  // namespace

std::string VType::ToString() const {
  switch (tag) {
    case Tag::kTop: return "top";
    case Tag::kInteger: return "int";
    case Tag::kFloat: return "float";
    case Tag::kLong: return "long";
    case Tag::kDouble: return "double";
    case Tag::kNull: return "null";
    case Tag::kUninitializedThis: return "uninitializedThis";
    case Tag::kUninitialized: return "uninitialized@" + std::to_string(site);
    case Tag::kObject: return name;
  }
  return "?";
}

VType VTypeOfDescriptor(std::string_view desc) {
  if (desc.empty()) return VType::Top();
  switch (desc[0]) {
    case 'Z': case 'B': case 'C': case 'S': case 'I': return VType::Int();
    case 'F': return VType::Float();
    case 'J': return VType::Long();
    case 'D': return VType::Double();
    default: return VType::Object(descriptor::ClassNameOf(desc));
  }
}

Frame InitialFrame(const Clazz& owner, const Method& method) {
  Frame f;
  if (!method.is_static()) {
    if (method.is_constructor() && owner.name != "java/lang/Object") {
      f.locals.push_back(VType::UninitThis());
    } else {
      f.locals.push_back(VType::Object(owner.name));
    }
  }
  if (auto shape = descriptor::ParseMethod(method.descriptor)) {
    for (const auto& p : shape->params) {
      VType v = VTypeOfDescriptor(p);
      f.locals.push_back(v);
      if (v.is_wide()) f.locals.push_back(VType::Top());
    }
  }
  return f;
}

FrameAnalysis AnalyzeFrames(const Clazz& owner, const Method& method,
                            const ClassHierarchy& hierarchy) {
  return Analyzer(owner, method, hierarchy).Run();
}

std::vector<VType> CompactLocals(const std::vector<VType>& locals) {
  std::vector<VType> out;
  for (std::size_t i = 0; i < locals.size(); ++i) {
    out.push_back(locals[i]);
    if (locals[i].is_wide()) ++i;
  }
  while (!out.empty() && out.back().tag == VType::Tag::kTop) out.pop_back();
  return out;
}

std::vector<VType> CompactStack(const std::vector<VType>& stack) {
  std::vector<VType> out;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    out.push_back(stack[i]);
    if (stack[i].is_wide()) ++i;
  }
  return out;
}

}  // namespace jmut
