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

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "jmut/classfile.h"
#include "jmut/descriptor.h"
#include "jmut/errors.h"
#include "jmut/frames.h"
#include "jmut/opcodes.h"

namespace jmut {

namespace {

namespace oc = opcodes;

class Bytes {
 public:
  void U1(uint32_t v) { data_.push_back(static_cast<uint8_t>(v)); }
  void U2(uint32_t v) {
    U1(v >> 8);
    U1(v);
  }
  void U4(uint32_t v) {
    U2(v >> 16);
    U2(v & 0xffff);
  }
  void Append(std::span<const uint8_t> b) {
    data_.insert(data_.end(), b.begin(), b.end());
  }
  void Append(const Bytes& b) { Append(b.data_); }
  void Put2(std::size_t at, uint32_t v) {
    data_[at] = static_cast<uint8_t>(v >> 8);
    data_[at + 1] = static_cast<uint8_t>(v);
  }
  std::size_t size() const { return data_.size(); }
  std::vector<uint8_t>& data() { return data_; }

 private:
  std::vector<uint8_t> data_;
};

// Constant pool built in first-use order.
class PoolBuilder {
 public:
  uint16_t Utf8(const std::string& s) { return Intern(Constant::Utf8(s)); }
  uint16_t Class(const std::string& name) {
    return Intern(Constant::Class(name));
  }

  uint16_t Intern(const Constant& c) {
    std::string key = Key(c);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    Bytes body;
    using K = Constant::Kind;
    uint8_t tag = 0;
    switch (c.kind) {
      case K::kNull:
        throw UnverifiableMethod("null cannot be a pool constant");
      case K::kUtf8:
        tag = 1;
        if (c.text.size() > 65535) throw UnverifiableMethod("string too long");
        body.U2(static_cast<uint32_t>(c.text.size()));
        body.Append(std::span<const uint8_t>(
            reinterpret_cast<const uint8_t*>(c.text.data()), c.text.size()));
        break;
      case K::kInteger:
        tag = 3;
        body.U4(static_cast<uint32_t>(c.bits));
        break;
      case K::kFloat:
        tag = 4;
        body.U4(static_cast<uint32_t>(c.bits));
        break;
      case K::kLong:
      case K::kDouble:
        tag = c.kind == K::kLong ? 5 : 6;
        body.U4(static_cast<uint32_t>(static_cast<uint64_t>(c.bits) >> 32));
        body.U4(static_cast<uint32_t>(c.bits));
        break;
      case K::kClass: tag = 7; body.U2(Utf8(c.text)); break;
      case K::kString: tag = 8; body.U2(Utf8(c.text)); break;
      case K::kMethodType: tag = 16; body.U2(Utf8(c.text)); break;
      case K::kModule: tag = 19; body.U2(Utf8(c.text)); break;
      case K::kPackage: tag = 20; body.U2(Utf8(c.text)); break;
      case K::kFieldRef:
      case K::kMethodRef:
      case K::kInterfaceMethodRef:
        tag = c.kind == K::kFieldRef ? 9 : c.kind == K::kMethodRef ? 10 : 11;
        body.U2(Class(c.owner));
        body.U2(NameAndType(c.name, c.descriptor));
        break;
      case K::kNameAndType:
        tag = 12;
        body.U2(Utf8(c.name));
        body.U2(Utf8(c.descriptor));
        break;
      case K::kDynamic:
      case K::kInvokeDynamic:
        tag = c.kind == K::kDynamic ? 17 : 18;
        body.U2(c.index);
        body.U2(NameAndType(c.name, c.descriptor));
        break;
      case K::kMethodHandle:
        tag = 15;
        if (c.target.size() != 1) {
          throw UnverifiableMethod("method handle without target");
        }
        body.U1(c.index);
        body.U2(Intern(c.target[0]));
        break;
    }
    if (next_ + (c.is_wide() ? 2 : 1) > 65535) {
      throw UnverifiableMethod("constant pool overflow");
    }
    uint16_t idx = static_cast<uint16_t>(next_);
    next_ += c.is_wide() ? 2 : 1;
    out_.U1(tag);
    out_.Append(body);
    index_.emplace(std::move(key), idx);
    return idx;
  }

  uint16_t NameAndType(const std::string& name, const std::string& desc) {
    Constant nt;
    nt.kind = Constant::Kind::kNameAndType;
    nt.name = name;
    nt.descriptor = desc;
    return Intern(nt);
  }

  uint16_t count() const { return static_cast<uint16_t>(next_); }
  const Bytes& bytes() const { return out_; }

 private:
  static std::string Key(const Constant& c) {
    std::string k = std::to_string(static_cast<int>(c.kind));
    k += '\x01' + std::to_string(c.bits) + '\x01' + c.text + '\x01' +
         c.owner + '\x01' + c.name + '\x01' + c.descriptor + '\x01' +
         std::to_string(c.index);
    for (const auto& t : c.target) k += '\x02' + Key(t);
    return k;
  }

  std::map<std::string, uint16_t> index_;
  Bytes out_;
  uint32_t next_ = 1;
};

void WriteOpaque(Bytes& out, PoolBuilder& pool, const OpaqueAttribute& a) {
  std::vector<uint8_t> bytes = a.bytes;
  for (const auto& s : a.slots) {
    if (s.offset + 2 > bytes.size()) {
      throw UnverifiableMethod("attribute slot outside " + a.name);
    }
    uint16_t idx = pool.Intern(s.value);
    bytes[s.offset] = static_cast<uint8_t>(idx >> 8);
    bytes[s.offset + 1] = static_cast<uint8_t>(idx);
  }
  out.U2(pool.Utf8(a.name));
  out.U4(static_cast<uint32_t>(bytes.size()));
  out.Append(bytes);
}

// One unit of emitted code: a model instruction or a jump inserted because
// a fall-through successor is not laid out next.
struct Item {
  const Instruction* insn = nullptr;
  InstructionId jump_target = kNoInstruction;  // synthetic goto
  std::vector<InstructionId> targets;          // conditional/case targets
  InstructionId default_target = kNoInstruction;  // goto / switch default
  bool wide_jump = false;
  uint32_t offset = 0;
};

bool EndsFlow(const Item& item) {
  if (!item.insn) return true;
  switch (item.insn->kind()) {
    case InstructionKind::kGoto:
    case InstructionKind::kSwitch:
    case InstructionKind::kReturn:
    case InstructionKind::kThrow:
      return true;
    default:
      return false;
  }
}

class CodeWriter {
 public:
  CodeWriter(const Clazz& clazz, const Method& method,
             const ClassHierarchy& hierarchy, PoolBuilder& pool)
      : clazz_(clazz), method_(method), hierarchy_(hierarchy), pool_(pool) {}

  void Write(Bytes& out) {
    FrameAnalysis frames = AnalyzeFrames(clazz_, method_, hierarchy_);
    if (!frames.ok) {
      throw UnverifiableMethod(clazz_.name + "." + method_.name +
                               method_.descriptor + ": " + frames.error);
    }
    BuildItems();
    InternConstants();
    Layout();
    Bytes code;
    for (const auto& item : items_) Encode(item, code);
    if (code.size() > 65535) Fail("code too long");

    Bytes attr;
    attr.U2(frames.max_stack);
    attr.U2(frames.max_locals);
    attr.U4(static_cast<uint32_t>(code.size()));
    attr.Append(code);

    std::vector<const ExceptionHandler*> handlers;
    for (const auto& h : method_.exception_handlers) {
      if (OffsetOf(h.start) < EndOffset(h.end)) handlers.push_back(&h);
    }
    attr.U2(static_cast<uint32_t>(handlers.size()));
    for (const auto* h : handlers) {
      attr.U2(OffsetOf(h->start));
      attr.U2(EndOffset(h->end));
      attr.U2(OffsetOf(h->handler));
      attr.U2(h->catch_type.empty() ? 0 : pool_.Class(h->catch_type));
    }

    std::vector<std::pair<uint32_t, uint16_t>> lines;
    for (const auto& l : method_.line_table) {
      if (position_.count(l.instruction)) {
        lines.push_back({OffsetOf(l.instruction), l.line});
      }
    }
    Bytes frames_attr;
    uint16_t frame_count = 0;
    if (clazz_.version.major >= 50) {
      frame_count = WriteFrames(frames, frames_attr);
    }
    attr.U2((lines.empty() ? 0 : 1) + (frame_count ? 1 : 0));
    if (!lines.empty()) {
      attr.U2(pool_.Utf8("LineNumberTable"));
      attr.U4(static_cast<uint32_t>(2 + 4 * lines.size()));
      attr.U2(static_cast<uint32_t>(lines.size()));
      for (auto [pc, line] : lines) {
        attr.U2(pc);
        attr.U2(line);
      }
    }
    if (frame_count) {
      attr.U2(pool_.Utf8("StackMapTable"));
      attr.U4(static_cast<uint32_t>(frames_attr.size() + 2));
      attr.U2(frame_count);
      attr.Append(frames_attr);
    }

    out.U2(pool_.Utf8("Code"));
    out.U4(static_cast<uint32_t>(attr.size()));
    out.Append(attr);
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw UnverifiableMethod(clazz_.name + "." + method_.name +
                             method_.descriptor + ": " + what);
  }

  void BuildItems() {
    const auto& insns = method_.instructions;
    auto out_edges = OutEdgesByIndex(method_);
    for (std::size_t i = 0; i < insns.size(); ++i) {
      const Instruction& insn = insns[i];
      Item item;
      item.insn = &insn;
      InstructionId fall = kNoInstruction;
      std::vector<InstructionId> cond;
      std::vector<InstructionId> uncond;
      for (const auto* e : out_edges[i]) {
        if (!method_.Find(e->end)) Fail("edge to unknown instruction");
        if (e->kind == EdgeKind::kConditional) cond.push_back(e->end);
        if (e->kind == EdgeKind::kUnconditional) uncond.push_back(e->end);
      }
      std::string at = " at instruction " + std::to_string(i);
      switch (insn.kind()) {
        case InstructionKind::kBranch:
          if (cond.size() != 1 || uncond.size() != 1) {
            Fail("branch needs one target and one fall-through" + at);
          }
          item.targets = cond;
          fall = uncond[0];
          break;
        case InstructionKind::kGoto:
          if (cond.size() != 0 || uncond.size() != 1) Fail("bad goto" + at);
          item.default_target = uncond[0];
          break;
        case InstructionKind::kSwitch:
          if (cond.size() != insn.as<op::Switch>()->keys.size() ||
              uncond.size() != 1) {
            Fail("switch targets do not match its keys" + at);
          }
          item.targets = cond;
          item.default_target = uncond[0];
          break;
        case InstructionKind::kReturn:
        case InstructionKind::kThrow:
          if (!cond.empty() || !uncond.empty()) {
            Fail("terminal instruction has successors" + at);
          }
          break;
        default:
          if (!cond.empty() || uncond.size() != 1) {
            Fail("instruction needs exactly one successor" + at);
          }
          fall = uncond[0];
      }
      position_[insn.id] = items_.size();
      items_.push_back(std::move(item));
      if (fall != kNoInstruction &&
          (i + 1 >= insns.size() || insns[i + 1].id != fall)) {
        Item jump;
        jump.jump_target = fall;
        jump.default_target = fall;
        items_.push_back(std::move(jump));
      }
    }
  }

  void InternConstants() {
    for (const auto& item : items_) {
      if (!item.insn) continue;
      if (auto* p = item.insn->as<op::Push>()) {
        if (NeedsLdc(p->value)) ldc_index_[item.insn->id] = pool_.Intern(p->value);
      }
    }
  }

  static bool NeedsLdc(const Constant& v) {
    using K = Constant::Kind;
    switch (v.kind) {
      case K::kNull: return false;
      case K::kInteger: return v.as_int() < -32768 || v.as_int() > 32767;
      case K::kLong: return v.bits != 0 && v.bits != 1;
      case K::kFloat: {
        uint32_t b = static_cast<uint32_t>(v.bits);
        return b != 0 && b != 0x3f800000u && b != 0x40000000u;
      }
      case K::kDouble: {
        uint64_t b = static_cast<uint64_t>(v.bits);
        return b != 0 && b != 0x3ff0000000000000ull;
      }
      default: return true;
    }
  }

  void Layout() {
    for (int round = 0; round < 64; ++round) {
      uint32_t pc = 0;
      for (auto& item : items_) {
        item.offset = pc;
        Bytes scratch;
        Encode(item, scratch, /*sizing=*/true);
        pc += static_cast<uint32_t>(scratch.size());
      }
      code_length_ = pc;
      bool changed = false;
      for (auto& item : items_) {
        bool is_goto = item.jump_target != kNoInstruction ||
                       (item.insn && item.insn->kind() == InstructionKind::kGoto);
        if (is_goto && !item.wide_jump) {
          int64_t d = int64_t{OffsetOf(item.default_target)} - item.offset;
          if (d < -32768 || d > 32767) {
            item.wide_jump = true;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    for (const auto& item : items_) {
      if (item.insn && item.insn->kind() == InstructionKind::kBranch) {
        int64_t d = int64_t{OffsetOf(item.targets[0])} - item.offset;
        if (d < -32768 || d > 32767) Fail("branch offset out of range");
      }
    }
  }

  uint32_t OffsetOf(InstructionId id) const {
    auto it = position_.find(id);
    if (it == position_.end()) Fail("reference to unknown instruction");
    return items_[it->second].offset;
  }

  uint32_t EndOffset(InstructionId id) const {
    return id == kNoInstruction ? code_length_ : OffsetOf(id);
  }

  void Encode(const Item& item, Bytes& out, bool sizing = false) const {
    auto rel = [&](InstructionId target) -> int32_t {
      if (sizing) return 0;
      return static_cast<int32_t>(int64_t{OffsetOf(target)} - item.offset);
    };
    if (!item.insn) {
      EncodeGoto(item, out, rel(item.jump_target));
      return;
    }
    std::visit([&](const auto& o) { Op(item, o, out, rel, sizing); },
               item.insn->op);
  }

  static void EncodeGoto(const Item& item, Bytes& out, int32_t d) {
    if (item.wide_jump) {
      out.U1(oc::kGotoW);
      out.U4(static_cast<uint32_t>(d));
    } else {
      out.U1(oc::kGoto);
      out.U2(static_cast<uint16_t>(d));
    }
  }

  static int TypeIndex(ValueType t) {
    switch (t) {
      case ValueType::kInt: return 0;
      case ValueType::kLong: return 1;
      case ValueType::kFloat: return 2;
      case ValueType::kDouble: return 3;
      case ValueType::kReference: return 4;
    }
    return 0;
  }

  static void LocalOp(Bytes& out, uint8_t base, uint8_t short_base,
                      ValueType t, uint16_t slot) {
    int ti = TypeIndex(t);
    if (slot <= 3) {
      out.U1(short_base + ti * 4 + slot);
    } else if (slot <= 255) {
      out.U1(base + ti);
      out.U1(slot);
    } else {
      out.U1(oc::kWide);
      out.U1(base + ti);
      out.U2(slot);
    }
  }

  template <typename Rel>
  void Op(const Item&, const op::Load& o, Bytes& out, Rel&, bool) const {
    LocalOp(out, oc::kIload, oc::kIload0, o.type, o.slot);
  }
  template <typename Rel>
  void Op(const Item&, const op::Store& o, Bytes& out, Rel&, bool) const {
    LocalOp(out, oc::kIstore, oc::kIstore0, o.type, o.slot);
  }
  template <typename Rel>
  void Op(const Item&, const op::Increment& o, Bytes& out, Rel&, bool) const {
    if (o.slot <= 255 && o.delta >= -128 && o.delta <= 127) {
      out.U1(oc::kIinc);
      out.U1(o.slot);
      out.U1(static_cast<uint8_t>(o.delta));
    } else {
      out.U1(oc::kWide);
      out.U1(oc::kIinc);
      out.U2(o.slot);
      out.U2(static_cast<uint16_t>(o.delta));
    }
  }
  template <typename Rel>
  void Op(const Item&, const op::Arithmetic& o, Bytes& out, Rel&,
          bool) const {
    int ti = TypeIndex(o.type);
    if (ti > 3) Fail("arithmetic on references");
    int k = static_cast<int>(o.op);
    if (o.op <= ArithmeticOp::kRem) {
      out.U1(oc::kIadd + k * 4 + ti);
    } else if (o.op == ArithmeticOp::kNeg) {
      out.U1(0x74 + ti);
    } else {
      if (ti > 1) Fail("bitwise arithmetic on floating point");
      out.U1(0x78 + (k - static_cast<int>(ArithmeticOp::kShl)) * 2 + ti);
    }
  }
  template <typename Rel>
  void Op(const Item& item, const op::Branch& o, Bytes& out, Rel& rel,
          bool) const {
    int r = static_cast<int>(o.relation);
    switch (o.operands) {
      case BranchOperands::kIntZero: out.U1(oc::kIfeq + r); break;
      case BranchOperands::kIntInt: out.U1(oc::kIfIcmpeq + r); break;
      case BranchOperands::kRefRef:
        if (r > 1) Fail("ordered reference comparison");
        out.U1(oc::kIfAcmpeq + r);
        break;
      case BranchOperands::kRefNull:
        if (r > 1) Fail("ordered null comparison");
        out.U1(r == 0 ? oc::kIfnull : oc::kIfnonnull);
        break;
    }
    out.U2(static_cast<uint16_t>(rel(item.targets[0])));
  }
  template <typename Rel>
  void Op(const Item& item, const op::Goto&, Bytes& out, Rel& rel,
          bool) const {
    EncodeGoto(item, out, rel(item.default_target));
  }
  template <typename Rel>
  void Op(const Item& item, const op::Switch& o, Bytes& out, Rel& rel,
          bool) const {
    bool contiguous = !o.keys.empty();
    for (std::size_t i = 1; i < o.keys.size(); ++i) {
      if (int64_t{o.keys[i]} != int64_t{o.keys[0]} + static_cast<int64_t>(i)) {
        contiguous = false;
      }
    }
    bool table = o.table && contiguous;
    out.U1(table ? oc::kTableswitch : oc::kLookupswitch);
    for (uint32_t pad = (4 - (item.offset + 1) % 4) % 4; pad > 0; --pad) {
      out.U1(0);
    }
    out.U4(static_cast<uint32_t>(rel(item.default_target)));
    if (table) {
      out.U4(static_cast<uint32_t>(o.keys.front()));
      out.U4(static_cast<uint32_t>(o.keys.back()));
      for (auto t : item.targets) out.U4(static_cast<uint32_t>(rel(t)));
    } else {
      std::vector<std::size_t> order(o.keys.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return o.keys[a] < o.keys[b];
      });
      for (std::size_t i = 1; i < order.size(); ++i) {
        if (o.keys[order[i]] == o.keys[order[i - 1]]) {
          Fail("duplicate switch key");
        }
      }
      out.U4(static_cast<uint32_t>(o.keys.size()));
      for (auto i : order) {
        out.U4(static_cast<uint32_t>(o.keys[i]));
        out.U4(static_cast<uint32_t>(rel(item.targets[i])));
      }
    }
  }
  template <typename Rel>
  void Op(const Item&, const op::FieldAccess& o, Bytes& out, Rel&,
          bool) const {
    static constexpr uint8_t kOps[] = {oc::kGetfield, oc::kPutfield,
                                       oc::kGetstatic, oc::kPutstatic};
    out.U1(kOps[static_cast<int>(o.op)]);
    Constant c;
    c.kind = Constant::Kind::kFieldRef;
    c.owner = o.ref.owner;
    c.name = o.ref.name;
    c.descriptor = o.ref.descriptor;
    out.U2(pool_.Intern(c));
  }
  template <typename Rel>
  void Op(const Item&, const op::Invoke& o, Bytes& out, Rel&, bool) const {
    static constexpr uint8_t kOps[] = {oc::kInvokevirtual, oc::kInvokespecial,
                                       oc::kInvokestatic,
                                       oc::kInvokeinterface};
    out.U1(kOps[static_cast<int>(o.kind)]);
    Constant c;
    c.kind = o.ref.interface || o.kind == InvokeKind::kInterface
                 ? Constant::Kind::kInterfaceMethodRef
                 : Constant::Kind::kMethodRef;
    c.owner = o.ref.owner;
    c.name = o.ref.name;
    c.descriptor = o.ref.descriptor;
    out.U2(pool_.Intern(c));
    if (o.kind == InvokeKind::kInterface) {
      out.U1(1 + descriptor::ArgumentSlots(o.ref.descriptor));
      out.U1(0);
    }
  }
  template <typename Rel>
  void Op(const Item&, const op::InvokeDynamic& o, Bytes& out, Rel&,
          bool) const {
    out.U1(oc::kInvokedynamic);
    out.U2(pool_.Intern(o.call_site));
    out.U2(0);
  }
  template <typename Rel>
  void Op(const Item&, const op::New& o, Bytes& out, Rel&, bool) const {
    out.U1(oc::kNew);
    out.U2(pool_.Class(o.type.name));
  }
  template <typename Rel>
  void Op(const Item&, const op::NewArray& o, Bytes& out, Rel&, bool) const {
    const std::string& t = o.array_type.name;
    if (t.size() < 2 || t[0] != '[') Fail("bad array type " + t);
    if (o.multi) {
      out.U1(oc::kMultianewarray);
      out.U2(pool_.Class(t));
      out.U1(o.dimensions);
      return;
    }
    static constexpr std::string_view kPrims = "ZCFDBSIJ";
    if (t.size() == 2 && kPrims.find(t[1]) != std::string_view::npos) {
      out.U1(oc::kNewarray);
      out.U1(static_cast<uint8_t>(4 + kPrims.find(t[1])));
      return;
    }
    out.U1(oc::kAnewarray);
    out.U2(pool_.Class(descriptor::ClassNameOf(std::string_view(t).substr(1))));
  }
  template <typename Rel>
  void Op(const Item& item, const op::Push& o, Bytes& out, Rel&,
          bool) const {
    using K = Constant::Kind;
    const Constant& v = o.value;
    if (!NeedsLdc(v)) {
      switch (v.kind) {
        case K::kNull: out.U1(oc::kAconstNull); return;
        case K::kInteger: {
          int32_t x = v.as_int();
          if (x >= -1 && x <= 5) {
            out.U1(oc::kIconst0 + x);
          } else if (x >= -128 && x <= 127) {
            out.U1(oc::kBipush);
            out.U1(static_cast<uint8_t>(x));
          } else {
            out.U1(oc::kSipush);
            out.U2(static_cast<uint16_t>(x));
          }
          return;
        }
        case K::kLong: out.U1(oc::kLconst0 + v.bits); return;
        case K::kFloat: out.U1(oc::kFconst0 + static_cast<int>(v.as_float())); return;
        case K::kDouble: out.U1(oc::kDconst0 + static_cast<int>(v.as_double())); return;
        default: break;
      }
    }
    uint16_t idx = ldc_index_.at(item.insn->id);
    bool wide = v.is_wide() || (v.kind == K::kDynamic && !v.descriptor.empty() &&
                                (v.descriptor[0] == 'J' || v.descriptor[0] == 'D'));
    if (wide) {
      out.U1(oc::kLdc2W);
      out.U2(idx);
    } else if (idx <= 255) {
      out.U1(oc::kLdc);
      out.U1(idx);
    } else {
      out.U1(oc::kLdcW);
      out.U2(idx);
    }
  }
  template <typename Rel>
  void Op(const Item&, const op::Return& o, Bytes& out, Rel&, bool) const {
    out.U1(o.type ? oc::kIreturn + TypeIndex(*o.type) : oc::kReturn);
  }
  template <typename Rel>
  void Op(const Item&, const op::Throw&, Bytes& out, Rel&, bool) const {
    out.U1(oc::kAthrow);
  }
  template <typename Rel>
  void Op(const Item&, const op::TypeCheck& o, Bytes& out, Rel&, bool) const {
    out.U1(o.op == TypeCheckOp::kCheckCast ? oc::kCheckcast : oc::kInstanceof);
    out.U2(pool_.Class(o.type.name));
  }
  template <typename Rel>
  void Op(const Item&, const op::Stack& o, Bytes& out, Rel&, bool) const {
    out.U1(oc::kPop + static_cast<int>(o.op));
  }
  template <typename Rel>
  void Op(const Item&, const op::Raw& o, Bytes& out, Rel&, bool) const {
    if (!oc::IsRaw(o.opcode)) Fail("bad raw opcode");
    out.U1(o.opcode);
  }

  // StackMapTable.

  void WriteVType(Bytes& out, const VType& v) const {
    using Tag = VType::Tag;
    switch (v.tag) {
      case Tag::kTop: out.U1(0); break;
      case Tag::kInteger: out.U1(1); break;
      case Tag::kFloat: out.U1(2); break;
      case Tag::kDouble: out.U1(3); break;
      case Tag::kLong: out.U1(4); break;
      case Tag::kNull: out.U1(5); break;
      case Tag::kUninitializedThis: out.U1(6); break;
      case Tag::kObject:
        out.U1(7);
        out.U2(pool_.Class(v.name));
        break;
      case Tag::kUninitialized:
        out.U1(8);
        out.U2(OffsetOf(v.site));
        break;
    }
  }

  uint16_t WriteFrames(const FrameAnalysis& frames, Bytes& out) {
    std::set<std::size_t> points;  // item positions needing a frame
    auto mark = [&](InstructionId id) { points.insert(position_.at(id)); };
    for (std::size_t i = 0; i < items_.size(); ++i) {
      const Item& item = items_[i];
      for (auto t : item.targets) mark(t);
      if (item.default_target != kNoInstruction) mark(item.default_target);
      if (EndsFlow(item) && i + 1 < items_.size()) points.insert(i + 1);
    }
    for (const auto& h : method_.exception_handlers) mark(h.handler);

    Frame initial = InitialFrame(clazz_, method_);
    std::vector<VType> prev_locals = CompactLocals(initial.locals);
    int64_t prev_offset = -1;
    uint16_t count = 0;
    for (std::size_t pos : points) {
      const Item& item = items_[pos];
      if (!item.insn) Fail("jump into synthetic code");
      auto it = frames.entry.find(item.insn->id);
      if (it == frames.entry.end()) {
        Fail("unreachable instruction at " +
             std::to_string(*method_.IndexOf(item.insn->id)));
      }
      std::vector<VType> locals = CompactLocals(it->second.locals);
      std::vector<VType> stack = CompactStack(it->second.stack);
      uint32_t delta = static_cast<uint32_t>(item.offset - prev_offset - 1);
      prev_offset = item.offset;
      ++count;
      bool same_locals = locals == prev_locals;
      if (same_locals && stack.empty()) {
        if (delta < 64) {
          out.U1(delta);
        } else {
          out.U1(251);
          out.U2(delta);
        }
      } else if (same_locals && stack.size() == 1) {
        if (delta < 64) {
          out.U1(64 + delta);
        } else {
          out.U1(247);
          out.U2(delta);
        }
        WriteVType(out, stack[0]);
      } else if (stack.empty() && locals.size() > prev_locals.size() &&
                 locals.size() - prev_locals.size() <= 3 &&
                 std::equal(prev_locals.begin(), prev_locals.end(),
                            locals.begin())) {
        std::size_t k = locals.size() - prev_locals.size();
        out.U1(251 + k);
        out.U2(delta);
        for (std::size_t i = prev_locals.size(); i < locals.size(); ++i) {
          WriteVType(out, locals[i]);
        }
      } else if (stack.empty() && locals.size() < prev_locals.size() &&
                 prev_locals.size() - locals.size() <= 3 &&
                 std::equal(locals.begin(), locals.end(),
                            prev_locals.begin())) {
        out.U1(251 - (prev_locals.size() - locals.size()));
        out.U2(delta);
      } else {
        out.U1(255);
        out.U2(delta);
        out.U2(static_cast<uint32_t>(locals.size()));
        for (const auto& v : locals) WriteVType(out, v);
        out.U2(static_cast<uint32_t>(stack.size()));
        for (const auto& v : stack) WriteVType(out, v);
      }
      prev_locals = std::move(locals);
    }
    return count;
  }

  const Clazz& clazz_;
  const Method& method_;
  const ClassHierarchy& hierarchy_;
  PoolBuilder& pool_;
  std::vector<Item> items_;
  std::map<InstructionId, std::size_t> position_;
  std::map<InstructionId, uint16_t> ldc_index_;
  uint32_t code_length_ = 0;
};

}  // namespace

std::vector<uint8_t> EmitClass(const Clazz& clazz,
                               const ClassHierarchy& hierarchy) {
  PoolBuilder pool;
  Bytes body;
  body.U2(clazz.access_flags);
  body.U2(pool.Class(clazz.name));
  body.U2(clazz.super_name.empty() ? 0 : pool.Class(clazz.super_name));
  body.U2(static_cast<uint32_t>(clazz.interfaces.size()));
  for (const auto& i : clazz.interfaces) body.U2(pool.Class(i));

  body.U2(static_cast<uint32_t>(clazz.fields.size()));
  for (const auto& f : clazz.fields) {
    body.U2(f.access_flags);
    body.U2(pool.Utf8(f.name));
    body.U2(pool.Utf8(f.descriptor));
    body.U2(static_cast<uint32_t>(f.attributes.size() +
                                  (f.constant_value ? 1 : 0)));
    if (f.constant_value) {
      body.U2(pool.Utf8("ConstantValue"));
      body.U4(2);
      body.U2(pool.Intern(*f.constant_value));
    }
    for (const auto& a : f.attributes) WriteOpaque(body, pool, a);
  }

  body.U2(static_cast<uint32_t>(clazz.methods.size()));
  for (const auto& m : clazz.methods) {
    body.U2(m.access_flags);
    body.U2(pool.Utf8(m.name));
    body.U2(pool.Utf8(m.descriptor));
    body.U2(static_cast<uint32_t>(m.attributes.size() + (m.has_code ? 1 : 0)));
    if (m.has_code) CodeWriter(clazz, m, hierarchy, pool).Write(body);
    for (const auto& a : m.attributes) WriteOpaque(body, pool, a);
  }

  body.U2(static_cast<uint32_t>(clazz.attributes.size()));
  for (const auto& a : clazz.attributes) WriteOpaque(body, pool, a);

  Bytes out;
  out.U4(0xCAFEBABE);
  out.U2(clazz.version.minor);
  out.U2(clazz.version.major);
  out.U2(pool.count());
  out.Append(pool.bytes());
  out.Append(body);
  return std::move(out.data());
}

std::vector<uint8_t> EmitClass(const Project& project, const Clazz& clazz) {
  return EmitClass(clazz, ClassHierarchy(project));
}

}  // namespace jmut
