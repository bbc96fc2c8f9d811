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
#include <fstream>
#include <set>
#include <unordered_map>

#include "jmut/classfile.h"
#include "jmut/errors.h"
#include "jmut/opcodes.h"

namespace jmut {

namespace {

[[noreturn]] void Malformed(const std::string& what) {
  throw MalformedClassFile(what);
}

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t U1() {
    Need(1);
    return data_[pos_++];
  }
  uint16_t U2() {
    Need(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  uint32_t U4() {
    Need(4);
    uint32_t v = static_cast<uint32_t>(data_[pos_]) << 24 |
                 static_cast<uint32_t>(data_[pos_ + 1]) << 16 |
                 static_cast<uint32_t>(data_[pos_ + 2]) << 8 | data_[pos_ + 3];
    pos_ += 4;
    return v;
  }
  int8_t S1() { return static_cast<int8_t>(U1()); }
  int16_t S2() { return static_cast<int16_t>(U2()); }
  int32_t S4() { return static_cast<int32_t>(U4()); }
  std::span<const uint8_t> Bytes(std::size_t n) {
    Need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  void Skip(std::size_t n) { Bytes(n); }
  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  bool done() const { return pos_ == data_.size(); }
  std::size_t size() const { return data_.size(); }

 private:
  void Need(std::size_t n) const {
    if (data_.size() - pos_ < n) Malformed("unexpected end of data");
  }
  std::span<const uint8_t> data_;
  std::size_t pos_ = 0;
};

enum PoolTag : uint8_t {
  kUtf8 = 1, kInteger = 3, kFloat = 4, kLong = 5, kDouble = 6, kClass = 7,
  kString = 8, kFieldref = 9, kMethodref = 10, kInterfaceMethodref = 11,
  kNameAndType = 12, kMethodHandle = 15, kMethodType = 16, kDynamic = 17,
  kInvokeDynamic = 18, kModule = 19, kPackage = 20,
};

class Pool {
 public:
  void Read(Reader& r) {
    uint16_t count = r.U2();
    if (count == 0) Malformed("constant pool count is zero");
    entries_.assign(count, {});
    for (uint16_t i = 1; i < count; ++i) {
      Entry& e = entries_[i];
      e.tag = r.U1();
      switch (e.tag) {
        case kUtf8: {
          uint16_t len = r.U2();
          auto b = r.Bytes(len);
          e.text.assign(b.begin(), b.end());
          break;
        }
        case kInteger:
          e.bits = static_cast<int32_t>(r.U4());
          break;
        case kFloat:
          e.bits = r.U4();
          break;
        case kLong:
        case kDouble: {
          uint64_t hi = r.U4();
          uint64_t lo = r.U4();
          e.bits = static_cast<int64_t>(hi << 32 | lo);
          if (++i >= count) Malformed("wide constant at end of pool");
          break;
        }
        case kClass: case kString: case kMethodType: case kModule:
        case kPackage:
          e.a = r.U2();
          break;
        case kFieldref: case kMethodref: case kInterfaceMethodref:
        case kNameAndType: case kDynamic: case kInvokeDynamic:
          e.a = r.U2();
          e.b = r.U2();
          break;
        case kMethodHandle:
          e.a = r.U1();
          e.b = r.U2();
          break;
        default:
          Malformed("unknown constant pool tag " + std::to_string(e.tag) +
                    " at index " + std::to_string(i));
      }
    }
    resolved_.assign(count, std::nullopt);
  }

  uint8_t TagAt(uint16_t idx) const {
    if (idx == 0 || idx >= entries_.size() || entries_[idx].tag == 0) {
      Malformed("bad constant pool index " + std::to_string(idx));
    }
    return entries_[idx].tag;
  }

  const std::string& Utf8(uint16_t idx) const {
    Expect(idx, kUtf8);
    return entries_[idx].text;
  }

  std::string ClassName(uint16_t idx) const {
    Expect(idx, kClass);
    return Utf8(static_cast<uint16_t>(entries_[idx].a));
  }

  const Constant& Get(uint16_t idx) { return Resolve(idx, 0); }

  const Constant& Get(uint16_t idx, std::initializer_list<uint8_t> tags) {
    uint8_t t = TagAt(idx);
    if (std::find(tags.begin(), tags.end(), t) == tags.end()) {
      Malformed("constant " + std::to_string(idx) + " has unexpected tag " +
                std::to_string(t));
    }
    return Get(idx);
  }

 private:
  struct Entry {
    uint8_t tag = 0;
    uint32_t a = 0;
    uint32_t b = 0;
    int64_t bits = 0;
    std::string text;
  };

  void Expect(uint16_t idx, uint8_t tag) const {
    if (TagAt(idx) != tag) {
      Malformed("constant " + std::to_string(idx) + " should have tag " +
                std::to_string(tag));
    }
  }

  void NameAndType(uint16_t idx, Constant& c) const {
    Expect(idx, kNameAndType);
    const Entry& nt = entries_[idx];
    c.name = Utf8(static_cast<uint16_t>(nt.a));
    c.descriptor = Utf8(static_cast<uint16_t>(nt.b));
  }

  const Constant& Resolve(uint16_t idx, int depth) {
    TagAt(idx);
    if (resolved_[idx]) return *resolved_[idx];
    if (depth > 4) Malformed("constant pool reference cycle");
    const Entry& e = entries_[idx];
    Constant c;
    switch (e.tag) {
      case kUtf8: c = Constant::Utf8(e.text); break;
      case kInteger: c = Constant::Integer(static_cast<int32_t>(e.bits)); break;
      case kFloat:
        c.kind = Constant::Kind::kFloat;
        c.bits = e.bits;
        break;
      case kLong: c = Constant::Long(e.bits); break;
      case kDouble:
        c.kind = Constant::Kind::kDouble;
        c.bits = e.bits;
        break;
      case kClass: c = Constant::Class(Utf8(static_cast<uint16_t>(e.a))); break;
      case kString:
        c = Constant::String(Utf8(static_cast<uint16_t>(e.a)));
        break;
      case kMethodType:
        c.kind = Constant::Kind::kMethodType;
        c.text = Utf8(static_cast<uint16_t>(e.a));
        break;
      case kModule:
        c.kind = Constant::Kind::kModule;
        c.text = Utf8(static_cast<uint16_t>(e.a));
        break;
      case kPackage:
        c.kind = Constant::Kind::kPackage;
        c.text = Utf8(static_cast<uint16_t>(e.a));
        break;
      case kFieldref: case kMethodref: case kInterfaceMethodref:
        c.kind = e.tag == kFieldref    ? Constant::Kind::kFieldRef
                 : e.tag == kMethodref ? Constant::Kind::kMethodRef
                                       : Constant::Kind::kInterfaceMethodRef;
        c.owner = ClassName(static_cast<uint16_t>(e.a));
        NameAndType(static_cast<uint16_t>(e.b), c);
        break;
      case kNameAndType:
        c.kind = Constant::Kind::kNameAndType;
        NameAndType(idx, c);
        break;
      case kDynamic: case kInvokeDynamic:
        c.kind = e.tag == kDynamic ? Constant::Kind::kDynamic
                                   : Constant::Kind::kInvokeDynamic;
        c.index = static_cast<uint16_t>(e.a);
        NameAndType(static_cast<uint16_t>(e.b), c);
        break;
      case kMethodHandle: {
        if (e.a < 1 || e.a > 9) Malformed("bad method handle kind");
        c.kind = Constant::Kind::kMethodHandle;
        c.index = static_cast<uint16_t>(e.a);
        uint8_t t = TagAt(static_cast<uint16_t>(e.b));
        if (t != kFieldref && t != kMethodref && t != kInterfaceMethodref) {
          Malformed("method handle must reference a member");
        }
        c.target.push_back(Resolve(static_cast<uint16_t>(e.b), depth + 1));
        break;
      }
    }
    resolved_[idx] = std::move(c);
    return *resolved_[idx];
  }

  std::vector<Entry> entries_;
  std::vector<std::optional<Constant>> resolved_;
};

// Walks the body of an attribute whose layout is known, collecting every
// u2 constant-pool index so it can be re-interned on emit.
class SlotWalker {
 public:
  SlotWalker(Pool& pool, std::span<const uint8_t> body,
             std::vector<OpaqueAttribute::Slot>& slots, std::size_t base)
      : pool_(pool), r_(body), slots_(slots), base_(base) {}

  // Returns false if the attribute's layout is not known.
  bool Walk(const std::string& name) {
    if (name == "SourceFile" || name == "Signature" || name == "NestHost" ||
        name == "ModuleMainClass") {
      Index(false);
    } else if (name == "Exceptions" || name == "NestMembers" ||
               name == "PermittedSubclasses" || name == "ModulePackages") {
      for (uint16_t n = r_.U2(); n > 0; --n) Index(false);
    } else if (name == "InnerClasses") {
      for (uint16_t n = r_.U2(); n > 0; --n) {
        Index(false);
        Index(true);
        Index(true);
        r_.U2();
      }
    } else if (name == "EnclosingMethod") {
      Index(false);
      Index(true);
    } else if (name == "Deprecated" || name == "Synthetic") {
    } else if (name == "RuntimeVisibleAnnotations" ||
               name == "RuntimeInvisibleAnnotations") {
      for (uint16_t n = r_.U2(); n > 0; --n) Annotation();
    } else if (name == "RuntimeVisibleParameterAnnotations" ||
               name == "RuntimeInvisibleParameterAnnotations") {
      for (uint8_t p = r_.U1(); p > 0; --p) {
        for (uint16_t n = r_.U2(); n > 0; --n) Annotation();
      }
    } else if (name == "AnnotationDefault") {
      ElementValue();
    } else if (name == "RuntimeVisibleTypeAnnotations" ||
               name == "RuntimeInvisibleTypeAnnotations") {
      for (uint16_t n = r_.U2(); n > 0; --n) TypeAnnotation();
    } else if (name == "MethodParameters") {
      for (uint8_t n = r_.U1(); n > 0; --n) {
        Index(true);
        r_.U2();
      }
    } else if (name == "BootstrapMethods") {
      for (uint16_t n = r_.U2(); n > 0; --n) {
        Index(false);
        for (uint16_t a = r_.U2(); a > 0; --a) Index(false);
      }
    } else if (name == "Record") {
      for (uint16_t n = r_.U2(); n > 0; --n) {
        Index(false);
        Index(false);
        for (uint16_t a = r_.U2(); a > 0; --a) NestedAttribute();
      }
    } else {
      return false;
    }
    if (!r_.done()) Malformed("trailing bytes in " + name + " attribute");
    return true;
  }

 private:
  void Index(bool optional) {
    std::size_t at = r_.pos();
    uint16_t idx = r_.U2();
    if (idx == 0) {
      if (!optional) Malformed("zero constant pool index");
      return;
    }
    slots_.push_back({static_cast<uint32_t>(base_ + at), pool_.Get(idx)});
  }

  void Annotation() {
    Index(false);
    for (uint16_t n = r_.U2(); n > 0; --n) {
      Index(false);
      ElementValue();
    }
  }

  void ElementValue() {
    uint8_t tag = r_.U1();
    switch (tag) {
      case 'B': case 'C': case 'D': case 'F': case 'I': case 'J': case 'S':
      case 'Z': case 's': case 'c':
        Index(false);
        break;
      case 'e':
        Index(false);
        Index(false);
        break;
      case '@':
        Annotation();
        break;
      case '[':
        for (uint16_t n = r_.U2(); n > 0; --n) ElementValue();
        break;
      default:
        Malformed("bad annotation element tag");
    }
  }

  void TypeAnnotation() {
    uint8_t target = r_.U1();
    switch (target) {
      case 0x00: case 0x01: case 0x16: r_.Skip(1); break;
      case 0x10: case 0x17: case 0x42: case 0x43: case 0x44: case 0x45:
      case 0x46:
        r_.Skip(2);
        break;
      case 0x11: case 0x12: r_.Skip(2); break;
      case 0x13: case 0x14: case 0x15: break;
      case 0x40: case 0x41: r_.Skip(6u * r_.U2()); break;
      case 0x47: case 0x48: case 0x49: case 0x4a: case 0x4b: r_.Skip(3); break;
      default: Malformed("bad type annotation target");
    }
    r_.Skip(2u * r_.U1());  // type_path
    Annotation();
  }

  void NestedAttribute() {
    std::size_t at = r_.pos();
    uint16_t name_idx = r_.U2();
    std::string name = pool_.Utf8(name_idx);
    slots_.push_back({static_cast<uint32_t>(base_ + at), pool_.Get(name_idx)});
    uint32_t len = r_.U4();
    std::size_t body_at = r_.pos();
    auto body = r_.Bytes(len);
    SlotWalker inner(pool_, body, slots_, base_ + body_at);
    inner.Walk(name);
  }

  Pool& pool_;
  Reader r_;
  std::vector<OpaqueAttribute::Slot>& slots_;
  std::size_t base_;
};

OpaqueAttribute ReadOpaque(Pool& pool, const std::string& name,
                           std::span<const uint8_t> body) {
  OpaqueAttribute attr;
  attr.name = name;
  attr.bytes.assign(body.begin(), body.end());
  std::vector<OpaqueAttribute::Slot> slots;
  SlotWalker walker(pool, body, slots, 0);
  if (walker.Walk(name)) {
    for (const auto& s : slots) {
      attr.bytes[s.offset] = 0;
      attr.bytes[s.offset + 1] = 0;
    }
    attr.slots = std::move(slots);
  }
  return attr;
}

constexpr ValueType kTypeOrder[] = {ValueType::kInt, ValueType::kLong,
                                    ValueType::kFloat, ValueType::kDouble,
                                    ValueType::kReference};

std::string ArrayOfClass(const std::string& name) {
  if (!name.empty() && name[0] == '[') return "[" + name;
  return "[L" + name + ";";
}

class CodeReader {
 public:
  CodeReader(Pool& pool, Method& method) : pool_(pool), method_(method) {}

  void Read(std::span<const uint8_t> attr) {
    Reader r(attr);
    r.U2();  // max_stack, recomputed on emit
    r.U2();  // max_locals
    method_.max_stack = 0;
    method_.max_locals = 0;
    uint32_t len = r.U4();
    if (len == 0 || len > 65535) Malformed("bad code length");
    code_length_ = len;
    Decode(r.Bytes(len));
    uint16_t handlers = r.U2();
    for (uint16_t i = 0; i < handlers; ++i) {
      uint16_t start = r.U2();
      uint16_t end = r.U2();
      uint16_t handler = r.U2();
      uint16_t type = r.U2();
      ExceptionHandler h;
      h.start = At(start);
      h.end = end == code_length_ ? kNoInstruction : At(end);
      if (start >= end) Malformed("empty exception handler range");
      h.handler = At(handler);
      if (type != 0) h.catch_type = pool_.ClassName(type);
      method_.exception_handlers.push_back(std::move(h));
    }
    for (uint16_t n = r.U2(); n > 0; --n) {
      std::string name = pool_.Utf8(r.U2());
      uint32_t alen = r.U4();
      auto body = r.Bytes(alen);
      if (name == "LineNumberTable") ReadLines(body);
      // StackMapTable is regenerated; local variable tables and other code
      // attributes describe offsets that mutation invalidates.
    }
    if (!r.done()) Malformed("trailing bytes in Code attribute");
    std::stable_sort(method_.line_table.begin(), method_.line_table.end(),
                     [](const LineEntry& a, const LineEntry& b) {
                       return a.instruction < b.instruction;
                     });
    BuildEdges();
  }

 private:
  struct Pending {
    std::vector<uint32_t> targets;  // conditional / case targets
    std::optional<uint32_t> jump;   // goto or default target
  };

  InstructionId At(uint32_t pc) const {
    auto it = by_pc_.find(pc);
    if (it == by_pc_.end()) {
      Malformed("offset " + std::to_string(pc) +
                " is not an instruction boundary");
    }
    return it->second;
  }

  void Add(uint32_t pc, Operation op) {
    Instruction insn;
    insn.id = static_cast<InstructionId>(method_.instructions.size());
    insn.op = std::move(op);
    insn.offset = pc;
    by_pc_[pc] = insn.id;
    method_.instructions.push_back(std::move(insn));
    pending_.emplace_back();
  }

  uint32_t Target(uint32_t pc, int64_t delta) const {
    int64_t t = static_cast<int64_t>(pc) + delta;
    if (t < 0 || t >= code_length_) Malformed("jump outside code");
    return static_cast<uint32_t>(t);
  }

  void Decode(std::span<const uint8_t> code) {
    namespace oc = opcodes;
    Reader r(code);
    while (!r.done()) {
      uint32_t pc = static_cast<uint32_t>(r.pos());
      uint8_t c = r.U1();
      if (c == oc::kAconstNull) {
        Add(pc, op::Push{Constant::Null()});
      } else if (c >= oc::kIconstM1 && c <= oc::kIconst5) {
        Add(pc, op::Push{Constant::Integer(c - oc::kIconst0)});
      } else if (c == oc::kLconst0 || c == oc::kLconst1) {
        Add(pc, op::Push{Constant::Long(c - oc::kLconst0)});
      } else if (c >= oc::kFconst0 && c <= oc::kFconst2) {
        Add(pc, op::Push{Constant::Float(static_cast<float>(c - oc::kFconst0))});
      } else if (c == oc::kDconst0 || c == oc::kDconst1) {
        Add(pc, op::Push{Constant::Double(c - oc::kDconst0)});
      } else if (c == oc::kBipush) {
        Add(pc, op::Push{Constant::Integer(r.S1())});
      } else if (c == oc::kSipush) {
        Add(pc, op::Push{Constant::Integer(r.S2())});
      } else if (c == oc::kLdc || c == oc::kLdcW || c == oc::kLdc2W) {
        uint16_t idx = c == oc::kLdc ? r.U1() : r.U2();
        const Constant& k =
            c == oc::kLdc2W
                ? pool_.Get(idx, {kLong, kDouble, kDynamic})
                : pool_.Get(idx, {kInteger, kFloat, kString, kClass,
                                  kMethodHandle, kMethodType, kDynamic});
        Add(pc, op::Push{k});
      } else if (c >= oc::kIload && c <= oc::kAload) {
        Add(pc, op::Load{kTypeOrder[c - oc::kIload], r.U1()});
      } else if (c >= oc::kIload0 && c <= oc::kAload3) {
        int k = c - oc::kIload0;
        Add(pc, op::Load{kTypeOrder[k / 4], static_cast<uint16_t>(k % 4)});
      } else if (c >= oc::kIstore && c <= oc::kAstore) {
        Add(pc, op::Store{kTypeOrder[c - oc::kIstore], r.U1()});
      } else if (c >= oc::kIstore0 && c <= oc::kAstore3) {
        int k = c - oc::kIstore0;
        Add(pc, op::Store{kTypeOrder[k / 4], static_cast<uint16_t>(k % 4)});
      } else if (c >= oc::kPop && c <= oc::kSwap) {
        Add(pc, op::Stack{static_cast<StackOpKind>(c - oc::kPop)});
      } else if (c >= oc::kIadd && c <= 0x73) {
        int k = c - oc::kIadd;
        Add(pc, op::Arithmetic{kTypeOrder[k % 4],
                               static_cast<ArithmeticOp>(k / 4)});
      } else if (c >= 0x74 && c <= 0x77) {
        Add(pc, op::Arithmetic{kTypeOrder[c - 0x74], ArithmeticOp::kNeg});
      } else if (c >= 0x78 && c <= oc::kLxor) {
        int k = c - 0x78;
        static constexpr ArithmeticOp kOps[] = {
            ArithmeticOp::kShl, ArithmeticOp::kShr, ArithmeticOp::kUshr,
            ArithmeticOp::kAnd, ArithmeticOp::kOr, ArithmeticOp::kXor};
        Add(pc, op::Arithmetic{k % 2 ? ValueType::kLong : ValueType::kInt,
                               kOps[k / 2]});
      } else if (c == oc::kIinc) {
        uint8_t slot = r.U1();
        Add(pc, op::Increment{slot, r.S1()});
      } else if (c >= oc::kIfeq && c <= oc::kIfAcmpne) {
        int k = c - oc::kIfeq;
        BranchOperands operands = k < 6    ? BranchOperands::kIntZero
                                  : k < 12 ? BranchOperands::kIntInt
                                           : BranchOperands::kRefRef;
        Add(pc, op::Branch{operands, static_cast<Relation>(k % 6)});
        pending_.back().targets.push_back(Target(pc, r.S2()));
      } else if (c == oc::kIfnull || c == oc::kIfnonnull) {
        Add(pc, op::Branch{BranchOperands::kRefNull,
                           c == oc::kIfnull ? Relation::kEq : Relation::kNe});
        pending_.back().targets.push_back(Target(pc, r.S2()));
      } else if (c == oc::kGoto || c == oc::kGotoW) {
        Add(pc, op::Goto{});
        pending_.back().jump = Target(pc, c == oc::kGoto ? r.S2() : r.S4());
      } else if (c == oc::kJsr || c == oc::kJsrW || c == oc::kRet) {
        Malformed("jsr/ret subroutines are not supported");
      } else if (c == oc::kTableswitch || c == oc::kLookupswitch) {
        while (r.pos() % 4 != 0) r.U1();
        int32_t def = r.S4();
        op::Switch sw;
        std::vector<uint32_t> targets;
        if (c == oc::kTableswitch) {
          sw.table = true;
          int32_t low = r.S4();
          int32_t high = r.S4();
          if (high < low || int64_t{high} - low > 65535) {
            Malformed("bad tableswitch bounds");
          }
          for (int64_t k = low; k <= high; ++k) {
            sw.keys.push_back(static_cast<int32_t>(k));
            targets.push_back(Target(pc, r.S4()));
          }
        } else {
          sw.table = false;
          int32_t n = r.S4();
          if (n < 0 || n > 65535) Malformed("bad lookupswitch size");
          for (int32_t k = 0; k < n; ++k) {
            int32_t key = r.S4();
            if (!sw.keys.empty() && key <= sw.keys.back()) {
              Malformed("lookupswitch keys not sorted");
            }
            sw.keys.push_back(key);
            targets.push_back(Target(pc, r.S4()));
          }
        }
        Add(pc, std::move(sw));
        pending_.back().targets = std::move(targets);
        pending_.back().jump = Target(pc, def);
      } else if (c >= oc::kIreturn && c <= oc::kAreturn) {
        Add(pc, op::Return{kTypeOrder[c - oc::kIreturn]});
      } else if (c == oc::kReturn) {
        Add(pc, op::Return{std::nullopt});
      } else if (c >= oc::kGetstatic && c <= oc::kPutfield) {
        const Constant& k = pool_.Get(r.U2(), {kFieldref});
        static constexpr FieldOp kOps[] = {FieldOp::kGetStatic,
                                           FieldOp::kPutStatic,
                                           FieldOp::kGetField,
                                           FieldOp::kPutField};
        Add(pc, op::FieldAccess{kOps[c - oc::kGetstatic],
                                {k.owner, k.name, k.descriptor}});
      } else if (c >= oc::kInvokevirtual && c <= oc::kInvokeinterface) {
        uint16_t idx = r.U2();
        InvokeKind kind;
        const Constant* k;
        if (c == oc::kInvokeinterface) {
          kind = InvokeKind::kInterface;
          k = &pool_.Get(idx, {kInterfaceMethodref});
          r.U1();
          if (r.U1() != 0) Malformed("invokeinterface padding");
        } else {
          kind = c == oc::kInvokevirtual   ? InvokeKind::kVirtual
                 : c == oc::kInvokespecial ? InvokeKind::kSpecial
                                           : InvokeKind::kStatic;
          k = &pool_.Get(idx, c == oc::kInvokevirtual
                                  ? std::initializer_list<uint8_t>{kMethodref}
                                  : std::initializer_list<uint8_t>{
                                        kMethodref, kInterfaceMethodref});
        }
        Add(pc, op::Invoke{kind,
                           {k->owner, k->name, k->descriptor,
                            k->kind == Constant::Kind::kInterfaceMethodRef}});
      } else if (c == oc::kInvokedynamic) {
        const Constant& k = pool_.Get(r.U2(), {kInvokeDynamic});
        if (r.U2() != 0) Malformed("invokedynamic padding");
        Add(pc, op::InvokeDynamic{k});
      } else if (c == oc::kNew) {
        Add(pc, op::New{{pool_.ClassName(r.U2())}});
      } else if (c == oc::kNewarray) {
        static constexpr const char* kArrays[] = {"[Z", "[C", "[F", "[D",
                                                  "[B", "[S", "[I", "[J"};
        uint8_t t = r.U1();
        if (t < 4 || t > 11) Malformed("bad newarray type");
        Add(pc, op::NewArray{{kArrays[t - 4]}, 1, false});
      } else if (c == oc::kAnewarray) {
        Add(pc, op::NewArray{{ArrayOfClass(pool_.ClassName(r.U2()))}, 1,
                             false});
      } else if (c == oc::kMultianewarray) {
        std::string type = pool_.ClassName(r.U2());
        uint8_t dims = r.U1();
        if (dims == 0 || type.empty() || type[0] != '[') {
          Malformed("bad multianewarray");
        }
        Add(pc, op::NewArray{{type}, dims, true});
      } else if (c == oc::kAthrow) {
        Add(pc, op::Throw{});
      } else if (c == oc::kCheckcast || c == oc::kInstanceof) {
        Add(pc, op::TypeCheck{c == oc::kCheckcast ? TypeCheckOp::kCheckCast
                                                  : TypeCheckOp::kInstanceOf,
                              {pool_.ClassName(r.U2())}});
      } else if (c == oc::kWide) {
        uint8_t w = r.U1();
        if (w == oc::kIinc) {
          uint16_t slot = r.U2();
          Add(pc, op::Increment{slot, r.S2()});
        } else if (w >= oc::kIload && w <= oc::kAload) {
          Add(pc, op::Load{kTypeOrder[w - oc::kIload], r.U2()});
        } else if (w >= oc::kIstore && w <= oc::kAstore) {
          Add(pc, op::Store{kTypeOrder[w - oc::kIstore], r.U2()});
        } else {
          Malformed("bad wide opcode");
        }
      } else if (oc::IsRaw(c)) {
        Add(pc, op::Raw{c});
      } else {
        Malformed("invalid opcode " + std::to_string(c) + " at " +
                  std::to_string(pc));
      }
    }
  }

  void BuildEdges() {
    auto& insns = method_.instructions;
    for (std::size_t i = 0; i < insns.size(); ++i) {
      const Instruction& insn = insns[i];
      const Pending& p = pending_[i];
      InstructionId next =
          i + 1 < insns.size() ? insns[i + 1].id : kNoInstruction;
      auto add = [&](EdgeKind kind, InstructionId end) {
        method_.edges.push_back({kind, insn.id, end});
      };
      switch (insn.kind()) {
        case InstructionKind::kBranch:
          add(EdgeKind::kConditional, At(p.targets[0]));
          if (next == kNoInstruction) Malformed("code falls off the end");
          add(EdgeKind::kUnconditional, next);
          break;
        case InstructionKind::kGoto:
          add(EdgeKind::kUnconditional, At(*p.jump));
          break;
        case InstructionKind::kSwitch:
          for (uint32_t t : p.targets) add(EdgeKind::kConditional, At(t));
          add(EdgeKind::kUnconditional, At(*p.jump));
          break;
        case InstructionKind::kReturn:
        case InstructionKind::kThrow:
          break;
        default:
          if (next == kNoInstruction) Malformed("code falls off the end");
          add(EdgeKind::kUnconditional, next);
      }
    }
    method_.RebuildExceptionalEdges();
  }

  void ReadLines(std::span<const uint8_t> body) {
    Reader r(body);
    for (uint16_t n = r.U2(); n > 0; --n) {
      uint16_t pc = r.U2();
      uint16_t line = r.U2();
      method_.line_table.push_back({At(pc), line});
    }
  }

  Pool& pool_;
  Method& method_;
  uint32_t code_length_ = 0;
  std::unordered_map<uint32_t, InstructionId> by_pc_;
  std::vector<Pending> pending_;
};

Field ReadField(Reader& r, Pool& pool) {
  Field f;
  f.access_flags = r.U2();
  f.name = pool.Utf8(r.U2());
  f.descriptor = pool.Utf8(r.U2());
  for (uint16_t n = r.U2(); n > 0; --n) {
    std::string name = pool.Utf8(r.U2());
    auto body = r.Bytes(r.U4());
    if (name == "ConstantValue") {
      if (body.size() != 2) Malformed("bad ConstantValue attribute");
      uint16_t idx = static_cast<uint16_t>(body[0] << 8 | body[1]);
      f.constant_value =
          pool.Get(idx, {kInteger, kFloat, kLong, kDouble, kString});
    } else {
      f.attributes.push_back(ReadOpaque(pool, name, body));
    }
  }
  return f;
}

Method ReadMethod(Reader& r, Pool& pool) {
  Method m;
  m.access_flags = r.U2();
  m.name = pool.Utf8(r.U2());
  m.descriptor = pool.Utf8(r.U2());
  for (uint16_t n = r.U2(); n > 0; --n) {
    std::string name = pool.Utf8(r.U2());
    auto body = r.Bytes(r.U4());
    if (name == "Code") {
      if (m.has_code) Malformed("duplicate Code attribute");
      m.has_code = true;
      CodeReader(pool, m).Read(body);
    } else {
      m.attributes.push_back(ReadOpaque(pool, name, body));
    }
  }
  return m;
}

}  // namespace

Clazz ParseClass(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  if (bytes.size() < 10 || r.U4() != 0xCAFEBABE) {
    Malformed("bad magic number");
  }
  Clazz c;
  c.version.minor = r.U2();
  c.version.major = r.U2();
  if (c.version.major > kMaxMajorVersion) {
    throw UnsupportedVersion("class file major version " +
                             std::to_string(c.version.major) +
                             " is newer than " +
                             std::to_string(kMaxMajorVersion));
  }
  if (c.version.major < 45) Malformed("class file version too old");
  Pool pool;
  pool.Read(r);
  c.access_flags = r.U2();
  if (c.access_flags & access::kModule) {
    Malformed("module-info classes are not supported");
  }
  c.name = pool.ClassName(r.U2());
  uint16_t super_idx = r.U2();
  if (super_idx != 0) {
    c.super_name = pool.ClassName(super_idx);
  } else if (c.name != "java/lang/Object") {
    Malformed("class without superclass");
  }
  for (uint16_t n = r.U2(); n > 0; --n) {
    c.interfaces.push_back(pool.ClassName(r.U2()));
  }
  for (uint16_t n = r.U2(); n > 0; --n) c.fields.push_back(ReadField(r, pool));
  for (uint16_t n = r.U2(); n > 0; --n) {
    c.methods.push_back(ReadMethod(r, pool));
  }
  for (uint16_t n = r.U2(); n > 0; --n) {
    std::string name = pool.Utf8(r.U2());
    auto body = r.Bytes(r.U4());
    c.attributes.push_back(ReadOpaque(pool, name, body));
  }
  if (!r.done()) Malformed("trailing bytes after class file");
  return c;
}

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const uint8_t> bytes) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

Project ParseProject(const std::vector<std::filesystem::path>& paths) {
  Project p;
  for (const auto& path : paths) {
    Clazz c;
    try {
      auto bytes = ReadFileBytes(path);
      c = ParseClass(bytes);
    } catch (const UnsupportedVersion& e) {
      throw UnsupportedVersion(path.string() + ": " + e.what());
    } catch (const MalformedClassFile& e) {
      throw MalformedClassFile(path.string() + ": " + e.what());
    }
    if (p.FindClass(c.name)) {
      throw DuplicateClassName(path.string() + ": class " + c.name +
                               " already defined by " + p.origin[c.name]);
    }
    p.origin[c.name] = path.string();
    p.classes.push_back(std::move(c));
  }
  return p;
}

std::vector<std::filesystem::path> ListClassFiles(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("not a directory: " + dir.string());
  }
  for (auto it = std::filesystem::recursive_directory_iterator(dir, ec);
       it != std::filesystem::recursive_directory_iterator();
       it.increment(ec)) {
    if (ec) throw IoError("cannot list " + dir.string());
    if (it->is_regular_file() && it->path().extension() == ".class") {
      out.push_back(it->path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Project ParseProjectDir(const std::filesystem::path& dir) {
  return ParseProject(ListClassFiles(dir));
}

const Clazz* ResolveSuper(const Project& project, const Clazz& clazz) {
  if (clazz.super_name.empty()) return nullptr;
  return project.FindClass(clazz.super_name);
}

std::optional<uint16_t> LineOf(const Method& method, InstructionId id) {
  auto idx = method.IndexOf(id);
  if (!idx) {
    throw ForeignInstruction("instruction " + std::to_string(id) +
                             " is not part of " + method.name +
                             method.descriptor);
  }
  std::optional<uint16_t> best;
  std::size_t best_idx = 0;
  for (const auto& e : method.line_table) {
    auto at = method.IndexOf(e.instruction);
    if (!at || *at > *idx) continue;
    if (!best || *at >= best_idx) {
      best = e.line;
      best_idx = *at;
    }
  }
  return best;
}

}  // namespace jmut
