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

#include "vm.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "jmut/descriptor.h"
#include "jmut/opcodes.h"

namespace minijvm {

using jmut::Clazz;
using jmut::Constant;
using jmut::Instruction;
using jmut::InstructionId;
using jmut::Method;
namespace op = jmut::op;
namespace opc = jmut::opcodes;

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr int kMaxDepth = 1200;
const std::string kMessage = "java/lang/Throwable.message";

Val DefaultOf(std::string_view desc) {
  switch (desc.empty() ? 'V' : desc[0]) {
    case 'J':
      return Val::Long(0);
    case 'F':
      return Val::Float(0);
    case 'D':
      return Val::Double(0);
    case 'L':
    case '[':
      return Val::Null();
    default:
      return Val::Int(0);
  }
}

int32_t Wrap(int64_t v) {
  return static_cast<int32_t>(static_cast<uint32_t>(v));
}

template <typename T>
bool Compare(jmut::Relation r, T a, T b) {
  switch (r) {
    case jmut::Relation::kEq:
      return a == b;
    case jmut::Relation::kNe:
      return a != b;
    case jmut::Relation::kLt:
      return a < b;
    case jmut::Relation::kGe:
      return a >= b;
    case jmut::Relation::kGt:
      return a > b;
    case jmut::Relation::kLe:
      return a <= b;
  }
  return false;
}

bool IsThrowable(const std::string& cls) {
  return cls.size() > 5 &&
         (cls.ends_with("Exception") || cls.ends_with("Error") ||
          cls == "java/lang/Throwable");
}

std::string Dotted(std::string s) {
  std::replace(s.begin(), s.end(), '/', '.');
  return s;
}

std::string FormatDouble(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  if (d == std::floor(d) && std::fabs(d) < 1e7) {
    std::ostringstream s;
    s << static_cast<int64_t>(d) << ".0";
    return s.str();
  }
  std::ostringstream s;
  s.precision(17);
  s << d;
  return s.str();
}

// Interfaces of the JDK classes the interpreter implements.
const std::map<std::string, std::vector<std::string>>& JdkInterfaces() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"java/util/ArrayList",
       {"java/util/List", "java/util/Collection", "java/lang/Iterable"}},
      {"java/util/LinkedList",
       {"java/util/List", "java/util/Collection", "java/lang/Iterable"}},
      {"java/util/HashMap", {"java/util/Map"}},
      {"java/lang/String", {"java/lang/CharSequence", "java/lang/Comparable"}},
      {"java/lang/StringBuilder", {"java/lang/CharSequence"}},
      {"java/lang/Integer", {"java/lang/Comparable"}},
  };
  return m;
}

}  // namespace

struct Vm::Code {
  struct Handler {
    std::size_t start, end, target;
    std::string type;
  };
  std::vector<std::size_t> next;
  std::vector<std::vector<std::size_t>> cond;
  std::vector<Handler> handlers;
};

Vm::Vm(jmut::Project program, std::ostream& out)
    : program_(std::move(program)), hierarchy_(program_), out_(out) {
  for (const auto& c : program_.classes) classes_.emplace(c.name, &c);
  system_out_ = Make(Object::Kind::kPrintStream, "java/io/PrintStream");
}

const Clazz* Vm::FindClass(const std::string& name) const {
  auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : it->second;
}

std::pair<const Clazz*, const Method*> Vm::FindMethod(
    const std::string& cls, const std::string& name,
    const std::string& desc) const {
  std::vector<std::string> work{cls};
  std::set<std::string> seen;
  // Superclasses first, then interfaces (default methods).
  for (const Clazz* c = FindClass(cls); c; c = FindClass(c->super_name)) {
    if (!seen.insert(c->name).second) break;
    if (const Method* m = c->FindMethod(name, desc)) {
      if (m->has_code || (m->access_flags & jmut::access::kAbstract) == 0) {
        return {c, m};
      }
    }
    for (const auto& i : c->interfaces) work.push_back(i);
  }
  while (!work.empty()) {
    std::string n = work.back();
    work.pop_back();
    const Clazz* c = FindClass(n);
    if (!c) continue;
    if (const Method* m = c->FindMethod(name, desc); m && m->has_code) {
      return {c, m};
    }
    for (const auto& i : c->interfaces) work.push_back(i);
  }
  return {nullptr, nullptr};
}

Ref Vm::Make(Object::Kind kind, std::string cls) {
  auto r = std::make_shared<Object>();
  r->kind = kind;
  r->cls = std::move(cls);
  r->serial = next_serial_++;
  return r;
}

Ref Vm::Str(const std::string& text) {
  Ref r = Make(Object::Kind::kString, "java/lang/String");
  r->text = text;
  return r;
}

Ref Vm::Intern(const std::string& text) {
  auto it = interned_.find(text);
  if (it != interned_.end()) return it->second;
  Ref r = Str(text);
  interned_.emplace(text, r);
  return r;
}

void Vm::Throw(const std::string& cls, const std::string& message) {
  Ref e = Make(Object::Kind::kInstance, cls);
  e->fields[kMessage] = message.empty() ? Val::Null() : Val::Of(Str(message));
  throw Thrown{e};
}

void Vm::EnsureInit(const std::string& name) {
  const Clazz* c = FindClass(name);
  if (!c || !initialized_.insert(name).second) return;
  EnsureInit(c->super_name);
  auto& statics = statics_[name];
  for (const auto& f : c->fields) {
    if (!f.is_static()) continue;
    Val v = DefaultOf(f.descriptor);
    if (f.constant_value) {
      const Constant& k = *f.constant_value;
      switch (k.kind) {
        case Constant::Kind::kInteger:
          v = Val::Int(static_cast<int32_t>(k.bits));
          break;
        case Constant::Kind::kLong:
          v = Val::Long(k.bits);
          break;
        case Constant::Kind::kFloat:
          v = Val::Float(std::bit_cast<float>(static_cast<uint32_t>(k.bits)));
          break;
        case Constant::Kind::kDouble:
          v = Val::Double(std::bit_cast<double>(k.bits));
          break;
        case Constant::Kind::kString:
          v = Val::Of(Intern(k.text));
          break;
        default:
          break;
      }
    }
    statics[f.name] = v;
  }
  if (const Method* clinit = c->FindMethod("<clinit>", "()V")) {
    Invoke(*c, *clinit, {});
  }
}

Val& Vm::Static(const std::string& owner, const std::string& name,
                const std::string& desc) {
  for (const Clazz* c = FindClass(owner); c; c = FindClass(c->super_name)) {
    const jmut::Field* f = c->FindField(name, desc);
    if (f && f->is_static()) {
      EnsureInit(c->name);
      return statics_[c->name][name];
    }
    for (const auto& i : c->interfaces) {
      if (const Clazz* ic = FindClass(i)) {
        if (ic->FindField(name, desc)) return Static(i, name, desc);
      }
    }
  }
  if (FindClass(owner)) Throw("java/lang/NoSuchFieldError", owner + "." + name);
  throw Unsupported("static field " + owner + "." + name);
}

Ref Vm::New(const std::string& cls) {
  if (const Clazz* c = FindClass(cls)) {
    EnsureInit(cls);
    if (c->is_interface() || (c->access_flags & jmut::access::kAbstract)) {
      Throw("java/lang/InstantiationError", cls);
    }
    Ref r = Make(Object::Kind::kInstance, cls);
    std::set<std::string> seen;
    for (const Clazz* k = c; k && seen.insert(k->name).second;
         k = FindClass(k->super_name)) {
      for (const auto& f : k->fields) {
        if (!f.is_static())
          r->fields[k->name + "." + f.name] = DefaultOf(f.descriptor);
      }
    }
    return r;
  }
  if (cls == "java/util/ArrayList" || cls == "java/util/LinkedList") {
    return Make(Object::Kind::kList, cls);
  }
  if (cls == "java/util/HashMap") return Make(Object::Kind::kMap, cls);
  if (cls == "java/lang/StringBuilder")
    return Make(Object::Kind::kBuilder, cls);
  if (cls == "java/lang/Object" || IsThrowable(cls)) {
    return Make(Object::Kind::kInstance, cls);
  }
  throw Unsupported("new " + cls);
}

std::string Vm::RuntimeClass(const Ref& r) const { return r->cls; }

bool Vm::InstanceOf(const Ref& r, const std::string& type) const {
  if (type == "java/lang/Object") return true;
  std::string rt = RuntimeClass(r);
  if (rt.starts_with("[") || type.starts_with("[")) return rt == type;
  std::vector<std::string> work{rt};
  std::set<std::string> seen;
  while (!work.empty()) {
    std::string n = work.back();
    work.pop_back();
    if (n.empty() || !seen.insert(n).second) continue;
    if (n == type) return true;
    if (const Clazz* c = FindClass(n)) {
      work.push_back(c->super_name);
      for (const auto& i : c->interfaces) work.push_back(i);
      continue;
    }
    if (auto up = hierarchy_.SuperOf(n)) work.push_back(*up);
    auto it = JdkInterfaces().find(n);
    if (it != JdkInterfaces().end()) {
      for (const auto& i : it->second) work.push_back(i);
    }
  }
  return false;
}

bool Vm::JavaEquals(const Val& a, const Val& b) {
  if (!a.r) return !b.r;
  op::Invoke inv{
      jmut::InvokeKind::kVirtual,
      {"java/lang/Object", "equals", "(Ljava/lang/Object;)Z", false}};
  return CallInvoke(inv, {a, b}).i != 0;
}

std::string Vm::ToJavaString(const Val& v) {
  switch (v.tag) {
    case Val::Tag::kInt:
    case Val::Tag::kLong:
      return std::to_string(v.i);
    case Val::Tag::kFloat:
    case Val::Tag::kDouble:
      return FormatDouble(v.d);
    case Val::Tag::kVoid:
      return "";
    case Val::Tag::kRef:
      break;
  }
  if (!v.r) return "null";
  if (v.r->kind == Object::Kind::kString) return v.r->text;
  op::Invoke inv{
      jmut::InvokeKind::kVirtual,
      {"java/lang/Object", "toString", "()Ljava/lang/String;", false}};
  Val s = CallInvoke(inv, {v});
  return s.r ? s.r->text : "null";
}

std::string Vm::Describe(const Ref& e) const {
  std::string out = Dotted(e->cls);
  auto it = e->fields.find(kMessage);
  if (it != e->fields.end() && it->second.r) out += ": " + it->second.r->text;
  return out;
}

void Vm::RunTest(const std::string& cls, const std::string& name) {
  EnsureInit(cls);
  Ref self = New(cls);
  op::Invoke ctor{jmut::InvokeKind::kSpecial, {cls, "<init>", "()V", false}};
  CallInvoke(ctor, {Val::Of(self)});
  op::Invoke test{jmut::InvokeKind::kVirtual, {cls, name, "()V", false}};
  CallInvoke(test, {Val::Of(self)});
}

Val Vm::Invoke(const Clazz& cls, const Method& m, std::vector<Val> args) {
  if (!m.has_code) {
    if (m.access_flags & jmut::access::kAbstract) {
      Throw("java/lang/AbstractMethodError", cls.name + "." + m.name);
    }
    throw Unsupported("native method " + cls.name + "." + m.name);
  }
  // Arguments become locals; wide values take two slots.
  std::vector<Val> locals;
  for (auto& a : args) {
    bool wide = a.wide();
    locals.push_back(std::move(a));
    if (wide) locals.push_back(Val{});
  }
  if (locals.size() < m.max_locals) locals.resize(m.max_locals);
  if (depth_ >= kMaxDepth) Throw("java/lang/StackOverflowError", "");
  ++depth_;
  struct Leave {
    int& d;
    ~Leave() { --d; }
  } leave{depth_};
  return Execute(cls, m, std::move(locals));
}

const Vm::Code& Vm::CodeOf(const Method& m) {
  auto it = code_.find(&m);
  if (it != code_.end()) return *it->second;
  auto code = std::make_shared<Code>();
  std::map<InstructionId, std::size_t> index;
  for (std::size_t i = 0; i < m.instructions.size(); ++i) {
    index[m.instructions[i].id] = i;
  }
  code->next.assign(m.instructions.size(), kNone);
  code->cond.resize(m.instructions.size());
  for (const auto& e : m.edges) {
    auto s = index.find(e.start);
    auto t = index.find(e.end);
    if (s == index.end() || t == index.end()) continue;
    if (e.kind == jmut::EdgeKind::kUnconditional)
      code->next[s->second] = t->second;
    if (e.kind == jmut::EdgeKind::kConditional)
      code->cond[s->second].push_back(t->second);
  }
  for (const auto& h : m.exception_handlers) {
    Code::Handler hh;
    hh.start = index.at(h.start);
    hh.end =
        h.end == jmut::kNoInstruction ? m.instructions.size() : index.at(h.end);
    hh.target = index.at(h.handler);
    hh.type = h.catch_type;
    code->handlers.push_back(hh);
  }
  code_.emplace(&m, code);
  return *code;
}

Val Vm::CallInvoke(const op::Invoke& inv, std::vector<Val> args) {
  const auto& ref = inv.ref;
  if (inv.kind == jmut::InvokeKind::kStatic) {
    EnsureInit(ref.owner);
    auto [c, m] = FindMethod(ref.owner, ref.name, ref.descriptor);
    if (m) return Invoke(*c, *m, std::move(args));
    if (FindClass(ref.owner)) {
      Throw("java/lang/NoSuchMethodError", ref.owner + "." + ref.name);
    }
    return Native(ref.owner, ref.name, ref.descriptor, args, true);
  }
  if (!args[0].r) Throw("java/lang/NullPointerException", "");
  if (inv.kind == jmut::InvokeKind::kSpecial) {
    if (ref.name == "<init>") {
      if (const Clazz* c = FindClass(ref.owner)) {
        const Method* m = c->FindMethod(ref.name, ref.descriptor);
        if (!m) Throw("java/lang/NoSuchMethodError", ref.owner + ".<init>");
        return Invoke(*c, *m, std::move(args));
      }
      return Native(ref.owner, ref.name, ref.descriptor, args, false);
    }
    auto [c, m] = FindMethod(ref.owner, ref.name, ref.descriptor);
    if (m) return Invoke(*c, *m, std::move(args));
    return NativeVirtual(args[0].r, ref.name, ref.descriptor, args);
  }
  Ref self = args[0].r;
  if (self->kind == Object::Kind::kInstance) {
    auto [c, m] = FindMethod(self->cls, ref.name, ref.descriptor);
    if (m) {
      if (m->is_static())
        Throw("java/lang/IncompatibleClassChangeError", ref.name);
      return Invoke(*c, *m, std::move(args));
    }
  }
  return NativeVirtual(self, ref.name, ref.descriptor, args);
}

Val Vm::Native(const std::string& owner, const std::string& name,
               const std::string& desc, std::vector<Val>& args,
               bool is_static) {
  if (!is_static) {
    // Constructors of JDK classes.
    Ref self = args[0].r;
    if (IsThrowable(owner)) {
      if (desc == "()V") return Val{};
      if (desc == "(Ljava/lang/String;)V") {
        self->fields[kMessage] = args[1];
        return Val{};
      }
      if (desc == "(Ljava/lang/Object;)V") {
        self->fields[kMessage] = Val::Of(Str(ToJavaString(args[1])));
        return Val{};
      }
    }
    if (owner == "java/lang/Object" && desc == "()V") return Val{};
    if ((owner == "java/util/ArrayList" || owner == "java/util/LinkedList" ||
         owner == "java/util/HashMap") &&
        (desc == "()V" || desc == "(I)V")) {
      return Val{};
    }
    if (owner == "java/lang/StringBuilder") {
      if (desc == "()V") return Val{};
      if (desc == "(Ljava/lang/String;)V") {
        self->text = ToJavaString(args[1]);
        return Val{};
      }
    }
    throw Unsupported("constructor " + owner + desc);
  }
  auto sig = owner + "." + name + desc;
  if (owner == "java/lang/Math") {
    if (desc == "(II)I" || desc == "(JJ)J") {
      int64_t a = args[0].i, b = args[1].i;
      int64_t r = name == "max"   ? std::max(a, b)
                  : name == "min" ? std::min(a, b)
                                  : 0;
      if (name == "max" || name == "min") {
        return desc == "(II)I" ? Val::Int(static_cast<int32_t>(r))
                               : Val::Long(r);
      }
    }
    if (name == "abs" && desc == "(I)I")
      return Val::Int(Wrap(std::llabs(args[0].i)));
    if (name == "abs" && desc == "(J)J")
      return Val::Long(std::llabs(args[0].i));
    if (desc == "(DD)D" && (name == "max" || name == "min")) {
      return Val::Double(name == "max" ? std::max(args[0].d, args[1].d)
                                       : std::min(args[0].d, args[1].d));
    }
  }
  if (owner == "java/lang/String" && name == "valueOf") {
    if (desc == "(C)Ljava/lang/String;") {
      return Val::Of(Str(std::string(1, static_cast<char>(args[0].i))));
    }
    if (desc == "(Z)Ljava/lang/String;") {
      return Val::Of(Str(args[0].i ? "true" : "false"));
    }
    return Val::Of(Str(ToJavaString(args[0])));
  }
  if (owner == "java/lang/Integer") {
    if (name == "valueOf" && desc == "(I)Ljava/lang/Integer;") {
      Ref r = Make(Object::Kind::kBoxed, "java/lang/Integer");
      r->boxed = args[0];
      return Val::Of(r);
    }
    if (name == "toString" && desc == "(I)Ljava/lang/String;") {
      return Val::Of(Str(std::to_string(args[0].i)));
    }
    if (name == "parseInt" && desc == "(Ljava/lang/String;)I") {
      if (!args[0].r) Throw("java/lang/NumberFormatException", "null");
      try {
        std::size_t used = 0;
        long long v = std::stoll(args[0].r->text, &used);
        if (used != args[0].r->text.size() || v != static_cast<int32_t>(v)) {
          throw std::invalid_argument("range");
        }
        return Val::Int(static_cast<int32_t>(v));
      } catch (const std::logic_error&) {
        Throw("java/lang/NumberFormatException", args[0].r->text);
      }
    }
  }
  if (sig ==
      "java/util/Objects.equals(Ljava/lang/Object;Ljava/lang/Object;)Z") {
    return Val::Int(JavaEquals(args[0], args[1]) ? 1 : 0);
  }
  throw Unsupported("static method " + sig);
}

Val Vm::NativeVirtual(const Ref& self, const std::string& name,
                      const std::string& desc, std::vector<Val>& args) {
  auto arg = [&](std::size_t i) -> Val& { return args.at(i); };
  auto boolean = [](bool b) { return Val::Int(b ? 1 : 0); };
  auto index = [&](std::size_t size) {
    int64_t i = arg(1).i;
    if (i < 0 || static_cast<std::size_t>(i) >= size) {
      Throw("java/lang/IndexOutOfBoundsException", std::to_string(i));
    }
    return static_cast<std::size_t>(i);
  };
  switch (self->kind) {
    case Object::Kind::kString: {
      const std::string& s = self->text;
      if (name == "equals") {
        const Ref& o = arg(1).r;
        return boolean(o && o->kind == Object::Kind::kString && o->text == s);
      }
      if (name == "isEmpty") return boolean(s.empty());
      if (name == "length") return Val::Int(static_cast<int32_t>(s.size()));
      if (name == "toString" || name == "intern") {
        return Val::Of(name == "intern" ? Intern(s) : self);
      }
      if (name == "hashCode") {
        int32_t h = 0;
        for (unsigned char c : s) h = Wrap(int64_t{31} * h + c);
        return Val::Int(h);
      }
      if (name == "toUpperCase" || name == "toLowerCase") {
        std::string t = s;
        for (char& c : t)
          c = name == "toUpperCase" ? std::toupper(c) : std::tolower(c);
        return Val::Of(Str(t));
      }
      if (name == "trim") {
        auto b = s.find_first_not_of(" \t\n\r");
        auto e = s.find_last_not_of(" \t\n\r");
        return Val::Of(
            Str(b == std::string::npos ? "" : s.substr(b, e - b + 1)));
      }
      if (name == "concat") return Val::Of(Str(s + ToJavaString(arg(1))));
      if (name == "charAt")
        return Val::Int(static_cast<unsigned char>(s[index(s.size())]));
      if (name == "contains")
        return boolean(s.find(ToJavaString(arg(1))) != std::string::npos);
      if (name == "startsWith")
        return boolean(s.starts_with(ToJavaString(arg(1))));
      if (name == "endsWith") return boolean(s.ends_with(ToJavaString(arg(1))));
      if (name == "compareTo") {
        if (!arg(1).r) Throw("java/lang/NullPointerException", "");
        int c = s.compare(arg(1).r->text);
        return Val::Int(c < 0 ? -1 : c > 0 ? 1 : 0);
      }
      break;
    }
    case Object::Kind::kBuilder:
      if (name == "append") {
        if (desc.starts_with("(C)")) {
          self->text += static_cast<char>(arg(1).i);
        } else if (desc.starts_with("(Z)")) {
          self->text += arg(1).i ? "true" : "false";
        } else {
          self->text += ToJavaString(arg(1));
        }
        return Val::Of(self);
      }
      if (name == "toString") return Val::Of(Str(self->text));
      if (name == "length")
        return Val::Int(static_cast<int32_t>(self->text.size()));
      break;
    case Object::Kind::kBoxed:
      if (name == "intValue") return Val::Int(self->boxed.as_int());
      if (name == "equals") {
        const Ref& o = arg(1).r;
        return boolean(o && o->kind == Object::Kind::kBoxed &&
                       o->boxed.i == self->boxed.i);
      }
      if (name == "hashCode") return Val::Int(self->boxed.as_int());
      if (name == "toString")
        return Val::Of(Str(std::to_string(self->boxed.i)));
      break;
    case Object::Kind::kList: {
      auto& v = self->elems;
      auto find = [&](const Val& x) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (JavaEquals(x, v[i])) return static_cast<int64_t>(i);
        }
        return int64_t{-1};
      };
      if (name == "add" && desc == "(Ljava/lang/Object;)Z") {
        v.push_back(arg(1));
        return boolean(true);
      }
      if (name == "add" && desc == "(ILjava/lang/Object;)V") {
        if (arg(1).i < 0 || static_cast<std::size_t>(arg(1).i) > v.size()) {
          Throw("java/lang/IndexOutOfBoundsException",
                std::to_string(arg(1).i));
        }
        v.insert(v.begin() + arg(1).i, arg(2));
        return Val{};
      }
      if (name == "get") return v[index(v.size())];
      if (name == "set") {
        std::size_t i = index(v.size());
        Val old = v[i];
        v[i] = arg(2);
        return old;
      }
      if (name == "remove" && desc == "(I)Ljava/lang/Object;") {
        std::size_t i = index(v.size());
        Val old = v[i];
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        return old;
      }
      if (name == "remove" && desc == "(Ljava/lang/Object;)Z") {
        int64_t i = find(arg(1));
        if (i >= 0) v.erase(v.begin() + i);
        return boolean(i >= 0);
      }
      if (name == "clear") {
        v.clear();
        return Val{};
      }
      if (name == "size") return Val::Int(static_cast<int32_t>(v.size()));
      if (name == "isEmpty") return boolean(v.empty());
      if (name == "contains") return boolean(find(arg(1)) >= 0);
      if (name == "indexOf")
        return Val::Int(static_cast<int32_t>(find(arg(1))));
      break;
    }
    case Object::Kind::kMap: {
      auto& v = self->elems;
      auto find = [&](const Val& k) {
        for (std::size_t i = 0; i < v.size(); i += 2) {
          if (JavaEquals(k, v[i])) return static_cast<int64_t>(i);
        }
        return int64_t{-1};
      };
      if (name == "put") {
        int64_t i = find(arg(1));
        if (i < 0) {
          v.push_back(arg(1));
          v.push_back(arg(2));
          return Val::Null();
        }
        Val old = v[i + 1];
        v[i + 1] = arg(2);
        return old;
      }
      if (name == "get" || name == "getOrDefault") {
        int64_t i = find(arg(1));
        if (i >= 0) return v[i + 1];
        return name == "get" ? Val::Null() : arg(2);
      }
      if (name == "remove") {
        int64_t i = find(arg(1));
        if (i < 0) return Val::Null();
        Val old = v[i + 1];
        v.erase(v.begin() + i, v.begin() + i + 2);
        return old;
      }
      if (name == "containsKey") return boolean(find(arg(1)) >= 0);
      if (name == "clear") {
        v.clear();
        return Val{};
      }
      if (name == "size") return Val::Int(static_cast<int32_t>(v.size() / 2));
      if (name == "isEmpty") return boolean(v.empty());
      break;
    }
    case Object::Kind::kPrintStream:
      if (name == "println" || name == "print") {
        std::string text;
        if (desc == "()V") {
        } else if (desc == "(C)V") {
          text = std::string(1, static_cast<char>(arg(1).i));
        } else if (desc == "(Z)V") {
          text = arg(1).i ? "true" : "false";
        } else {
          text = ToJavaString(arg(1));
        }
        out_ << text;
        if (name == "println") out_ << '\n';
        return Val{};
      }
      break;
    case Object::Kind::kClass:
      if (name == "getName") return Val::Of(Str(Dotted(self->text)));
      break;
    default:
      break;
  }
  // java/lang/Object and java/lang/Throwable behaviour.
  if (name == "equals" && desc == "(Ljava/lang/Object;)Z") {
    return boolean(arg(1).r == self);
  }
  if (name == "hashCode" && desc == "()I") {
    return Val::Int(static_cast<int32_t>(self->serial));
  }
  if (name == "getClass" && desc == "()Ljava/lang/Class;") {
    Ref c = Make(Object::Kind::kClass, "java/lang/Class");
    c->text = self->cls;
    return Val::Of(c);
  }
  if (InstanceOf(self, "java/lang/Throwable")) {
    if (name == "getMessage" || name == "getLocalizedMessage") {
      auto it = self->fields.find(kMessage);
      return it == self->fields.end() ? Val::Null() : it->second;
    }
    if (name == "toString") return Val::Of(Str(Describe(self)));
  }
  if (name == "toString" && desc == "()Ljava/lang/String;") {
    std::ostringstream s;
    s << Dotted(self->cls) << "@" << std::hex << self->serial;
    return Val::Of(Str(s.str()));
  }
  throw Unsupported("method " + self->cls + "." + name + desc);
}

Val Vm::Execute(const Clazz& cls, const Method& m, std::vector<Val> locals) {
  const Code& code = CodeOf(m);
  std::vector<Val> stack;
  std::size_t pc = 0;
  auto pop = [&]() {
    if (stack.empty()) throw Unsupported("operand stack underflow");
    Val v = std::move(stack.back());
    stack.pop_back();
    return v;
  };
  auto local = [&](uint16_t slot) -> Val& {
    if (slot >= locals.size()) locals.resize(slot + 2);
    return locals[slot];
  };
  auto field_key = [&](const jmut::FieldRef& ref) {
    for (const Clazz* c = FindClass(ref.owner); c;
         c = FindClass(c->super_name)) {
      if (c->FindField(ref.name, ref.descriptor))
        return c->name + "." + ref.name;
    }
    return ref.owner + "." + ref.name;
  };
  auto array_index = [&](const Ref& a, int64_t i) {
    if (!a) Throw("java/lang/NullPointerException", "");
    if (i < 0 || static_cast<std::size_t>(i) >= a->elems.size()) {
      Throw("java/lang/ArrayIndexOutOfBoundsException", std::to_string(i));
    }
    return static_cast<std::size_t>(i);
  };
  std::function<Ref(const std::string&, const std::vector<int32_t>&,
                    std::size_t)>
      new_array = [&](const std::string& desc, const std::vector<int32_t>& dims,
                      std::size_t d) {
        if (dims[d] < 0) Throw("java/lang/NegativeArraySizeException", "");
        Ref a = Make(Object::Kind::kArray, desc);
        std::string elem = desc.substr(1);
        for (int32_t k = 0; k < dims[d]; ++k) {
          a->elems.push_back(d + 1 < dims.size()
                                 ? Val::Of(new_array(elem, dims, d + 1))
                                 : DefaultOf(elem));
        }
        return a;
      };

  while (true) {
    if (pc >= m.instructions.size()) throw Unsupported("fell off the code");
    const Instruction& insn = m.instructions[pc];
    std::size_t next = code.next[pc];
    try {
      switch (insn.kind()) {
        case jmut::InstructionKind::kLoad:
          stack.push_back(local(insn.as<op::Load>()->slot));
          break;
        case jmut::InstructionKind::kStore: {
          uint16_t slot = insn.as<op::Store>()->slot;
          local(slot) = pop();
          break;
        }
        case jmut::InstructionKind::kIncrement: {
          const auto* inc = insn.as<op::Increment>();
          Val& v = local(inc->slot);
          v = Val::Int(Wrap(int64_t{v.as_int()} + inc->delta));
          break;
        }
        case jmut::InstructionKind::kArithmetic: {
          const auto* a = insn.as<op::Arithmetic>();
          using AO = jmut::ArithmeticOp;
          if (a->op == AO::kNeg) {
            Val v = pop();
            switch (a->type) {
              case jmut::ValueType::kInt:
                stack.push_back(Val::Int(Wrap(-int64_t{v.as_int()})));
                break;
              case jmut::ValueType::kLong:
                stack.push_back(Val::Long(
                    static_cast<int64_t>(0ULL - static_cast<uint64_t>(v.i))));
                break;
              case jmut::ValueType::kFloat:
                stack.push_back(Val::Float(static_cast<float>(-v.d)));
                break;
              default:
                stack.push_back(Val::Double(-v.d));
                break;
            }
            break;
          }
          Val b = pop();
          Val x = pop();
          if (a->type == jmut::ValueType::kInt ||
              a->type == jmut::ValueType::kLong) {
            bool is_int = a->type == jmut::ValueType::kInt;
            int64_t l = is_int ? x.as_int() : x.i;
            int64_t r = is_int ? b.as_int() : b.i;
            uint64_t ul = static_cast<uint64_t>(l),
                     ur = static_cast<uint64_t>(r);
            int bits = is_int ? 32 : 64;
            int64_t out = 0;
            switch (a->op) {
              case AO::kAdd:
                out = static_cast<int64_t>(ul + ur);
                break;
              case AO::kSub:
                out = static_cast<int64_t>(ul - ur);
                break;
              case AO::kMul:
                out = static_cast<int64_t>(ul * ur);
                break;
              case AO::kDiv:
              case AO::kRem: {
                if (r == 0) Throw("java/lang/ArithmeticException", "/ by zero");
                int64_t min = is_int ? std::numeric_limits<int32_t>::min()
                                     : std::numeric_limits<int64_t>::min();
                if (l == min && r == -1) {
                  out = a->op == AO::kDiv ? min : 0;
                } else {
                  out = a->op == AO::kDiv ? l / r : l % r;
                }
                break;
              }
              case AO::kShl:
                out = static_cast<int64_t>(ul << (r & (bits - 1)));
                break;
              case AO::kShr:
                out = is_int ? (static_cast<int32_t>(l) >> (r & 31))
                             : (l >> (r & 63));
                break;
              case AO::kUshr:
                out = is_int ? static_cast<int64_t>(static_cast<uint32_t>(l) >>
                                                    (r & 31))
                             : static_cast<int64_t>(ul >> (r & 63));
                break;
              case AO::kAnd:
                out = l & r;
                break;
              case AO::kOr:
                out = l | r;
                break;
              case AO::kXor:
                out = l ^ r;
                break;
              default:
                break;
            }
            stack.push_back(is_int ? Val::Int(Wrap(out)) : Val::Long(out));
          } else {
            double l = x.d, r = b.d, out = 0;
            switch (a->op) {
              case AO::kAdd:
                out = l + r;
                break;
              case AO::kSub:
                out = l - r;
                break;
              case AO::kMul:
                out = l * r;
                break;
              case AO::kDiv:
                out = l / r;
                break;
              case AO::kRem:
                out = std::fmod(l, r);
                break;
              default:
                throw Unsupported("floating-point bit operation");
            }
            stack.push_back(a->type == jmut::ValueType::kFloat
                                ? Val::Float(static_cast<float>(out))
                                : Val::Double(out));
          }
          break;
        }
        case jmut::InstructionKind::kBranch: {
          const auto* br = insn.as<op::Branch>();
          bool taken = false;
          switch (br->operands) {
            case jmut::BranchOperands::kIntZero:
              taken = Compare<int32_t>(br->relation, pop().as_int(), 0);
              break;
            case jmut::BranchOperands::kIntInt: {
              int32_t r = pop().as_int();
              int32_t l = pop().as_int();
              taken = Compare(br->relation, l, r);
              break;
            }
            case jmut::BranchOperands::kRefRef: {
              Ref r = pop().r;
              Ref l = pop().r;
              taken = (l == r) == (br->relation == jmut::Relation::kEq);
              break;
            }
            case jmut::BranchOperands::kRefNull:
              taken =
                  (pop().r == nullptr) == (br->relation == jmut::Relation::kEq);
              break;
          }
          if (taken) next = code.cond[pc].at(0);
          break;
        }
        case jmut::InstructionKind::kGoto:
          break;
        case jmut::InstructionKind::kSwitch: {
          const auto* sw = insn.as<op::Switch>();
          int32_t key = pop().as_int();
          for (std::size_t k = 0; k < sw->keys.size(); ++k) {
            if (sw->keys[k] == key) {
              next = code.cond[pc].at(k);
              break;
            }
          }
          break;
        }
        case jmut::InstructionKind::kFieldAccess: {
          const auto* fa = insn.as<op::FieldAccess>();
          const auto& ref = fa->ref;
          switch (fa->op) {
            case jmut::FieldOp::kGetStatic:
              if (ref.owner == "java/lang/System" && ref.name == "out") {
                stack.push_back(Val::Of(system_out_));
              } else {
                stack.push_back(Static(ref.owner, ref.name, ref.descriptor));
              }
              break;
            case jmut::FieldOp::kPutStatic: {
              Val v = pop();
              Static(ref.owner, ref.name, ref.descriptor) = std::move(v);
              break;
            }
            case jmut::FieldOp::kGetField: {
              Ref o = pop().r;
              if (!o)
                Throw("java/lang/NullPointerException", "getfield " + ref.name);
              auto it = o->fields.find(field_key(ref));
              stack.push_back(it == o->fields.end() ? DefaultOf(ref.descriptor)
                                                    : it->second);
              break;
            }
            case jmut::FieldOp::kPutField: {
              Val v = pop();
              Ref o = pop().r;
              if (!o)
                Throw("java/lang/NullPointerException", "putfield " + ref.name);
              o->fields[field_key(ref)] = std::move(v);
              break;
            }
          }
          break;
        }
        case jmut::InstructionKind::kInvoke: {
          const auto* inv = insn.as<op::Invoke>();
          auto shape = jmut::descriptor::ParseMethod(inv->ref.descriptor);
          if (!shape)
            throw Unsupported("bad descriptor " + inv->ref.descriptor);
          std::size_t n = shape->params.size() +
                          (inv->kind == jmut::InvokeKind::kStatic ? 0 : 1);
          if (stack.size() < n) throw Unsupported("operand stack underflow");
          std::vector<Val> args(std::make_move_iterator(stack.end() - n),
                                std::make_move_iterator(stack.end()));
          stack.resize(stack.size() - n);
          Val r = CallInvoke(*inv, std::move(args));
          if (shape->ret != "V") stack.push_back(std::move(r));
          break;
        }
        case jmut::InstructionKind::kInvokeDynamic:
          throw Unsupported("invokedynamic");
        case jmut::InstructionKind::kNew:
          stack.push_back(Val::Of(New(insn.as<op::New>()->type.name)));
          break;
        case jmut::InstructionKind::kNewArray: {
          const auto* na = insn.as<op::NewArray>();
          std::vector<int32_t> dims(na->multi ? na->dimensions : 1);
          for (std::size_t k = dims.size(); k-- > 0;) dims[k] = pop().as_int();
          stack.push_back(Val::Of(new_array(na->array_type.name, dims, 0)));
          break;
        }
        case jmut::InstructionKind::kPush: {
          const Constant& k = insn.as<op::Push>()->value;
          switch (k.kind) {
            case Constant::Kind::kNull:
              stack.push_back(Val::Null());
              break;
            case Constant::Kind::kInteger:
              stack.push_back(Val::Int(static_cast<int32_t>(k.bits)));
              break;
            case Constant::Kind::kLong:
              stack.push_back(Val::Long(k.bits));
              break;
            case Constant::Kind::kFloat:
              stack.push_back(Val::Float(
                  std::bit_cast<float>(static_cast<uint32_t>(k.bits))));
              break;
            case Constant::Kind::kDouble:
              stack.push_back(Val::Double(std::bit_cast<double>(k.bits)));
              break;
            case Constant::Kind::kString:
              stack.push_back(Val::Of(Intern(k.text)));
              break;
            case Constant::Kind::kClass: {
              Ref c = Make(Object::Kind::kClass, "java/lang/Class");
              c->text = k.text;
              stack.push_back(Val::Of(c));
              break;
            }
            default:
              throw Unsupported("constant kind");
          }
          break;
        }
        case jmut::InstructionKind::kReturn:
          if (insn.as<op::Return>()->type) return pop();
          return Val{};
        case jmut::InstructionKind::kThrow: {
          Ref e = pop().r;
          if (!e) Throw("java/lang/NullPointerException", "throw null");
          throw Thrown{e};
        }
        case jmut::InstructionKind::kTypeCheck: {
          const auto* tc = insn.as<op::TypeCheck>();
          if (tc->op == jmut::TypeCheckOp::kCheckCast) {
            const Ref& r = stack.empty() ? nullptr : stack.back().r;
            if (stack.empty()) throw Unsupported("operand stack underflow");
            if (r && !InstanceOf(r, tc->type.name)) {
              Throw("java/lang/ClassCastException", Dotted(r->cls) +
                                                        " cannot be cast to " +
                                                        Dotted(tc->type.name));
            }
          } else {
            Ref r = pop().r;
            stack.push_back(
                Val::Int(r && InstanceOf(r, tc->type.name) ? 1 : 0));
          }
          break;
        }
        case jmut::InstructionKind::kStack: {
          using SK = jmut::StackOpKind;
          switch (insn.as<op::Stack>()->op) {
            case SK::kPop:
              pop();
              break;
            case SK::kPop2:
              if (!pop().wide()) pop();
              break;
            case SK::kDup: {
              Val v = pop();
              stack.push_back(v);
              stack.push_back(v);
              break;
            }
            case SK::kDupX1: {
              Val v1 = pop(), v2 = pop();
              stack.insert(stack.end(), {v1, v2, v1});
              break;
            }
            case SK::kDupX2: {
              Val v1 = pop(), v2 = pop();
              if (v2.wide()) {
                stack.insert(stack.end(), {v1, v2, v1});
              } else {
                Val v3 = pop();
                stack.insert(stack.end(), {v1, v3, v2, v1});
              }
              break;
            }
            case SK::kDup2: {
              Val v1 = pop();
              if (v1.wide()) {
                stack.insert(stack.end(), {v1, v1});
              } else {
                Val v2 = pop();
                stack.insert(stack.end(), {v2, v1, v2, v1});
              }
              break;
            }
            case SK::kDup2X1: {
              Val v1 = pop();
              if (v1.wide()) {
                Val v2 = pop();
                stack.insert(stack.end(), {v1, v2, v1});
              } else {
                Val v2 = pop(), v3 = pop();
                stack.insert(stack.end(), {v2, v1, v3, v2, v1});
              }
              break;
            }
            case SK::kDup2X2: {
              Val v1 = pop();
              if (v1.wide()) {
                Val v2 = pop();
                if (v2.wide()) {
                  stack.insert(stack.end(), {v1, v2, v1});
                } else {
                  Val v3 = pop();
                  stack.insert(stack.end(), {v1, v3, v2, v1});
                }
              } else {
                Val v2 = pop(), v3 = pop();
                if (v3.wide()) {
                  stack.insert(stack.end(), {v2, v1, v3, v2, v1});
                } else {
                  Val v4 = pop();
                  stack.insert(stack.end(), {v2, v1, v4, v3, v2, v1});
                }
              }
              break;
            }
            case SK::kSwap: {
              Val v1 = pop(), v2 = pop();
              stack.push_back(v1);
              stack.push_back(v2);
              break;
            }
          }
          break;
        }
        case jmut::InstructionKind::kRaw: {
          uint8_t o = insn.as<op::Raw>()->opcode;
          if (o == opc::kNop) break;
          if (o == opc::kMonitorenter || o == opc::kMonitorexit) {
            if (!pop().r) Throw("java/lang/NullPointerException", "monitor");
            break;
          }
          if (o == opc::kArraylength) {
            Ref a = pop().r;
            if (!a) Throw("java/lang/NullPointerException", "arraylength");
            stack.push_back(Val::Int(static_cast<int32_t>(a->elems.size())));
            break;
          }
          if (o >= opc::kIaload && o <= opc::kSaload) {
            int64_t i = pop().as_int();
            Ref a = pop().r;
            stack.push_back(a->elems[array_index(a, i)]);
            break;
          }
          if (o >= opc::kIastore && o <= opc::kSastore) {
            Val v = pop();
            int64_t i = pop().as_int();
            Ref a = pop().r;
            std::size_t at = array_index(a, i);
            if (o == opc::kBastore) v = Val::Int(static_cast<int8_t>(v.i));
            if (o == opc::kCastore) v = Val::Int(static_cast<uint16_t>(v.i));
            if (o == opc::kSastore) v = Val::Int(static_cast<int16_t>(v.i));
            a->elems[at] = v;
            break;
          }
          if (o == opc::kLcmp) {
            int64_t r = pop().i, l = pop().i;
            stack.push_back(Val::Int(l < r ? -1 : l > r ? 1 : 0));
            break;
          }
          if (o >= opc::kFcmpl && o <= opc::kDcmpg) {
            double r = pop().d, l = pop().d;
            bool g = o == opc::kFcmpg || o == opc::kDcmpg;
            int32_t res = std::isnan(l) || std::isnan(r) ? (g ? 1 : -1)
                          : l < r                        ? -1
                          : l > r                        ? 1
                                                         : 0;
            stack.push_back(Val::Int(res));
            break;
          }
          if (o >= opc::kI2l && o <= opc::kI2s) {
            Val v = pop();
            auto to_int = [](double d) -> int32_t {
              if (std::isnan(d)) return 0;
              if (d >= 2147483647.0) return std::numeric_limits<int32_t>::max();
              if (d <= -2147483648.0)
                return std::numeric_limits<int32_t>::min();
              return static_cast<int32_t>(d);
            };
            auto to_long = [](double d) -> int64_t {
              if (std::isnan(d)) return 0;
              if (d >= 9.2233720368547758e18)
                return std::numeric_limits<int64_t>::max();
              if (d <= -9.2233720368547758e18)
                return std::numeric_limits<int64_t>::min();
              return static_cast<int64_t>(d);
            };
            switch (o) {
              case opc::kI2l:
                stack.push_back(Val::Long(v.as_int()));
                break;
              case opc::kI2f:
                stack.push_back(Val::Float(static_cast<float>(v.as_int())));
                break;
              case opc::kI2d:
                stack.push_back(Val::Double(v.as_int()));
                break;
              case opc::kL2i:
                stack.push_back(Val::Int(Wrap(v.i)));
                break;
              case opc::kL2f:
                stack.push_back(Val::Float(static_cast<float>(v.i)));
                break;
              case opc::kL2d:
                stack.push_back(Val::Double(static_cast<double>(v.i)));
                break;
              case opc::kF2i:
              case opc::kD2i:
                stack.push_back(Val::Int(to_int(v.d)));
                break;
              case opc::kF2l:
              case opc::kD2l:
                stack.push_back(Val::Long(to_long(v.d)));
                break;
              case opc::kF2d:
                stack.push_back(Val::Double(v.d));
                break;
              case opc::kD2f:
                stack.push_back(Val::Float(static_cast<float>(v.d)));
                break;
              case opc::kI2b:
                stack.push_back(Val::Int(static_cast<int8_t>(v.i)));
                break;
              case opc::kI2c:
                stack.push_back(Val::Int(static_cast<uint16_t>(v.i)));
                break;
              default:
                stack.push_back(Val::Int(static_cast<int16_t>(v.i)));
                break;
            }
            break;
          }
          throw Unsupported(std::string("opcode ") + opc::Mnemonic(o));
        }
      }
    } catch (Thrown& t) {
      std::size_t target = kNone;
      for (const auto& h : code.handlers) {
        if (pc < h.start || pc >= h.end) continue;
        if (h.type.empty() || InstanceOf(t.exception, h.type)) {
          target = h.target;
          break;
        }
      }
      if (target == kNone) throw;
      stack.clear();
      stack.push_back(Val::Of(t.exception));
      pc = target;
      continue;
    }
    if (next == kNone)
      throw Unsupported("no successor in " + cls.name + "." + m.name);
    pc = next;
  }
}

}  // namespace minijvm
