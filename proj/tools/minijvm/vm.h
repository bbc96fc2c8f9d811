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
// A small bytecode interpreter for running fixture test classes. It knows
// the instruction set the model covers and a handful of JDK classes
// (String, StringBuilder, boxed Integer, ArrayList, HashMap, Math,
// System.out and the common throwables). Anything else is an error.

#ifndef JMUT_TOOLS_MINIJVM_VM_H_
#define JMUT_TOOLS_MINIJVM_VM_H_

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "jmut/hierarchy.h"
#include "jmut/model.h"

namespace minijvm {

struct Object;
using Ref = std::shared_ptr<Object>;

struct Val {
  enum class Tag : uint8_t { kVoid, kInt, kLong, kFloat, kDouble, kRef };
  Tag tag = Tag::kVoid;
  int64_t i = 0;
  double d = 0;
  Ref r;

  static Val Int(int32_t v) { return {Tag::kInt, v, 0, nullptr}; }
  static Val Long(int64_t v) { return {Tag::kLong, v, 0, nullptr}; }
  static Val Float(float v) { return {Tag::kFloat, 0, v, nullptr}; }
  static Val Double(double v) { return {Tag::kDouble, 0, v, nullptr}; }
  static Val Of(Ref r) { return {Tag::kRef, 0, 0, std::move(r)}; }
  static Val Null() { return {Tag::kRef, 0, 0, nullptr}; }
  int32_t as_int() const { return static_cast<int32_t>(i); }
  bool wide() const { return tag == Tag::kLong || tag == Tag::kDouble; }
};

struct Object {
  enum class Kind : uint8_t {
    kInstance,
    kString,
    kBuilder,
    kBoxed,
    kList,
    kMap,
    kArray,
    kPrintStream,
    kClass,
  };
  Kind kind = Kind::kInstance;
  std::string cls;  // runtime class, or array descriptor
  uint32_t serial = 0;
  std::map<std::string, Val> fields;
  std::string text;        // kString, kBuilder, kClass
  Val boxed;               // kBoxed
  std::vector<Val> elems;  // kList, kArray; kMap keys at even positions
};

// A Java exception in flight.
struct Thrown {
  Ref exception;
};

// The program went outside what the interpreter supports.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Vm {
 public:
  Vm(jmut::Project program, std::ostream& out);

  // Instantiates `cls` with its no-argument constructor and calls the
  // instance method `name`()V. Throws Thrown or Unsupported.
  void RunTest(const std::string& cls, const std::string& name);

  std::string Describe(const Ref& exception) const;

 private:
  struct Code;
  Val Invoke(const jmut::Clazz& cls, const jmut::Method& m,
             std::vector<Val> args);
  Val Execute(const jmut::Clazz& cls, const jmut::Method& m,
              std::vector<Val> locals);
  Val CallInvoke(const jmut::op::Invoke& inv, std::vector<Val> args);
  Val Native(const std::string& owner, const std::string& name,
             const std::string& desc, std::vector<Val>& args, bool is_static);
  Val NativeVirtual(const Ref& self, const std::string& name,
                    const std::string& desc, std::vector<Val>& args);

  const jmut::Clazz* FindClass(const std::string& name) const;
  std::pair<const jmut::Clazz*, const jmut::Method*> FindMethod(
      const std::string& cls, const std::string& name,
      const std::string& desc) const;
  void EnsureInit(const std::string& cls);
  Val& Static(const std::string& owner, const std::string& name,
              const std::string& desc);
  Ref New(const std::string& cls);
  Ref Make(Object::Kind kind, std::string cls);
  Ref Str(const std::string& text);
  Ref Intern(const std::string& text);
  std::string RuntimeClass(const Ref& r) const;
  bool InstanceOf(const Ref& r, const std::string& type) const;
  bool JavaEquals(const Val& a, const Val& b);
  std::string ToJavaString(const Val& v);
  [[noreturn]] void Throw(const std::string& cls, const std::string& message);
  const Code& CodeOf(const jmut::Method& m);

  jmut::Project program_;
  jmut::ClassHierarchy hierarchy_;
  std::ostream& out_;
  std::map<std::string, const jmut::Clazz*, std::less<>> classes_;
  std::set<std::string> initialized_;
  std::map<std::string, std::map<std::string, Val>> statics_;
  std::map<std::string, Ref> interned_;
  std::map<const jmut::Method*, std::shared_ptr<Code>> code_;
  Ref system_out_;
  uint32_t next_serial_ = 1;
  int depth_ = 0;
};

}  // namespace minijvm

#endif  // JMUT_TOOLS_MINIJVM_VM_H_
