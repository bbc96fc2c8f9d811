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


#include "jmut/catalog.h"

#include <fnmatch.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "jmut/errors.h"

namespace jmut {
namespace {

constexpr std::array<const char*, kCategoryCount> kCategoryNames = {
    "Arithmetic",   "RelationalConditional", "Inheritance", "Polymorphism",
    "JavaSpecific", "Collection",            "ApiGeneric",
};

OperatorDescriptor Describe(std::string source, std::optional<std::string> id,
                            bool builtin) {
  OperatorDescriptor d;
  d.document = LoadRule(source);
  d.source = std::move(source);
  d.builtin = builtin;
  const auto& info = d.document.info;
  if (id) {
    d.id = *id;
  } else if (info && !info->id.empty()) {
    d.id = info->id;
  } else if (d.document.unit) {
    d.id = d.document.unit->name;
  } else {
    d.id = d.document.rules.front().name;
  }
  if (d.id.empty()) throw IllFormedRule("operator id is empty");
  if (info && !info->category.empty()) {
    auto c = CategoryFromName(info->category);
    if (!c) throw IllFormedRule("unknown category '" + info->category + "'");
    d.category = *c;
  }
  if (info) {
    d.description = info->description;
    d.inverse_of = info->inverse_of;
  }
  return d;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string SlashName(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '.', '/');
  return out;
}

}  // namespace

const char* CategoryName(Category c) {
  return kCategoryNames[static_cast<int>(c)];
}

std::optional<Category> CategoryFromName(std::string_view name) {
  for (int i = 0; i < kCategoryCount; ++i) {
    if (name == kCategoryNames[i]) return static_cast<Category>(i);
  }
  return std::nullopt;
}

const Rule& OperatorDescriptor::entry_rule() const {
  if (document.unit) {
    const Rule* r = document.FindRule(document.unit->steps.front());
    if (r) return *r;
  }
  return document.rules.front();
}

std::vector<Parameter> OperatorDescriptor::required_parameters() const {
  const Rule& rule = entry_rule();
  std::set<std::string> bound;
  for (const auto& n : rule.nodes) {
    if (!IsMatched(n.role)) continue;
    for (const auto& [attr, term] : n.bindings) {
      if (term.kind == Term::Kind::kVariable) bound.insert(term.variable);
    }
  }
  std::vector<Parameter> out;
  for (const auto& p : rule.parameters) {
    if (!bound.count(p.name)) out.push_back(p);
  }
  return out;
}

Registry Registry::Builtin() {
  Registry r;
  for (const auto& doc : internal::BuiltinDocuments()) {
    r.Add(Describe(doc.text, std::nullopt, true));
  }
  return r;
}

std::vector<const OperatorDescriptor*> Registry::List() const {
  std::vector<const OperatorDescriptor*> out;
  for (const auto& [id, d] : operators_) out.push_back(d.get());
  std::stable_sort(out.begin(), out.end(), [](auto* a, auto* b) {
    return a->category < b->category;
  });
  return out;
}

const OperatorDescriptor* Registry::Find(std::string_view id) const {
  auto it = operators_.find(id);
  return it == operators_.end() ? nullptr : it->second.get();
}

const OperatorDescriptor& Registry::Get(std::string_view id) const {
  const auto* d = Find(id);
  if (!d) throw UnknownOperator("unknown operator '" + std::string(id) + "'");
  return *d;
}

const OperatorDescriptor& Registry::RegisterUserOperator(
    std::string_view document, std::optional<std::string> id) {
  return Add(Describe(std::string(document), std::move(id), false));
}

const OperatorDescriptor& Registry::RegisterUserOperatorFile(
    const std::filesystem::path& path, std::optional<std::string> id) {
  return RegisterUserOperator(ReadFile(path), std::move(id));
}

void Registry::ExportBuiltins(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [id, d] : operators_) {
    if (!d->builtin) continue;
    auto path = dir / (id + ".json");
    std::ofstream out(path, std::ios::binary);
    out << d->source;
    if (!out) throw IoError("cannot write " + path.string());
  }
}

const OperatorDescriptor& Registry::Add(OperatorDescriptor d) {
  if (operators_.count(d.id)) {
    throw DuplicateOperatorId("operator id '" + d.id + "' already registered");
  }
  auto ptr = std::make_shared<const OperatorDescriptor>(std::move(d));
  const auto& ref = *ptr;
  operators_.emplace(ref.id, std::move(ptr));
  return ref;
}

bool GlobMatch(std::string_view pattern, std::string_view text) {
  return fnmatch(std::string(pattern).c_str(), std::string(text).c_str(), 0) ==
         0;
}

bool OperatorSelection::Includes(std::string_view id) const {
  return std::find(operators.begin(), operators.end(), id) != operators.end();
}

bool OperatorSelection::ClassInScope(std::string_view class_name) const {
  return class_glob.empty() ||
         GlobMatch(SlashName(class_glob), SlashName(class_name));
}

bool OperatorSelection::MethodInScope(std::string_view method_name) const {
  return method_glob.empty() || GlobMatch(method_glob, method_name);
}

void OperatorSelection::Validate(const Registry& registry) const {
  for (const auto& id : operators) registry.Get(id);
  for (const auto& [id, tables] : parameters) registry.Get(id);
}

}  // namespace jmut
