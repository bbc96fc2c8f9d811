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
// The operator registry: builtin rule documents plus user-registered ones.

#ifndef JMUT_CATALOG_H_
#define JMUT_CATALOG_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jmut/engine.h"
#include "jmut/rule.h"

namespace jmut {

enum class Category : uint8_t {
  kArithmetic,
  kRelationalConditional,
  kInheritance,
  kPolymorphism,
  kJavaSpecific,
  kCollection,
  kApiGeneric,
};
inline constexpr int kCategoryCount = 7;
const char* CategoryName(Category c);
std::optional<Category> CategoryFromName(std::string_view name);

struct OperatorDescriptor {
  std::string id;
  Category category = Category::kApiGeneric;
  std::string description;
  std::string inverse_of;  // empty when there is none
  bool builtin = false;
  RuleDocument document;
  std::string source;  // the document text

  bool is_unit() const { return document.unit.has_value(); }
  // The rule matched first: the single rule or the unit's first step.
  const Rule& entry_rule() const;
  // Parameters a caller must supply (those no match can bind).
  std::vector<Parameter> required_parameters() const;
};

class Registry {
 public:
  // Only the builtin operators.
  static Registry Builtin();

  // Ordered by (category, id).
  std::vector<const OperatorDescriptor*> List() const;
  const OperatorDescriptor* Find(std::string_view id) const;
  const OperatorDescriptor& Get(std::string_view id) const;  // UnknownOperator

  // Loads a document. The id comes from its "operator" block, else from
  // the rule or unit name, unless `id` is given.
  const OperatorDescriptor& RegisterUserOperator(
      std::string_view document, std::optional<std::string> id = std::nullopt);
  const OperatorDescriptor& RegisterUserOperatorFile(
      const std::filesystem::path& path,
      std::optional<std::string> id = std::nullopt);

  // Writes every builtin document as <dir>/<id>.json.
  void ExportBuiltins(const std::filesystem::path& dir) const;

 private:
  const OperatorDescriptor& Add(OperatorDescriptor d);

  std::map<std::string, std::shared_ptr<const OperatorDescriptor>, std::less<>>
      operators_;
};

// Which operators run, where, and with which parameter tables.
struct OperatorSelection {
  std::vector<std::string> operators;
  std::string class_glob;   // empty matches everything
  std::string method_glob;  // likewise
  // Per operator id, one entry per instantiation of its parameters.
  std::map<std::string, std::vector<ParamValues>, std::less<>> parameters;

  bool Includes(std::string_view id) const;
  // Class names may be given with '.' or '/'.
  bool ClassInScope(std::string_view class_name) const;
  bool MethodInScope(std::string_view method_name) const;
  // Throws UnknownOperator for ids missing from `registry`.
  void Validate(const Registry& registry) const;
};

// fnmatch-style matching with '*', '?' and [...] classes.
bool GlobMatch(std::string_view pattern, std::string_view text);

namespace internal {
struct EmbeddedDocument {
  const char* id;
  const char* text;
};
const std::vector<EmbeddedDocument>& BuiltinDocuments();
}  // namespace internal

}  // namespace jmut

#endif  // JMUT_CATALOG_H_
