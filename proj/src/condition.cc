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


#include <cctype>
#include <charconv>

#include "jmut/errors.h"
#include "jmut/rule.h"

namespace jmut {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr Parse() {
    Skip();
    if (pos_ == text_.size()) Fail("empty condition");
    Expr e = Conjunction();
    Skip();
    if (pos_ != text_.size()) Fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void Fail(const std::string& message) {
    throw RuleSyntaxError(pos_, message);
  }

  void Skip() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool Eat(std::string_view token) {
    Skip();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  Expr Conjunction() {
    Expr first = Comparison();
    if (!Eat("&&")) return first;
    Expr conj;
    conj.kind = Expr::Kind::kAnd;
    conj.operands.push_back(std::move(first));
    do {
      conj.operands.push_back(Comparison());
    } while (Eat("&&"));
    return conj;
  }

  Expr Comparison() {
    Expr lhs = Primary();
    static constexpr std::pair<std::string_view, Expr::Op> kOps[] = {
        {"==", Expr::Op::kEq}, {"!=", Expr::Op::kNe}, {"<=", Expr::Op::kLe},
        {">=", Expr::Op::kGe}, {"<", Expr::Op::kLt},  {">", Expr::Op::kGt},
    };
    for (const auto& [tok, op] : kOps) {
      if (Eat(tok)) {
        Expr cmp;
        cmp.kind = Expr::Kind::kCompare;
        cmp.op = op;
        cmp.operands.push_back(std::move(lhs));
        cmp.operands.push_back(Primary());
        return cmp;
      }
    }
    return lhs;
  }

  Expr Primary() {
    Skip();
    if (pos_ == text_.size()) Fail("expected a term");
    char c = text_[pos_];
    Expr e;
    if (c == '(') {
      ++pos_;
      e = Conjunction();
      if (!Eat(")")) Fail("expected ')'");
      return e;
    }
    if (c == '"') return StringLiteral();
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      return IntLiteral();
    }
    if (!IsIdentStart(c)) Fail(std::string("unexpected character '") + c + "'");
    std::string ident = Identifier();
    if (ident == "true" || ident == "false") {
      e.literal = Value(int64_t{ident == "true"});
      return e;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (pos_ == text_.size() || !IsIdentStart(text_[pos_])) {
        Fail("expected attribute name");
      }
      e.kind = Expr::Kind::kAttribute;
      e.name = std::move(ident);
      e.attribute = Identifier();
      return e;
    }
    e.kind = Expr::Kind::kVariable;
    e.name = std::move(ident);
    return e;
  }

  static bool IsIdentStart(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string Identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (IsIdentStart(text_[pos_]) ||
            std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr StringLiteral() {
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) Fail("unterminated string");
      char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) Fail("unterminated escape");
        c = text_[pos_++];
        if (c != '"' && c != '\\') Fail("unknown escape");
      }
      out.push_back(c);
    }
    Expr e;
    e.literal = Value(std::move(out));
    return e;
  }

  Expr IntLiteral() {
    int64_t v = 0;
    auto res = std::from_chars(text_.data() + pos_,
                               text_.data() + text_.size(), v);
    if (res.ec != std::errc()) Fail("bad integer");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    Expr e;
    e.literal = Value(v);
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool Truthy(const Value& v) {
  if (auto* i = std::get_if<int64_t>(&v)) return *i != 0;
  return !std::get<std::string>(v).empty();
}

std::optional<Value> Eval(const Expr& e, const Lookup& lookup) {
  switch (e.kind) {
    case Expr::Kind::kLiteral: return e.literal;
    case Expr::Kind::kVariable:
    case Expr::Kind::kAttribute: return lookup(e);
    case Expr::Kind::kAnd:
      for (const auto& sub : e.operands) {
        auto v = Eval(sub, lookup);
        if (!v || !Truthy(*v)) return Value(int64_t{0});
      }
      return Value(int64_t{1});
    case Expr::Kind::kCompare: {
      auto a = Eval(e.operands[0], lookup);
      auto b = Eval(e.operands[1], lookup);
      if (!a || !b || a->index() != b->index()) {
        return Value(int64_t{e.op == Expr::Op::kNe && a && b});
      }
      bool r = false;
      switch (e.op) {
        case Expr::Op::kEq: r = *a == *b; break;
        case Expr::Op::kNe: r = *a != *b; break;
        case Expr::Op::kLt: r = *a < *b; break;
        case Expr::Op::kLe: r = *a <= *b; break;
        case Expr::Op::kGt: r = *a > *b; break;
        case Expr::Op::kGe: r = *a >= *b; break;
      }
      return Value(int64_t{r});
    }
  }
  return std::nullopt;
}

}  // namespace

Expr ParseCondition(std::string_view text) { return Parser(text).Parse(); }

void CollectVariables(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::kVariable) out.push_back(e.name);
  for (const auto& sub : e.operands) CollectVariables(sub, out);
}

void CollectNodeRefs(const Expr& e,
                     std::vector<std::pair<std::string, std::string>>& out) {
  if (e.kind == Expr::Kind::kAttribute) out.emplace_back(e.name, e.attribute);
  for (const auto& sub : e.operands) CollectNodeRefs(sub, out);
}

bool Evaluate(const Expr& e, const Lookup& lookup) {
  auto v = Eval(e, lookup);
  return v && Truthy(*v);
}

}  // namespace jmut
