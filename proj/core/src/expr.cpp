// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/expr.hpp"

#include <algorithm>
#include <cctype>

#include "wddl/error.hpp"

namespace wddl {

Expr Expr::constant(bool value) { return Expr(Op::Const, value ? 1 : 0, {}); }

Expr Expr::var(int index) { return Expr(Op::Var, index, {}); }

Expr Expr::negate(Expr operand) {
  std::vector<Expr> args;
  args.push_back(std::move(operand));
  return Expr(Op::Not, 0, std::move(args));
}

Expr Expr::conj(std::vector<Expr> operands) {
  if (operands.empty()) return constant(true);
  if (operands.size() == 1) return std::move(operands.front());
  return Expr(Op::And, 0, std::move(operands));
}

Expr Expr::disj(std::vector<Expr> operands) {
  if (operands.empty()) return constant(false);
  if (operands.size() == 1) return std::move(operands.front());
  return Expr(Op::Or, 0, std::move(operands));
}

Expr Expr::exclusive(Expr lhs, Expr rhs) {
  std::vector<Expr> args;
  args.push_back(std::move(lhs));
  args.push_back(std::move(rhs));
  return Expr(Op::Xor, 0, std::move(args));
}

std::uint64_t Expr::eval(std::span<const std::uint64_t> vars) const {
  switch (op_) {
    case Op::Const:
      return index_ ? ~std::uint64_t{0} : 0;
    case Op::Var:
      return vars[static_cast<std::size_t>(index_)];
    case Op::Not:
      return ~args_[0].eval(vars);
    case Op::And: {
      std::uint64_t r = ~std::uint64_t{0};
      for (const auto& a : args_) r &= a.eval(vars);
      return r;
    }
    case Op::Or: {
      std::uint64_t r = 0;
      for (const auto& a : args_) r |= a.eval(vars);
      return r;
    }
    case Op::Xor: {
      std::uint64_t r = 0;
      for (const auto& a : args_) r ^= a.eval(vars);
      return r;
    }
  }
  return 0;
}

bool Expr::eval_bit(std::span<const std::uint8_t> vars) const {
  switch (op_) {
    case Op::Const:
      return index_ != 0;
    case Op::Var:
      return vars[static_cast<std::size_t>(index_)] != 0;
    case Op::Not:
      return !args_[0].eval_bit(vars);
    case Op::And:
      return std::all_of(args_.begin(), args_.end(),
                         [&](const Expr& a) { return a.eval_bit(vars); });
    case Op::Or:
      return std::any_of(args_.begin(), args_.end(),
                         [&](const Expr& a) { return a.eval_bit(vars); });
    case Op::Xor: {
      bool r = false;
      for (const auto& a : args_) r ^= a.eval_bit(vars);
      return r;
    }
  }
  return false;
}

bool Expr::is_monotone() const {
  if (op_ == Op::Not || op_ == Op::Xor) return false;
  return std::all_of(args_.begin(), args_.end(),
                     [](const Expr& a) { return a.is_monotone(); });
}

std::optional<std::pair<int, bool>> Expr::as_literal() const {
  if (op_ == Op::Var) return std::pair{index_, true};
  if (op_ == Op::Not) {
    if (auto inner = args_[0].as_literal()) return std::pair{inner->first, !inner->second};
  }
  return std::nullopt;
}

int Expr::max_var() const {
  int m = op_ == Op::Var ? index_ : -1;
  for (const auto& a : args_) m = std::max(m, a.max_var());
  return m;
}

int Expr::and2_count() const {
  int n = op_ == Op::And ? static_cast<int>(args_.size()) - 1 : 0;
  for (const auto& a : args_) n += a.and2_count();
  return n;
}

int Expr::or2_count() const {
  int n = op_ == Op::Or ? static_cast<int>(args_.size()) - 1 : 0;
  for (const auto& a : args_) n += a.or2_count();
  return n;
}

Expr Expr::simplified() const {
  switch (op_) {
    case Op::Const:
    case Op::Var:
      return *this;
    case Op::Not: {
      Expr inner = args_[0].simplified();
      if (inner.op_ == Op::Const) return constant(!inner.value());
      if (inner.op_ == Op::Not) return inner.args_[0];
      return negate(std::move(inner));
    }
    case Op::And:
    case Op::Or: {
      const bool is_and = op_ == Op::And;
      std::vector<Expr> flat;
      for (const auto& a : args_) {
        Expr s = a.simplified();
        if (s.op_ == Op::Const) {
          // Absorbing element short-circuits, identity element drops out.
          if (s.value() != is_and) return constant(!is_and);
          continue;
        }
        if (s.op_ == op_) {
          for (auto& inner : s.args_) flat.push_back(std::move(inner));
        } else {
          flat.push_back(std::move(s));
        }
      }
      return is_and ? conj(std::move(flat)) : disj(std::move(flat));
    }
    case Op::Xor: {
      std::vector<Expr> args;
      for (const auto& a : args_) args.push_back(a.simplified());
      return Expr(Op::Xor, 0, std::move(args));
    }
  }
  return *this;
}

namespace {

int precedence(Expr::Op op) {
  switch (op) {
    case Expr::Op::Or:
      return 1;
    case Expr::Op::Xor:
      return 2;
    case Expr::Op::And:
      return 3;
    default:
      return 4;
  }
}

void render(const Expr& e, std::span<const std::string> names, std::string& out, int parent) {
  switch (e.op()) {
    case Expr::Op::Const:
      out += e.value() ? "1" : "0";
      return;
    case Expr::Op::Var: {
      auto i = static_cast<std::size_t>(e.index());
      out += i < names.size() ? names[i] : "v" + std::to_string(i);
      return;
    }
    case Expr::Op::Not:
      out += '!';
      render(e.args()[0], names, out, 4);
      return;
    default:
      break;
  }
  const int p = precedence(e.op());
  const char* sym = e.op() == Expr::Op::And ? " & " : e.op() == Expr::Op::Or ? " | " : " ^ ";
  if (p < parent) out += '(';
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    if (i) out += sym;
    render(e.args()[i], names, out, p + 1);
  }
  if (p < parent) out += ')';
}

class ExprParser {
 public:
  ExprParser(std::string_view text, std::span<const std::string> names)
      : text_(text), names_(names) {}

  Expr parse() {
    Expr e = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " in expression '" + std::string(text_) + "'", 1,
                     static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_or() {
    std::vector<Expr> terms;
    terms.push_back(parse_xor());
    while (accept('|')) terms.push_back(parse_xor());
    return Expr::disj(std::move(terms));
  }

  Expr parse_xor() {
    Expr lhs = parse_and();
    while (accept('^')) lhs = Expr::exclusive(std::move(lhs), parse_and());
    return lhs;
  }

  Expr parse_and() {
    std::vector<Expr> terms;
    terms.push_back(parse_unary());
    while (accept('&')) terms.push_back(parse_unary());
    return Expr::conj(std::move(terms));
  }

  Expr parse_unary() {
    if (accept('!')) return Expr::negate(parse_unary());
    if (accept('(')) {
      Expr e = parse_or();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (c == '0' || c == '1') {
      ++pos_;
      return Expr::constant(c == '1');
    }
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail("expected operand");
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view ident = text_.substr(start, pos_ - start);
    const auto it = std::find(names_.begin(), names_.end(), ident);
    if (it == names_.end()) fail("unknown input '" + std::string(ident) + "'");
    return Expr::var(static_cast<int>(it - names_.begin()));
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Expr::to_string(std::span<const std::string> names) const {
  std::string out;
  render(*this, names, out, 0);
  return out;
}

Expr parse_expr(std::string_view text, std::span<const std::string> names) {
  return ExprParser(text, names).parse();
}

Expr to_rail_form(const Expr& e, bool negated) {
  switch (e.op()) {
    case Expr::Op::Const:
      return Expr::constant(e.value() != negated);
    case Expr::Op::Var:
      return Expr::var(2 * e.index() + (negated ? 1 : 0));
    case Expr::Op::Not:
      return to_rail_form(e.args()[0], !negated);
    case Expr::Op::And:
    case Expr::Op::Or: {
      std::vector<Expr> parts;
      for (const auto& a : e.args()) parts.push_back(to_rail_form(a, negated));
      // De Morgan: a negated AND becomes an OR of negated operands.
      const bool make_and = (e.op() == Expr::Op::And) != negated;
      return (make_and ? Expr::conj(std::move(parts)) : Expr::disj(std::move(parts))).simplified();
    }
    case Expr::Op::Xor: {
      // Fold left: x ^ y ^ z = (x ^ y) ^ z, each step expanded to sum of products.
      Expr acc = e.args()[0];
      for (std::size_t i = 1; i < e.args().size(); ++i) acc = Expr::exclusive(acc, e.args()[i]);
      if (acc.op() != Expr::Op::Xor) return to_rail_form(acc, negated);
      const Expr& l = acc.args()[0];
      const Expr& r = acc.args()[1];
      std::vector<Expr> a;
      std::vector<Expr> b;
      if (!negated) {
        a.push_back(to_rail_form(l, false));
        a.push_back(to_rail_form(r, true));
        b.push_back(to_rail_form(l, true));
        b.push_back(to_rail_form(r, false));
      } else {
        a.push_back(to_rail_form(l, false));
        a.push_back(to_rail_form(r, false));
        b.push_back(to_rail_form(l, true));
        b.push_back(to_rail_form(r, true));
      }
      std::vector<Expr> terms;
      terms.push_back(Expr::conj(std::move(a)));
      terms.push_back(Expr::conj(std::move(b)));
      return Expr::disj(std::move(terms)).simplified();
    }
  }
  return e;
}

}  // namespace wddl
