// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wddl {

/// Boolean expression over indexed variables.
///
/// Evaluation is bit-parallel: every variable is a 64-bit word, so one call
/// evaluates 64 independent assignments. Scalar users read bit 0.
class Expr {
 public:
  enum class Op : std::uint8_t { Const, Var, Not, And, Or, Xor };

  static Expr constant(bool value);
  static Expr var(int index);
  static Expr negate(Expr operand);
  static Expr conj(std::vector<Expr> operands);
  static Expr disj(std::vector<Expr> operands);
  static Expr exclusive(Expr lhs, Expr rhs);

  Op op() const noexcept { return op_; }
  int index() const noexcept { return index_; }
  bool value() const noexcept { return index_ != 0; }
  const std::vector<Expr>& args() const noexcept { return args_; }

  std::uint64_t eval(std::span<const std::uint64_t> vars) const;
  bool eval_bit(std::span<const std::uint8_t> vars) const;

  /// True when the expression contains neither negation nor XOR.
  bool is_monotone() const;

  /// (variable, positive) when the expression is a single literal.
  std::optional<std::pair<int, bool>> as_literal() const;

  /// Highest variable index referenced, or -1.
  int max_var() const;

  /// Number of two-input AND and OR gates needed for a direct realization.
  int and2_count() const;
  int or2_count() const;

  /// Flattens nested same-operator nodes and folds constants.
  Expr simplified() const;

  /// Renders with the library operators `& | ^ !`.
  std::string to_string(std::span<const std::string> names) const;

  friend bool operator==(const Expr&, const Expr&) = default;

 private:
  Expr(Op op, int index, std::vector<Expr> args)
      : op_(op), index_(index), args_(std::move(args)) {}

  Op op_ = Op::Const;
  int index_ = 0;
  std::vector<Expr> args_;
};

/// Parses `& | ^ !` with parentheses; precedence ! > & > ^ > |.
/// Identifiers resolve to their position in `names`. Throws ParseError.
Expr parse_expr(std::string_view text, std::span<const std::string> names);

/// Negation normal form over dual-rail literals: variable `i` positive maps
/// to rail `2i`, negative to rail `2i + 1`. The result is monotone.
Expr to_rail_form(const Expr& e, bool negated);

}  // namespace wddl
