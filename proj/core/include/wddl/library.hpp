// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wddl/expr.hpp"

namespace wddl {

/// One library cell: a single-output boolean function or a D register.
///
/// For registers `logic` is the identity of the single data input and
/// `clock` names the clock pin, which is not listed in `inputs`.
struct CellFunction {
  std::string name;
  std::vector<std::string> inputs;
  std::string output;
  Expr logic = Expr::constant(false);
  std::optional<std::string> clock;
  double area = 0.0;
  double input_cap = 2.0;

  bool sequential() const noexcept { return clock.has_value(); }
  bool has_pin(std::string_view pin) const;

  friend bool operator==(const CellFunction&, const CellFunction&) = default;
};

class Library {
 public:
  Library() = default;
  explicit Library(std::vector<CellFunction> cells);

  /// Adds a cell; throws ConfigError on a duplicate name or a broken invariant.
  void add(CellFunction cell);

  const CellFunction* find(std::string_view name) const;
  const CellFunction& at(std::string_view name) const;
  const std::vector<CellFunction>& cells() const noexcept { return cells_; }
  bool empty() const noexcept { return cells_.empty(); }

  friend bool operator==(const Library& a, const Library& b) { return a.cells_ == b.cells_; }

 private:
  std::vector<CellFunction> cells_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// AND2 OR2 NAND2 NOR2 XOR2 XNOR2 INV AOI32 OAI32 DFF.
Library base_library();

/// One cell per line: `NAME OUT = EXPR ( IN, ... ) ; area=A ; cap=C [; clock=CK]`.
/// `#` starts a comment.
Library parse_library(std::string_view text);
std::string emit_library(const Library& lib);

}  // namespace wddl
