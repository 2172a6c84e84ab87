// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wddl/expr.hpp"
#include "wddl/library.hpp"

namespace wddl {

/// Dual-rail compound cell built from a single-ended function.
///
/// Rail variables follow `to_rail_form`: input pin `i` true rail is variable
/// `2i`, its false rail `2i + 1`.
struct WddlCell {
  std::string base;
  std::vector<std::string> inputs;
  std::string output;
  Expr true_logic = Expr::constant(false);
  Expr false_logic = Expr::constant(false);
  bool sequential = false;
  std::optional<std::string> clock;
  /// Single-ended gates composing the compound, by base cell name.
  std::vector<std::string> internal_instances;
  double area = 0.0;
  double input_cap = 2.0;

  /// Name used in differential and fat netlists, `W_<base>`.
  std::string name() const { return "W_" + base; }
  /// A compound with no gates: the output pair is an input pair, maybe swapped.
  bool is_wire() const { return !sequential && internal_instances.empty(); }

  /// Evaluates both outputs on rail words (bit-parallel).
  std::pair<std::uint64_t, std::uint64_t> eval(std::span<const std::uint64_t> rails) const;

  friend bool operator==(const WddlCell&, const WddlCell&) = default;
};

/// Builds the compound for `cell`. Negations are pushed onto input rails so
/// both output expressions are monotone. Gate counts are priced from `parts`,
/// which must provide AND2, OR2 and (for registers) DFF.
WddlCell dualize_function(const CellFunction& cell, const Library& parts);
WddlCell dualize_function(const CellFunction& cell);

/// Problems found in a compound, empty when the cell is a valid WDDL gate.
/// Checks monotonicity, complementarity on every valid input and the
/// all-zero precharge response.
std::vector<std::string> check_wddl_cell(const WddlCell& cell, const CellFunction& function);

/// Compounds keyed by base cell name.
class WddlLibrary {
 public:
  WddlLibrary() = default;
  explicit WddlLibrary(const Library& base);

  const WddlCell* find(std::string_view base) const;
  const WddlCell& at(std::string_view base) const;
  /// Lookup by the `W_` name used in netlist text.
  const WddlCell* find_by_name(std::string_view name) const;
  const std::map<std::string, WddlCell, std::less<>>& cells() const noexcept { return cells_; }
  const Library& base() const noexcept { return base_; }

 private:
  Library base_;
  std::map<std::string, WddlCell, std::less<>> cells_;
};

}  // namespace wddl
