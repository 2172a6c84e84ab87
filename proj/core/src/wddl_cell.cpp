// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/wddl_cell.hpp"

#include <fmt/format.h>

#include "wddl/error.hpp"

namespace wddl {

std::pair<std::uint64_t, std::uint64_t> WddlCell::eval(std::span<const std::uint64_t> rails) const {
  return {true_logic.eval(rails), false_logic.eval(rails)};
}

WddlCell dualize_function(const CellFunction& cell, const Library& parts) {
  WddlCell w;
  w.base = cell.name;
  w.inputs = cell.inputs;
  w.output = cell.output;
  w.input_cap = cell.input_cap;
  if (cell.sequential()) {
    // Two registers plus an AND2 per rail that holds the outputs at 0 during precharge.
    w.sequential = true;
    w.clock = cell.clock;
    w.true_logic = Expr::var(0);
    w.false_logic = Expr::var(1);
    w.internal_instances = {cell.name, cell.name, "AND2", "AND2"};
    w.area = 2 * cell.area + 2 * parts.at("AND2").area;
    return w;
  }
  w.true_logic = to_rail_form(cell.logic, false);
  w.false_logic = to_rail_form(cell.logic, true);
  const int ands = w.true_logic.and2_count() + w.false_logic.and2_count();
  const int ors = w.true_logic.or2_count() + w.false_logic.or2_count();
  w.internal_instances.insert(w.internal_instances.end(), static_cast<std::size_t>(ands), "AND2");
  w.internal_instances.insert(w.internal_instances.end(), static_cast<std::size_t>(ors), "OR2");
  if (ands) w.area += ands * parts.at("AND2").area;
  if (ors) w.area += ors * parts.at("OR2").area;
  return w;
}

WddlCell dualize_function(const CellFunction& cell) { return dualize_function(cell, base_library()); }

std::vector<std::string> check_wddl_cell(const WddlCell& cell, const CellFunction& function) {
  std::vector<std::string> problems;
  const std::size_t n = cell.inputs.size();
  if (!cell.true_logic.is_monotone()) problems.push_back(cell.name() + ": true output is not monotone");
  if (!cell.false_logic.is_monotone()) problems.push_back(cell.name() + ": false output is not monotone");
  const std::vector<std::uint64_t> zeros(2 * n, 0);
  const auto [zt, zf] = cell.eval(zeros);
  if ((zt | zf) & 1) problems.push_back(cell.name() + ": all-zero inputs do not give (0,0)");
  if (n > 16) return problems;
  std::vector<std::uint64_t> rails(2 * n);
  std::vector<std::uint64_t> single(n);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      single[i] = (a >> i) & 1;
      rails[2 * i] = single[i];
      rails[2 * i + 1] = single[i] ^ 1;
    }
    const std::uint64_t want = function.logic.eval(single) & 1;
    const auto [t, f] = cell.eval(rails);
    if ((t & 1) != want || (f & 1) != (want ^ 1)) {
      problems.push_back(fmt::format("{}: wrong rail values for input {:0{}b}", cell.name(), a, n));
      break;
    }
  }
  return problems;
}

WddlLibrary::WddlLibrary(const Library& base) : base_(base) {
  for (const auto& c : base.cells()) cells_.emplace(c.name, dualize_function(c, base));
}

const WddlCell* WddlLibrary::find(std::string_view base) const {
  auto it = cells_.find(base);
  return it == cells_.end() ? nullptr : &it->second;
}

const WddlCell& WddlLibrary::at(std::string_view base) const {
  if (const auto* c = find(base)) return *c;
  throw SubstitutionError("cell '" + std::string(base) + "' has no WDDL counterpart");
}

const WddlCell* WddlLibrary::find_by_name(std::string_view name) const {
  if (name.substr(0, 2) != "W_") return nullptr;
  return find(name.substr(2));
}

}  // namespace wddl
