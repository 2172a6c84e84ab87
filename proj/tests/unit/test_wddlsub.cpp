// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <functional>
#include <set>

#include <doctest.h>

#include "oracles.hpp"
#include "wddl/des.hpp"
#include "wddl/equiv.hpp"
#include "wddl/error.hpp"
#include "wddl/gatesim.hpp"
#include "wddl/library.hpp"
#include "wddl/netlist.hpp"
#include "wddl/substitute.hpp"
#include "wddl/wddl_cell.hpp"

using namespace wddl;

namespace {

// Both outputs of `c` over every one of the 2^(2k) rail assignments.
void for_all_rails(const WddlCell& c, const std::function<void(std::uint32_t, bool, bool)>& fn) {
  const int r = 2 * static_cast<int>(c.inputs.size());
  for (std::uint32_t v = 0; v < (1u << r); ++v) {
    std::vector<std::uint64_t> rails;
    for (int i = 0; i < r; ++i) rails.push_back((v >> i) & 1);
    const auto [t, f] = c.eval(rails);
    fn(v, t & 1, f & 1);
  }
}

bool rail(std::uint32_t v, int i) { return (v >> i) & 1; }

Netlist single_gate(const std::string& cell) {
  return parse_netlist("module g (a, b, y);\ninput a;\ninput b;\noutput y;\n" + cell +
                           " u (.A(a), .B(b), .Y(y));\nendmodule\n",
                       base_library());
}

}  // namespace

TEST_CASE("AND dualizes to an AND on true rails and an OR on false rails") {
  const WddlCell c = dualize_function(base_library().at("AND2"));
  for_all_rails(c, [](std::uint32_t v, bool t, bool f) {
    CHECK(t == (rail(v, 0) && rail(v, 2)));
    CHECK(f == (rail(v, 1) || rail(v, 3)));
  });
}

TEST_CASE("XOR dualization matches the truth-table construction") {
  const WddlCell c = dualize_function(base_library().at("XOR2"));
  for_all_rails(c, [](std::uint32_t v, bool t, bool f) {
    const bool at = rail(v, 0), af = rail(v, 1), bt = rail(v, 2), bf = rail(v, 3);
    CHECK(t == ((at && bf) || (af && bt)));
    CHECK(f == ((at && bt) || (af && bf)));
  });
}

TEST_CASE("INV dualizes to a pure rail swap") {
  const WddlCell c = dualize_function(base_library().at("INV"));
  CHECK(c.is_wire());
  CHECK(c.true_logic.as_literal() == std::optional(std::pair{1, true}));
  CHECK(c.false_logic.as_literal() == std::optional(std::pair{0, true}));
}

TEST_CASE("every compound is monotone, complementary and absorbs precharge") {
  const Library lib = base_library();
  const WddlLibrary wlib(lib);
  for (const auto& cell : lib.cells()) {
    if (cell.clock) continue;
    const WddlCell& c = wlib.at(cell.name);
    CHECK_MESSAGE(check_wddl_cell(c, cell).empty(), cell.name);
    CHECK(c.true_logic.is_monotone());
    CHECK(c.false_logic.is_monotone());
    const int k = static_cast<int>(c.inputs.size());
    std::vector<std::pair<bool, bool>> out(1u << (2 * k));
    for_all_rails(c, [&](std::uint32_t v, bool t, bool f) { out[v] = {t, f}; });
    CHECK(out[0] == std::pair{false, false});
    for (std::uint32_t u = 0; u < out.size(); ++u) {
      // Monotone along every single-rail raise.
      for (int i = 0; i < 2 * k; ++i) {
        const std::uint32_t w = u | (1u << i);
        CHECK((!out[u].first || out[w].first));
        CHECK((!out[u].second || out[w].second));
      }
    }
    for (int a = 0; a < (1 << k); ++a) {
      std::uint32_t v = 0;
      std::vector<bool> in;
      for (int i = 0; i < k; ++i) {
        const bool x = (a >> i) & 1;
        in.push_back(x);
        v |= (x ? 1u : 2u) << (2 * i);
      }
      const bool expect = test::cell_truth(cell.name, in);
      CHECK_MESSAGE(out[v].first == expect, cell.name << " a=" << a);
      CHECK_MESSAGE(out[v].second == !expect, cell.name << " a=" << a);
    }
  }
}

TEST_CASE("single AND substitutes to one compound with three pairs") {
  const WddlLibrary wlib(base_library());
  const DualRailNetlist d = substitute_cells(single_gate("AND2"), wlib);
  REQUIRE(d.instances.size() == 1);
  CHECK(d.instances[0].base == "AND2");
  CHECK(d.pairs().size() == 3);
  CHECK(validate_dual(d).empty());
  const FatNetlist fat = abstract_fat(d);
  CHECK(fat.netlist.instances.size() == 1);
  CHECK(fat.netlist.nets().size() == 3 + 1);  // plus the precharge port
  CHECK(fat.rail_map.size() == 3);
  const Netlist p = project_true_rail(d);
  REQUIRE(p.instances.size() == 1);
  CHECK(p.instances[0].cell == "AND2");
}

TEST_CASE("chain of three inverters becomes a swapped alias") {
  const Library lib = base_library();
  const Netlist n = parse_netlist(
      "module c (a, y);\ninput a;\noutput y;\nwire b;\nwire c;\n"
      "INV i1 (.A(a), .Y(b));\nINV i2 (.A(b), .Y(c));\nINV i3 (.A(c), .Y(y));\nendmodule\n",
      lib);
  const DualRailNetlist d = substitute_cells(n, WddlLibrary(lib));
  CHECK(d.instances.empty());
  // Inversion parity along the chain: b odd, c even.
  CHECK(d.pair_of.at("b").swapped);
  CHECK_FALSE(d.pair_of.at("c").swapped);
  // The output port stays canonical and aliases the swapped input pair.
  REQUIRE(d.assigns.size() == 1);
  CHECK(d.assigns[0].lhs == "y");
  CHECK(d.assigns[0].rhs == PairRef{"a", true});
  const Netlist p = project_true_rail(d);
  std::size_t invs = 0;
  for (const auto& i : p.instances) invs += i.cell == "INV";
  CHECK(invs == 1);
  CHECK(exhaustive_equiv(n, p, lib).equivalent);
}

TEST_CASE("DES module substitution") {
  const Library lib = base_library();
  const WddlLibrary wlib(lib);
  const Netlist n = build_des_module(DutConfig{}, lib);
  const DualRailNetlist d = substitute_cells(n, wlib);
  CHECK(validate_dual(d).empty());
  std::size_t invs = 0, comb = 0;
  for (const auto& i : n.instances) {
    invs += i.cell == "INV";
    comb += !lib.at(i.cell).clock;
  }
  std::size_t compounds = 0;
  for (const auto& i : d.instances) {
    CHECK(i.base != "INV");
    compounds += !d.cell_of(i).sequential;
  }
  CHECK(compounds == comb - invs);
  CHECK(d.instances.size() == n.instances.size() - invs);

  const FatNetlist fat = abstract_fat(d);
  CHECK(fat.netlist.instances.size() == d.instances.size());
  CHECK(fat.rail_map.size() == d.pairs().size());
  std::set<std::string> rails;
  for (const auto& [net, rp] : fat.rail_map) {
    CHECK(rp.t == rail_name(net, true));
    CHECK(rp.f == rail_name(net, false));
    CHECK(rails.insert(rp.t).second);
    CHECK(rails.insert(rp.f).second);
  }
  CHECK(exhaustive_equiv(n, project_true_rail(d), lib).equivalent);
  CHECK(precharge_check(d).pass);
}

TEST_CASE("differential text round-trips") {
  const Library lib = base_library();
  const WddlLibrary wlib(lib);
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const DualRailNetlist d = substitute_cells(test::random_sequential(s), wlib);
    const std::string text = emit_dual_netlist(d);
    const DualRailNetlist back = parse_dual_netlist(text, wlib);
    CHECK(emit_dual_netlist(back) == text);
    CHECK(validate_dual(back).empty());
  }
}

TEST_CASE("substitution is sound on the random corpus (independent evaluator)") {
  const Library lib = base_library();
  const WddlLibrary wlib(lib);
  for (std::uint64_t s = 100; s < 130; ++s) {
    const Netlist n = test::random_netlist(s, 10, 30);
    const Netlist p = project_true_rail(substitute_cells(n, wlib));
    const auto ins = n.input_bits();
    bool same = true;
    for (std::uint32_t v = 0; v < (1u << ins.size()) && same; ++v) {
      std::map<std::string, bool> in;
      for (std::size_t i = 0; i < ins.size(); ++i) in[ins[i]] = (v >> i) & 1;
      same = test::eval_netlist(n, in) == test::eval_netlist(p, in);
    }
    CHECK_MESSAGE(same, "seed " << s);
  }
}

TEST_CASE("cell without a compound is rejected") {
  Library big = base_library();
  CellFunction mux;
  mux.name = "MUX2";
  mux.inputs = {"A", "B", "S"};
  mux.output = "Y";
  mux.logic = parse_expr("S & B | !S & A", mux.inputs);
  mux.area = 12;
  big.add(mux);
  const Netlist n = parse_netlist(
      "module m (a, b, s, y);\ninput a;\ninput b;\ninput s;\noutput y;\nMUX2 u (.A(a), .B(b), .S(s), .Y(y));\nendmodule\n",
      big);
  CHECK_THROWS_AS(substitute_cells(n, WddlLibrary(base_library())), SubstitutionError);
}

TEST_CASE("fat library names every compound W_<BASE>") {
  const WddlLibrary wlib(base_library());
  const Library fat = fat_library(wlib);
  CHECK(fat.find("W_AND2") != nullptr);
  CHECK(fat.find("W_DFF") != nullptr);
  CHECK(fat.at("W_AND2").area == wlib.at("AND2").area);
}
