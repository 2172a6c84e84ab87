// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "wddl/des.hpp"
#include "wddl/equiv.hpp"
#include "wddl/error.hpp"
#include "wddl/library.hpp"
#include "wddl/netlist.hpp"
#include "wddl/substitute.hpp"

using namespace wddl;

namespace {

Netlist gate(const std::string& cell) {
  return parse_netlist("module g (a, b, y);\ninput a;\ninput b;\noutput y;\n" + cell +
                           " u (.A(a), .B(b), .Y(y));\nendmodule\n",
                       base_library());
}

std::map<std::string, bool> assignment(const Netlist& n, const std::string& bits) {
  const auto ins = n.input_bits();
  std::map<std::string, bool> m;
  for (std::size_t i = 0; i < ins.size(); ++i) m[ins[i]] = bits.at(i) == '1';
  return m;
}

// Oracle: do two combinational netlists differ on any input?
bool oracle_differs(const Netlist& a, const Netlist& b) {
  const auto ins = a.input_bits();
  for (std::uint32_t v = 0; v < (1u << ins.size()); ++v) {
    std::map<std::string, bool> m;
    for (std::size_t i = 0; i < ins.size(); ++i) m[ins[i]] = (v >> i) & 1;
    if (test::eval_netlist(a, m) != test::eval_netlist(b, m)) return true;
  }
  return false;
}

const std::map<std::string, std::string> kFlip = {
    {"AND2", "NAND2"}, {"NAND2", "AND2"}, {"OR2", "NOR2"},   {"NOR2", "OR2"},
    {"XOR2", "XNOR2"}, {"XNOR2", "XOR2"}, {"AOI32", "OAI32"}, {"OAI32", "AOI32"},
};

}  // namespace

TEST_CASE("small exhaustive checks") {
  const Library lib = base_library();
  const EquivVerdict same = exhaustive_equiv(gate("AND2"), gate("AND2"), lib);
  CHECK(same.equivalent);
  CHECK(same.line() == "EQUIV vector=- port=-");
  const EquivVerdict diff = exhaustive_equiv(gate("AND2"), gate("OR2"), lib);
  CHECK_FALSE(diff.equivalent);
  CHECK(diff.vector == "10");  // a=1, b=0
  CHECK(diff.port == "y");
  CHECK(diff.line() == "DIFF vector=10 port=y");
}

TEST_CASE("errors for port mismatch and input bound") {
  const Library lib = base_library();
  const Netlist other = parse_netlist("module g (a, c, y);\ninput a;\ninput c;\noutput y;\nAND2 u (.A(a), .B(c), .Y(y));\nendmodule\n", lib);
  CHECK_THROWS_AS(exhaustive_equiv(gate("AND2"), other, lib), EquivalenceError);
  CHECK_THROWS_AS(exhaustive_equiv(gate("AND2"), gate("AND2"), lib, 1), EquivalenceError);
}

TEST_CASE("DES cut cones against the projected dual-rail design") {
  const Library lib = base_library();
  const Netlist n = build_des_module(DutConfig{}, lib);
  const DualRailNetlist d = substitute_cells(n, WddlLibrary(lib));
  const CutPorts cut = cut_ports(n, lib);
  CHECK(cut.inputs.size() >= 10);
  CHECK(exhaustive_equiv(n, project_true_rail(d), lib).equivalent);
}

TEST_CASE("co-simulation of the DES module") {
  const Library lib = base_library();
  const Netlist n = build_des_module(DutConfig{}, lib);
  DualRailNetlist d = substitute_cells(n, WddlLibrary(lib));
  CHECK(cosim_equiv(n, lib, d, 1000, 1).equivalent);
  CHECK(cosim_equiv(n, lib, d, 0, 1).equivalent);

  // Swap the rails an output register drives.
  for (auto& inst : d.instances)
    if (inst.name == "out_reg1")
      for (auto& p : inst.pins)
        if (p.pin == "Q") p.pair.swapped = !p.pair.swapped;
  const EquivVerdict v = cosim_equiv(n, lib, d, 1000, 1);
  CHECK_FALSE(v.equivalent);
  CHECK(v.port == "out[1]");
  REQUIRE(v.cycle.has_value());
  CHECK(*v.cycle >= 0);
  CHECK(v.line().find("cycle=") != std::string::npos);
}

TEST_CASE("reflexive and symmetric on the corpus") {
  const Library lib = base_library();
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const Netlist a = test::random_netlist(s, 8, 20);
    CHECK(exhaustive_equiv(a, a, lib).equivalent);
    Netlist b = a;
    b.instances.front().cell = kFlip.count(b.instances.front().cell) ? kFlip.at(b.instances.front().cell) : "INV";
    if (b.instances.front().cell == "INV" && a.instances.front().cell == "INV") continue;
    if (!validate_netlist(b, lib).empty()) continue;
    const EquivVerdict ab = exhaustive_equiv(a, b, lib), ba = exhaustive_equiv(b, a, lib);
    CHECK(ab.equivalent == ba.equivalent);
    CHECK(ab.vector == ba.vector);
  }
}

TEST_CASE("every gate-function flip is judged like the oracle judges it") {
  const Library lib = base_library();
  int mutants = 0, detected = 0;
  std::mt19937_64 rng(99);
  for (std::uint64_t s = 1; s <= 40; ++s) {
    const Netlist a = test::random_netlist(s, 10, 30);
    std::vector<std::size_t> flippable;
    for (std::size_t i = 0; i < a.instances.size(); ++i)
      if (kFlip.count(a.instances[i].cell)) flippable.push_back(i);
    if (flippable.empty()) continue;
    Netlist b = a;
    auto& inst = b.instances[flippable[rng() % flippable.size()]];
    inst.cell = kFlip.at(inst.cell);
    ++mutants;
    const bool differs = oracle_differs(a, b);
    const EquivVerdict v = exhaustive_equiv(a, b, lib);
    CHECK(v.equivalent == !differs);
    if (!v.equivalent) {
      ++detected;
      const auto m = assignment(a, v.vector);
      CHECK(test::eval_netlist(a, m).at(v.port) != test::eval_netlist(b, m).at(v.port));
    }
  }
  CHECK(mutants >= 30);
  CHECK(detected >= mutants * 3 / 4);
}
