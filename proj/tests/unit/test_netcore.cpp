// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <string>

#include <doctest.h>

#include "oracles.hpp"
#include "wddl/des.hpp"
#include "wddl/error.hpp"
#include "wddl/gatesim.hpp"
#include "wddl/library.hpp"
#include "wddl/netlist.hpp"

using namespace wddl;

namespace {

const char* kAnd =
    "module top (a, b, y);\n"
    "input a;\n"
    "input b;\n"
    "output y;\n"
    "AND2 u1 (.A(a), .B(b), .Y(y));\n"
    "endmodule\n";

bool has_kind(const std::vector<Diagnostic>& d, DiagnosticKind k) {
  for (const auto& x : d)
    if (x.kind == k) return true;
  return false;
}

}  // namespace

TEST_CASE("library text round-trips and keeps the ten base cells") {
  const Library lib = base_library();
  for (const char* c : {"AND2", "OR2", "NAND2", "NOR2", "XOR2", "XNOR2", "INV", "AOI32", "OAI32", "DFF"})
    CHECK(lib.find(c) != nullptr);
  const Library again = parse_library(emit_library(lib));
  CHECK(emit_library(again) == emit_library(lib));
  CHECK(again.at("DFF").clock.has_value());
}

TEST_CASE("library cell logic matches written-out truth tables") {
  const Library lib = base_library();
  for (const auto& c : lib.cells()) {
    if (c.clock) continue;
    const int k = static_cast<int>(c.inputs.size());
    for (int v = 0; v < (1 << k); ++v) {
      std::vector<std::uint8_t> bits;
      std::vector<bool> in;
      for (int i = 0; i < k; ++i) {
        bits.push_back(static_cast<std::uint8_t>((v >> i) & 1));
        in.push_back((v >> i) & 1);
      }
      CHECK_MESSAGE(c.logic.eval_bit(bits) == test::cell_truth(c.name, in), c.name << " v=" << v);
    }
  }
}

TEST_CASE("one-gate module parses to one instance and three nets") {
  const Netlist n = parse_netlist(kAnd, base_library());
  CHECK(n.instances.size() == 1);
  CHECK(n.nets().size() == 3);
  CHECK(validate_netlist(n, base_library()).empty());
}

TEST_CASE("passthrough module with no instances") {
  const Netlist n = parse_netlist("module p (a, y);\ninput a;\noutput y;\nassign y = a;\nendmodule\n", base_library());
  CHECK(n.instances.empty());
  CHECK(n.assigns.size() == 1);
  CHECK(validate_netlist(n, base_library()).empty());
}

TEST_CASE("unknown cell is reported by name") {
  const std::string text = "module t (a, y);\ninput a;\noutput y;\nFOO9 u (.A(a), .Y(y));\nendmodule\n";
  try {
    (void)parse_netlist(text, base_library());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("FOO9") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry a line and column") {
  try {
    (void)parse_netlist("module t (a);\ninput a;\ninput $b;\nendmodule\n", base_library());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 7);
  }
}

TEST_CASE("emit writes one instance statement and bus declarations") {
  const Netlist n = parse_netlist(kAnd, base_library());
  const std::string text = emit_netlist(n);
  std::size_t count = 0;
  for (std::size_t p = text.find("AND2 "); p != std::string::npos; p = text.find("AND2 ", p + 1)) ++count;
  CHECK(count == 1);

  const std::string bus = "module b (a, y);\ninput [2:0] a;\noutput y;\nAND2 u (.A(a[0]), .B(a[2]), .Y(y));\nendmodule\n";
  CHECK(emit_netlist(parse_netlist(bus, base_library())).find("input [2:0] a;") != std::string::npos);
}

TEST_CASE("validation finds multiple drivers and combinational cycles") {
  const Library lib = base_library();
  Netlist n = parse_netlist(kAnd, lib);
  n.instances.push_back({"u2", "OR2", {{"A", "a"}, {"B", "b"}, {"Y", "y"}}});
  const auto d = validate_netlist(n, lib);
  CHECK(has_kind(d, DiagnosticKind::MultipleDrivers));

  Netlist loop;
  loop.name = "loop";
  loop.ports = {{"i", PortDir::Input, 1, false}, {"o", PortDir::Output, 1, false}};
  loop.wires = {{"a", 1, false}, {"b", 1, false}};
  loop.instances = {{"x", "AND2", {{"A", "i"}, {"B", "b"}, {"Y", "a"}}},
                    {"y", "INV", {{"A", "a"}, {"Y", "b"}}},
                    {"z", "INV", {{"A", "a"}, {"Y", "o"}}}};
  const auto c = validate_netlist(loop, lib);
  CHECK(has_kind(c, DiagnosticKind::CombinationalCycle));
  std::size_t cycles = 0;
  for (const auto& x : c) cycles += x.kind == DiagnosticKind::CombinationalCycle;
  CHECK(cycles == 1);

  // The same loop through a register is legal.
  loop.ports.push_back({"clk", PortDir::Input, 1, false});
  loop.clock = "clk";
  loop.instances[1] = {"y", "DFF", {{"D", "a"}, {"CK", "clk"}, {"Q", "b"}}};
  CHECK(validate_netlist(loop, lib).empty());
}

TEST_CASE("round trip holds for the random corpus") {
  const Library lib = base_library();
  for (std::uint64_t s = 1; s <= 40; ++s) {
    const Netlist n = s % 2 ? test::random_netlist(s) : test::random_sequential(s);
    CHECK(validate_netlist(n, lib).empty());
    const Netlist back = parse_netlist(emit_netlist(n), lib);
    CHECK(back.instances == n.instances);
    CHECK(emit_netlist(back) == emit_netlist(n));
  }
}

TEST_CASE("FIPS S1 spot values") {
  CHECK(test::fips_s1_of(0) == 14);
  CHECK(des_s1(0) == 14);
  for (int x = 0; x < 64; ++x) CHECK(des_s1(x) == test::fips_s1_of(x));
}

TEST_CASE("DES module examples and round trip") {
  const Library lib = base_library();
  DutConfig cfg;
  const Netlist n = build_des_module(cfg, lib);
  CHECK(validate_netlist(n, lib).empty());
  const Netlist back = parse_netlist(emit_netlist(n), lib);
  CHECK(back.instances.size() == n.instances.size());
  CHECK(des_module_reference(46, 0, 46) == 14);
  CHECK(des_module_reference(0, 15, 0) == 1);
  CHECK_THROWS_AS(DutConfig{.key = 64}.validate(), ConfigError);
  CHECK_THROWS_AS(DutConfig{.sbox = 2}.validate(), ConfigError);
}

namespace {

// Sets registers from (pl, pr), then reads the output register after the
// next clock, evaluating the netlist with the independent evaluator.
int run_module(const Netlist& n, int pl, int pr) {
  std::map<std::string, bool> in;
  for (int b = 0; b < 4; ++b) in["pl[" + std::to_string(b) + "]"] = (pl >> b) & 1;
  for (int b = 0; b < 6; ++b) in["pr[" + std::to_string(b) + "]"] = (pr >> b) & 1;
  std::map<std::string, bool> state;
  for (int cycle = 0; cycle < 3; ++cycle) {
    const auto v = test::eval_netlist(n, in, state);
    std::map<std::string, bool> next;
    for (const auto& inst : n.instances)
      if (inst.cell == "DFF") next[inst.name] = v.at(inst.name + ".D");
    state = next;
  }
  const auto v = test::eval_netlist(n, in, state);
  int out = 0;
  for (int b = 0; b < 4; ++b) out |= v.at("out[" + std::to_string(b) + "]") << b;
  return out;
}

}  // namespace

TEST_CASE("DES module gate logic matches the table for every S-box input") {
  const Library lib = base_library();
  for (int key : {46, 0, 63}) {
    const Netlist n = build_des_module(DutConfig{.key = key}, lib);
    for (int x = 0; x < 64; ++x) CHECK(run_module(n, 0, x ^ key) == test::fips_s1_of(x));
    CHECK(run_module(n, 15, key) == (test::fips_s1_of(0) ^ 15));
  }
}

TEST_CASE("DES module simulated over 1000 random vectors matches software") {
  const Library lib = base_library();
  const int key = 46;
  const Netlist n = build_des_module(DutConfig{.key = key}, lib);
  const Simulator sim(n, lib);
  std::mt19937_64 rng(7);
  const std::size_t cycles = 1000;
  std::vector<InputVector> stim;
  std::vector<std::pair<int, int>> pts;
  const auto& names = sim.input_names();
  for (std::size_t c = 0; c < cycles + 2; ++c) {
    const int pl = static_cast<int>(rng() & 15), pr = static_cast<int>(rng() & 63);
    pts.emplace_back(pl, pr);
    InputVector v(names.size(), 0);
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto [base, bit] = split_bit(names[i]);
      if (base == "pl") v[i] = static_cast<std::uint8_t>((pl >> *bit) & 1);
      if (base == "pr") v[i] = static_cast<std::uint8_t>((pr >> *bit) & 1);
    }
    stim.push_back(v);
  }
  const SimResult r = sim.run(uniform_captable(sim, 1.0), stim);
  // Inputs of cycle c are registered at its end and the result at the end of c + 1.
  const auto& outs = sim.output_names();
  int mismatches = 0;
  for (std::size_t c = 0; c < cycles; ++c) {
    int out = 0;
    for (std::size_t i = 0; i < outs.size(); ++i) out |= r.outputs[c + 2][i] << *split_bit(outs[i]).second;
    mismatches += out != test::des_oracle(key, pts[c].first, pts[c].second);
  }
  CHECK(mismatches == 0);
}
