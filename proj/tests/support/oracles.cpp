// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <functional>
#include <random>
#include <stdexcept>

#include "wddl/library.hpp"

namespace wddl::test {

namespace {

constexpr int kS1[4][16] = {
    {14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7},
    {0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8},
    {4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0},
    {15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13},
};

}  // namespace

int fips_s1(int row, int col) { return kS1[row][col]; }

int fips_s1_of(int x) {
  const int b1 = (x >> 5) & 1, b6 = x & 1;
  return fips_s1(b1 * 2 + b6, (x >> 1) & 0xF);
}

int des_oracle(int key, int pl, int pr) { return fips_s1_of(pr ^ key) ^ pl; }

bool cell_truth(const std::string& c, const std::vector<bool>& in) {
  if (c == "AND2") return in[0] && in[1];
  if (c == "OR2") return in[0] || in[1];
  if (c == "NAND2") return !(in[0] && in[1]);
  if (c == "NOR2") return !(in[0] || in[1]);
  if (c == "XOR2") return in[0] != in[1];
  if (c == "XNOR2") return in[0] == in[1];
  if (c == "INV") return !in[0];
  if (c == "AOI32") return !((in[0] && in[1] && in[2]) || (in[3] && in[4]));
  if (c == "OAI32") return !((in[0] || in[1] || in[2]) && (in[3] || in[4]));
  throw std::invalid_argument("no truth function for " + c);
}

std::map<std::string, bool> eval_netlist(const Netlist& n, const std::map<std::string, bool>& inputs,
                                         const std::map<std::string, bool>& state) {
  const Library lib = base_library();
  std::map<std::string, const Instance*> driver;
  for (const auto& inst : n.instances) driver[*inst.net_of(lib.at(inst.cell).output)] = &inst;
  std::map<std::string, std::string> alias;
  for (const auto& a : n.assigns) alias[a.lhs] = a.rhs;
  std::map<std::string, bool> memo;
  std::function<bool(const std::string&)> value = [&](const std::string& net) -> bool {
    if (auto it = memo.find(net); it != memo.end()) return it->second;
    bool v = false;
    if (auto it = inputs.find(net); it != inputs.end()) {
      v = it->second;
    } else if (auto a = alias.find(net); a != alias.end()) {
      v = value(a->second);
    } else if (auto d = driver.find(net); d != driver.end()) {
      const Instance& inst = *d->second;
      const CellFunction& cell = lib.at(inst.cell);
      if (cell.clock) {
        auto s = state.find(inst.name);
        v = s != state.end() && s->second;
      } else {
        std::vector<bool> in;
        for (const auto& pin : cell.inputs) in.push_back(value(*inst.net_of(pin)));
        v = cell_truth(inst.cell, in);
      }
    } else {
      throw std::invalid_argument("undriven net " + net);
    }
    memo[net] = v;
    return v;
  };
  std::map<std::string, bool> out;
  for (const auto& bit : n.output_bits()) out[bit] = value(bit);
  for (const auto& inst : n.instances) {
    const CellFunction& cell = lib.at(inst.cell);
    if (cell.clock) out[inst.name + ".D"] = value(*inst.net_of("D"));
  }
  return out;
}

namespace {

const std::vector<std::pair<std::string, int>> kCells = {
    {"AND2", 2}, {"OR2", 2},  {"NAND2", 2}, {"NOR2", 2},  {"XOR2", 2},
    {"XNOR2", 2}, {"INV", 1}, {"AOI32", 5}, {"OAI32", 5},
};
const std::vector<std::string> kPins2 = {"A", "B"};
const std::vector<std::string> kPins5 = {"A1", "A2", "A3", "B1", "B2"};

Netlist random_design(std::uint64_t seed, int max_inputs, int max_gates, int registers) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Netlist n;
  n.name = "rnd" + std::to_string(seed);
  const int k = pick(2, max_inputs);
  const int g = pick(1, max_gates);
  std::vector<std::string> nets;
  for (int i = 0; i < k; ++i) {
    n.ports.push_back({"i" + std::to_string(i), PortDir::Input, 1, false});
    nets.push_back("i" + std::to_string(i));
  }
  if (registers > 0) {
    n.ports.push_back({"clk", PortDir::Input, 1, false});
    n.clock = "clk";
    for (int r = 0; r < registers; ++r) {
      n.wires.push_back({"q" + std::to_string(r), 1, false});
      nets.push_back("q" + std::to_string(r));
    }
  }
  std::map<std::string, int> uses;
  std::vector<std::string> gate_outs;
  for (int i = 0; i < g; ++i) {
    const auto& [cell, arity] = kCells[static_cast<std::size_t>(pick(0, static_cast<int>(kCells.size()) - 1))];
    Instance inst{"g" + std::to_string(i), cell, {}};
    const auto& pins = arity == 5 ? kPins5 : kPins2;
    for (int p = 0; p < arity; ++p) {
      const std::string& src = nets[static_cast<std::size_t>(pick(0, static_cast<int>(nets.size()) - 1))];
      inst.pins.push_back({pins[static_cast<std::size_t>(p)], src});
      ++uses[src];
    }
    const std::string out = "n" + std::to_string(i);
    inst.pins.push_back({"Y", out});
    n.instances.push_back(std::move(inst));
    nets.push_back(out);
    gate_outs.push_back(out);
  }
  for (int r = 0; r < registers; ++r) {
    const std::string& d = gate_outs[static_cast<std::size_t>(pick(0, static_cast<int>(gate_outs.size()) - 1))];
    ++uses[d];
    n.instances.push_back({"r" + std::to_string(r), "DFF", {{"D", d}, {"CK", "clk"}, {"Q", "q" + std::to_string(r)}}});
  }
  // Unused gate outputs become ports; internal ones stay wires.
  int outs = 0;
  for (const auto& o : gate_outs) {
    if (uses[o] == 0 || (outs == 0 && o == gate_outs.back())) {
      n.ports.push_back({o, PortDir::Output, 1, false});
      ++outs;
    } else {
      n.wires.push_back({o, 1, false});
    }
  }
  return n;
}

}  // namespace

Netlist random_netlist(std::uint64_t seed, int max_inputs, int max_gates) {
  return random_design(seed, max_inputs, max_gates, 0);
}

Netlist random_sequential(std::uint64_t seed, int max_inputs, int max_gates) {
  std::mt19937_64 rng(seed ^ 0x5eed);
  return random_design(seed, max_inputs, max_gates, std::uniform_int_distribution<int>(1, 4)(rng));
}

void inject_non_monotone(DualRailNetlist& d, std::size_t index, int kind) {
  DualInstance& inst = d.instances.at(index);
  WddlCell cell = d.cell_of(inst);
  if (cell.sequential) throw std::invalid_argument("register instance");
  const int k = static_cast<int>(cell.inputs.size());
  std::vector<Expr> t;
  for (int i = 0; i < k; ++i) t.push_back(Expr::var(2 * i));
  Expr f = Expr::constant(false);
  switch (kind % 4) {
    case 0: f = k > 1 ? Expr::negate(Expr::conj(t)) : Expr::negate(t[0]); break;
    case 1: f = k > 1 ? Expr::negate(Expr::disj(t)) : Expr::negate(t[0]); break;
    case 2: f = Expr::negate(t[0]); break;
    default: f = k > 1 ? Expr::negate(Expr::exclusive(t[0], t[1])) : Expr::negate(t[0]); break;
  }
  cell.base = "MUT" + std::to_string(kind % 4) + "_" + cell.base;
  cell.true_logic = f;
  cell.false_logic = Expr::negate(f);
  d.cells[cell.base] = cell;
  inst.base = cell.base;
}

}  // namespace wddl::test
