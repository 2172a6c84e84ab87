// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/des.hpp"

#include <array>
#include <string>

#include "wddl/error.hpp"

namespace wddl {

namespace {

// FIPS 46-3, S1.
constexpr std::array<std::array<int, 16>, 4> kS1 = {{
    {14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7},
    {0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8},
    {4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0},
    {15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13},
}};

std::string bit(const std::string& bus, int i) { return bus + "[" + std::to_string(i) + "]"; }

}  // namespace

void DutConfig::validate() const {
  if (key < 0 || key > 63) throw ConfigError("dut key must be in [0,63], got " + std::to_string(key));
  if (sbox != 1) throw ConfigError("only DES S-box 1 is available, got S" + std::to_string(sbox));
  if (pr_width != 6) throw ConfigError("pr_width must match the S-box input arity (6)");
  if (pl_width != 4) throw ConfigError("pl_width must match the S-box output arity (4)");
  if (samples_per_cycle < 1) throw ConfigError("samples_per_cycle must be positive");
}

int des_s1(int input) {
  const int row = ((input >> 4) & 2) | (input & 1);
  const int col = (input >> 1) & 0xF;
  return kS1[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
}

int des_module_reference(int key, int pl, int pr) { return des_s1((pr ^ key) & 63) ^ (pl & 15); }

Netlist build_des_module(const DutConfig& cfg, const Library& lib) {
  cfg.validate();
  for (const char* c : {"AND2", "OR2", "INV", "XOR2", "DFF"})
    if (!lib.find(c)) throw ConfigError(std::string("library lacks cell ") + c);
  const CellFunction& dff = lib.at("DFF");

  Netlist n;
  n.name = "des_module";
  n.clock = "clk";
  n.ports = {
      {"clk", PortDir::Input, 1, false},
      {"pl", PortDir::Input, cfg.pl_width, true},
      {"pr", PortDir::Input, cfg.pr_width, true},
      {"out", PortDir::Output, cfg.pl_width, true},
  };
  n.wires = {
      {"pl_q", cfg.pl_width, true},
      {"pr_q", cfg.pr_width, true},
      {"sout", cfg.pl_width, true},
      {"o", cfg.pl_width, true},
  };

  auto add = [&](std::string cell, std::string name, std::vector<PinBinding> pins) {
    n.instances.push_back({std::move(name), std::move(cell), std::move(pins)});
  };
  auto reg = [&](const std::string& name, const std::string& d, const std::string& q) {
    add(dff.name, name, {{dff.inputs[0], d}, {dff.output, q}, {*dff.clock, "clk"}});
  };
  auto wire = [&](const std::string& name) { n.wires.push_back({name, 1, false}); };

  for (int i = 0; i < cfg.pl_width; ++i) reg("pl_reg" + std::to_string(i), bit("pl", i), bit("pl_q", i));
  // Each P_R bit is held as a complementary register pair. The key bit picks
  // which register of the pair is the positive S-box literal.
  std::vector<std::string> pos(static_cast<std::size_t>(cfg.pr_width));
  std::vector<std::string> neg(static_cast<std::size_t>(cfg.pr_width));
  for (int i = 0; i < cfg.pr_width; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const std::string d_n = "pr_n" + std::to_string(i);
    const std::string q_n = "pr_qn" + std::to_string(i);
    wire(d_n);
    wire(q_n);
    reg("pr_reg" + std::to_string(i), bit("pr", i), bit("pr_q", i));
    add("INV", "pr_inv" + std::to_string(i), {{"A", bit("pr", i)}, {"Y", d_n}});
    reg("pr_regn" + std::to_string(i), d_n, q_n);
    const bool flip = (cfg.key >> i) & 1;
    pos[k] = flip ? q_n : bit("pr_q", i);
    neg[k] = flip ? bit("pr_q", i) : q_n;
  }

  // Minterm decoder: three 2-bit predecoders, their 16 upper products, then
  // one AND2 per minterm with a non-zero S-box output.
  auto and2 = [&](const std::string& name, const std::string& a, const std::string& b) {
    wire(name);
    add("AND2", "u_" + name, {{"A", a}, {"B", b}, {"Y", name}});
    return name;
  };
  auto lit = [&](int i, bool one) {
    const auto k = static_cast<std::size_t>(i);
    return one ? pos[k] : neg[k];
  };
  auto predecode = [&](int hi, int p) {
    return "pd" + std::to_string(hi) + "_" + std::to_string(p);
  };
  for (int hi : {5, 3, 1})
    for (int p = 0; p < 4; ++p) and2(predecode(hi, p), lit(hi, (p >> 1) & 1), lit(hi - 1, p & 1));
  std::vector<std::string> upper(16);
  std::vector<std::vector<std::string>> terms(static_cast<std::size_t>(cfg.pl_width));
  for (int v = 0; v < 64; ++v) {
    const int s = des_s1(v);
    if (s == 0) continue;
    const int u = v >> 2;
    auto& up = upper[static_cast<std::size_t>(u)];
    if (up.empty()) up = and2("pu" + std::to_string(u), predecode(5, u >> 2), predecode(3, u & 3));
    const std::string m = and2("m" + std::to_string(v), up, predecode(1, v & 3));
    for (int j = 0; j < cfg.pl_width; ++j)
      if ((s >> j) & 1) terms[static_cast<std::size_t>(j)].push_back(m);
  }

  // Balanced OR tree per output bit.
  for (int j = 0; j < cfg.pl_width; ++j) {
    std::vector<std::string> level = terms[static_cast<std::size_t>(j)];
    int counter = 0;
    while (level.size() > 1) {
      std::vector<std::string> next;
      for (std::size_t k = 0; k + 1 < level.size(); k += 2) {
        const bool last = level.size() == 2;
        const std::string out = last ? bit("sout", j) : "s" + std::to_string(j) + "_" + std::to_string(counter);
        if (!last) wire(out);
        add("OR2", "or" + std::to_string(j) + "_" + std::to_string(counter), {{"A", level[k]}, {"B", level[k + 1]}, {"Y", out}});
        ++counter;
        next.push_back(out);
      }
      if (level.size() % 2) next.push_back(level.back());
      level = std::move(next);
    }
    if (level.size() == 1 && level.front() != bit("sout", j)) n.assigns.push_back({bit("sout", j), level.front()});
  }

  for (int j = 0; j < cfg.pl_width; ++j) {
    add("XOR2", "outx" + std::to_string(j), {{"A", bit("sout", j)}, {"B", bit("pl_q", j)}, {"Y", bit("o", j)}});
    reg("out_reg" + std::to_string(j), bit("o", j), bit("out", j));
  }
  return n;
}

}  // namespace wddl
