// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wddl/netlist.hpp"
#include "wddl/substitute.hpp"

namespace wddl::test {

/// DES S-box 1 as printed in FIPS 46-3, rows 0..3, columns 0..15.
int fips_s1(int row, int col);
/// S1 of a 6-bit input b1..b6 (b1 = MSB): row b1b6, column b2b3b4b5.
int fips_s1_of(int six_bits);
/// out = S1(pr ^ key) ^ pl, computed from the table above.
int des_oracle(int key, int pl, int pr);

/// Truth of one base-library cell, written out per cell name.
bool cell_truth(const std::string& cell, const std::vector<bool>& in);

/// Combinational evaluation of a netlist by recursive descent from the
/// outputs, using `cell_truth`. Register outputs come from `state`.
std::map<std::string, bool> eval_netlist(const Netlist& n, const std::map<std::string, bool>& inputs,
                                         const std::map<std::string, bool>& state = {});

/// Random combinational netlist over the combinational base cells, with
/// 2..max_inputs inputs and 1..max_gates gates. Every gate output that
/// feeds nothing is an output port.
Netlist random_netlist(std::uint64_t seed, int max_inputs = 12, int max_gates = 40);

/// Like `random_netlist` plus a few registers fed by gate outputs and
/// feeding later gates.
Netlist random_sequential(std::uint64_t seed, int max_inputs = 8, int max_gates = 30);

/// Replaces the compound on instance `index` (a combinational one) with a
/// raw inverting single-ended gate on its true rails. Such a gate outputs 1
/// when all its inputs are 0. `kind` picks NAND, NOR, INV or XNOR.
void inject_non_monotone(DualRailNetlist& d, std::size_t index, int kind);

}  // namespace wddl::test
