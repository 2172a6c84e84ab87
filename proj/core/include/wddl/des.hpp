// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "wddl/library.hpp"
#include "wddl/netlist.hpp"

namespace wddl {

/// Shape of the DPA test module: a registered P_L/P_R input stage, a key
/// addition, one DES S-box and a registered output.
struct DutConfig {
  int key = 46;
  int pl_width = 4;
  int pr_width = 6;
  /// DES S-box number; only S1 is provided.
  int sbox = 1;
  int samples_per_cycle = 800;

  /// Throws ConfigError when out of range.
  void validate() const;
};

/// DES S1 lookup. Bit 5 of `input` is the first S-box input bit; the row is
/// taken from the outer bits and the column from the middle four.
int des_s1(int input);

/// Builds the test module. Every P_R bit is registered twice, as the bit and
/// as its complement through an input inverter. The key is fixed at
/// generation time: a key bit of 1 swaps which register of the pair is the
/// positive S-box literal. The S-box is an unoptimized sum of minterms: a
/// shared minterm decoder built from 2-bit predecoders, then one balanced OR2
/// tree per output bit.
///
/// Ports: clk, pl[pl_width], pr[pr_width], out[pl_width].
Netlist build_des_module(const DutConfig& cfg, const Library& lib);

/// Software model of one encryption through the module.
int des_module_reference(int key, int pl, int pr);

}  // namespace wddl
