// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "wddl/library.hpp"
#include "wddl/netlist.hpp"
#include "wddl/substitute.hpp"

namespace wddl {

struct EquivVerdict {
  bool equivalent = true;
  /// Counterexample input bits, first input first; empty when equivalent.
  std::string vector;
  std::string port;
  /// Cycle of the first mismatch (co-simulation only).
  std::optional<int> cycle;

  /// `EQUIV vector=- port=-` or `DIFF vector=<bits> port=<name>`, plus
  /// ` cycle=<n>` for a co-simulation mismatch.
  std::string line() const;
};

/// Combinational inputs and outputs after cutting registers: each register
/// `r` adds the pseudo-input `r.Q` and the pseudo-output `r.D`.
struct CutPorts {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};
CutPorts cut_ports(const Netlist& n, const Library& lib);

/// Exhaustive comparison of two netlists with registers cut. Outputs are
/// grouped by the union of their input cones in both designs and each group
/// is swept over all assignments of its support; `max_inputs` bounds the
/// support size. The counterexample is the smallest differing vector, read
/// with the first input as least significant bit. Throws EquivalenceError on
/// a port mismatch or a support over the bound.
EquivVerdict exhaustive_equiv(const Netlist& a, const Netlist& b, const Library& lib, int max_inputs = 20);

/// Runs `a` single-ended and `b` dual-rail on the same random stimulus and
/// compares every output with the true rail after each evaluate phase. A
/// register alarm in `b` is also a mismatch. Throws EquivalenceError when
/// the port names differ.
EquivVerdict cosim_equiv(const Netlist& a, const Library& lib, const DualRailNetlist& b, int cycles,
                         std::uint64_t seed);

}  // namespace wddl
