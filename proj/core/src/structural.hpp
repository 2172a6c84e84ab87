// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

// Syntax-only reader for the structural netlist text format. Shared by the
// single-ended and dual-rail netlist parsers.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wddl/netlist.hpp"

namespace wddl::detail {

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct RawInstance {
  Instance inst;
  SourcePos pos;
};

struct RawModule {
  std::string name;
  std::vector<Port> ports;
  std::vector<Wire> wires;
  std::vector<RawInstance> instances;
  std::vector<Assign> assigns;
};

RawModule parse_structural(std::string_view text);

/// Writes `module ... endmodule`, one statement per line.
std::string emit_structural(const std::string& name, const std::vector<Port>& ports,
                            const std::vector<Wire>& wires,
                            const std::vector<Instance>& instances,
                            const std::vector<Assign>& assigns);

}  // namespace wddl::detail
