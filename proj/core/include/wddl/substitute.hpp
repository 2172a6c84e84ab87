// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wddl/netlist.hpp"
#include "wddl/wddl_cell.hpp"

namespace wddl {

/// Rail net name for a logical bit net: `x` -> `x_t`, `a[3]` -> `a_t[3]`.
std::string rail_name(std::string_view base, bool true_rail);

/// Inverse of `rail_name`: (base, true_rail), or nullopt for a non-rail name.
std::optional<std::pair<std::string, bool>> split_rail(std::string_view rail);

struct RailPair {
  std::string t;
  std::string f;
  friend bool operator==(const RailPair&, const RailPair&) = default;
};

/// A physical rail pair seen from one connection. `swapped` means the
/// logical true value travels on the pair's false rail.
struct PairRef {
  std::string base;
  bool swapped = false;

  RailPair rails() const;
  PairRef flipped() const { return {base, !swapped}; }
  friend bool operator==(const PairRef&, const PairRef&) = default;
};

struct DualPin {
  std::string pin;
  PairRef pair;
  friend bool operator==(const DualPin&, const DualPin&) = default;
};

struct DualInstance {
  std::string name;
  /// Base cell function name; the netlist cell is `W_<base>`.
  std::string base;
  /// Inputs in cell order, then the output.
  std::vector<DualPin> pins;

  const PairRef* pair_of_pin(std::string_view pin) const;
  friend bool operator==(const DualInstance&, const DualInstance&) = default;
};

/// `lhs` pair (unswapped) driven by `rhs`; used where a port or bus bit is an
/// alias of another pair.
struct PairAssign {
  std::string lhs;
  PairRef rhs;
  friend bool operator==(const PairAssign&, const PairAssign&) = default;
};

/// Differential netlist. Each bit of `ports` (except the clock) and of
/// `wires` is one physical rail pair. The clock and the precharge control are
/// single-ended global signals.
struct DualRailNetlist {
  std::string name;
  std::vector<Port> ports;
  std::vector<Wire> wires;
  std::optional<std::string> clock;
  std::string precharge = "pre";
  std::vector<DualInstance> instances;
  std::vector<PairAssign> assigns;
  /// Logical net of the source design -> the pair carrying it.
  std::map<std::string, PairRef> pair_of;
  /// Compound definitions by base name.
  std::map<std::string, WddlCell, std::less<>> cells;

  /// Physical pair base names: port bits (without the clock), then wire bits.
  std::vector<std::string> pairs() const;
  /// Logical input bits (clock excluded) and output bits.
  std::vector<std::string> input_bits() const;
  std::vector<std::string> output_bits() const;
  RailPair rails_of(std::string_view logical_net) const;
  const DualInstance* find_instance(std::string_view name) const;
  const WddlCell& cell_of(const DualInstance& inst) const;

  friend bool operator==(const DualRailNetlist&, const DualRailNetlist&) = default;
};

/// One-net-per-pair view for placement and routing. Cells are `W_<base>`
/// from `fat_library`; `rail_map` maps every fat net to its rails.
struct FatNetlist {
  Netlist netlist;
  std::map<std::string, RailPair> rail_map;
};

/// Replaces every gate by its compound. Inverters and buffers become rail
/// swaps and aliases. Throws SubstitutionError for a cell without a
/// counterpart and NetlistError for an invalid input.
DualRailNetlist substitute_cells(const Netlist& n, const WddlLibrary& wlib);

FatNetlist abstract_fat(const DualRailNetlist& d);

/// Fat cells carry the base function and the compound area.
Library fat_library(const WddlLibrary& wlib);

/// True-rail projection over the base library. Swapped connections become
/// inverters; register instances keep their names.
Netlist project_true_rail(const DualRailNetlist& d);

/// Sum of compound areas.
double dual_cell_area(const DualRailNetlist& d);

/// Structural text with `_t`/`_f` rails and `W_<BASE>` cells. Compound pins
/// are `P_t`/`P_f`; registers also bind the clock pin.
std::string emit_dual_netlist(const DualRailNetlist& d);

/// Reads `emit_dual_netlist` output. The precharge port is the one unpaired
/// input that is not the clock. `pair_of` maps each pair base to itself.
DualRailNetlist parse_dual_netlist(std::string_view text, const WddlLibrary& wlib);

/// Structural problems: wrong rail pairing, undriven or multiply driven
/// rails, unknown cells, inverters present. Empty when well formed.
std::vector<std::string> validate_dual(const DualRailNetlist& d);

}  // namespace wddl
