// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>

#include "wddl/geometry.hpp"
#include "wddl/netlist.hpp"

namespace wddl {

struct PlaceOptions {
  /// Die width / height.
  double aspect = 1.0;
  /// Maximum ratio of macro area to die area, in (0, 1].
  double fill = 0.7;
  std::uint64_t seed = 1;
  /// Fixed die size in coarse tracks instead of deriving it from `fill`.
  std::optional<Point> die;
  /// Annealing passes that swap equal-size cells to shorten wires; 0 keeps
  /// the greedy rows.
  int anneal_passes = 60;
};

/// Row placement of `n` with macros from `lib`.
///
/// The die is the smallest with width = round(aspect * height) whose macro
/// area fits under `fill` and whose rows hold every cell. Cells are ordered
/// greedily by connectivity to the cells already ordered (ties broken by a
/// seeded shuffle) and filled into rows in snake order. Spare width and
/// height are spread evenly between cells and rows. Seeded annealing then
/// swaps cells of equal size to reduce half-perimeter wire length, which
/// keeps every position legal. Throws PlacementError.
PlacedDesign place(const Netlist& n, const LibraryGeometry& lib, const PlaceOptions& opts);

}  // namespace wddl
