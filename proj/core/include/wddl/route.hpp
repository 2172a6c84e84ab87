// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "wddl/geometry.hpp"

namespace wddl {

struct RouteOptions {
  /// Free coarse tracks required between a wire and any other net on the
  /// same layer (0 = dense).
  int spacing = 0;
  /// Rip-up-and-reroute rounds before giving up.
  int max_rounds = 40;
  /// Search window margin around a net's bounding box, in coarse tracks;
  /// it doubles every round.
  int window_margin = 4;
  /// Search cost of a layer change relative to one track step.
  int via_cost = 2;
};

/// Maze routing on the coarse grid, M1 horizontal and M2 vertical. Macros
/// block their pin row on M1; pins are reached through a via from M2.
///
/// Every round routes nets in order of bounding-box half-perimeter, largest
/// first, ties by name, each by a lowest-cost search from its partial tree.
/// A node used by another net, or closer than `spacing` to one, is allowed
/// but costs more each round, and contested nodes keep a growing history
/// cost. After a round only the nets involved in a conflict are ripped up
/// and rerouted. When conflicts remain after `max_rounds`, RoutingError
/// names the first such net. Accepts fat and single-ended designs.
RoutedDesign route(const PlacedDesign& placed, const LibraryGeometry& lib, const RouteOptions& opts = {});

}  // namespace wddl
