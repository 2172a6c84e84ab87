// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wddl/geometry.hpp"

namespace wddl {

enum class DrcKind { Short, Open, OffGrid, NonAxis, WrongDirection, WrongWidth, OutsideDie, Overlap, UnknownLayer };

std::string_view to_string(DrcKind kind);

struct DrcViolation {
  DrcKind kind;
  std::string object;
  std::string message;
};

/// Rasterizes pins, wires and vias on the fine grid. A horizontal segment of
/// width w covers [x1, x2 + w - 1] x [y, y + w - 1]. Reports shorts between
/// nets, nets split into more than one connected piece, off-grid points,
/// non-axis-parallel or wrong-direction wires, metal outside the die and
/// overlapping components. Empty when clean.
std::vector<DrcViolation> check_drc(const Design& d, const LibraryGeometry& lib);

}  // namespace wddl
