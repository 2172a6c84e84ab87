// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wddl/library.hpp"

namespace wddl {

/// Geometry flavour. Fat wires are two fine tracks wide and sit on the coarse
/// grid (even fine coordinates); differential wires are one track wide;
/// single-ended wires are one track wide on the coarse grid.
enum class Variant { Single, Fat, Differential };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

enum class Direction { Horizontal, Vertical };

/// All coordinates are fine-grid units.
struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct Layer {
  std::string name;
  Direction direction = Direction::Horizontal;
  int width = 1;
  int pitch = 1;
  friend bool operator==(const Layer&, const Layer&) = default;
};

enum class PinUse { Input, Output };

struct MacroPin {
  std::string name;
  Point at;
  PinUse use = PinUse::Input;
  friend bool operator==(const MacroPin&, const MacroPin&) = default;
};

struct Macro {
  std::string name;
  int width = 0;
  int height = 0;
  std::vector<MacroPin> pins;

  const MacroPin* find_pin(std::string_view pin) const;
  friend bool operator==(const Macro&, const Macro&) = default;
};

struct LibraryGeometry {
  Variant variant = Variant::Fat;
  std::vector<Layer> layers;
  std::vector<Macro> macros;

  const Macro* find(std::string_view name) const;
  const Macro& at(std::string_view name) const;
  const Layer* layer(std::string_view name) const;
  /// Width of a routing wire in fine units.
  int wire_width() const { return variant == Variant::Fat ? 2 : 1; }
  friend bool operator==(const LibraryGeometry&, const LibraryGeometry&) = default;
};

/// Fine-grid offset from a fat pin to the false-rail pin, and from a fat
/// wire to its false-rail copy.
inline constexpr Point kFalseRailOffset{1, 1};

/// Routing grid pitch in fine units: one coarse track is two fine tracks.
inline constexpr int kCoarse = 2;
/// Macro height in coarse tracks; pins sit on coarse row 1.
inline constexpr int kMacroRows = 4;

struct LibraryPair {
  LibraryGeometry fat;
  LibraryGeometry diff;
};

/// Paired macro sets for `cells` (fat cell functions such as `W_AND2`). Pin
/// `k` (inputs, then the output) of a fat macro is at fine (4k, 2); the
/// differential macro has `P_t` there and `P_f` at (4k+1, 3). Macro width is
/// max(2 * pins, ceil(area / 2)) coarse tracks. Clock pins are not drawn.
LibraryPair build_libraries(const Library& cells);

/// Single-ended macros with the same pin rule, used by the reference flow.
LibraryGeometry build_single_library(const Library& cells);

struct Segment {
  std::string layer;
  int width = 1;
  Point a;
  Point b;

  int length() const;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Via {
  Point at;
  std::string lower;
  std::string upper;
  friend bool operator==(const Via&, const Via&) = default;
};

struct NetPin {
  std::string inst;
  std::string pin;
  friend bool operator==(const NetPin&, const NetPin&) = default;
};

struct DesignNet {
  std::string name;
  std::vector<NetPin> pins;
  std::vector<Segment> segments;
  std::vector<Via> vias;

  int wire_length() const;
  friend bool operator==(const DesignNet&, const DesignNet&) = default;
};

struct Component {
  std::string name;
  std::string macro;
  Point at;
  std::string orient = "N";
  friend bool operator==(const Component&, const Component&) = default;
};

/// A placed design, optionally with routing. Ports are not drawn; nets list
/// instance pins only.
struct Design {
  std::string name;
  Variant variant = Variant::Fat;
  Point die_lo;
  Point die_hi;
  std::vector<Component> components;
  std::vector<DesignNet> nets;

  const Component* find_component(std::string_view name) const;
  const DesignNet* find_net(std::string_view name) const;
  /// Distinct component y positions, ascending.
  std::vector<int> rows() const;
  std::size_t segment_count() const;
  /// Absolute fine-grid location of a component pin.
  Point pin_location(const LibraryGeometry& lib, const NetPin& p) const;

  friend bool operator==(const Design&, const Design&) = default;
};

using PlacedDesign = Design;
using RoutedDesign = Design;

std::string emit_lef(const LibraryGeometry& lib);
LibraryGeometry parse_lef(std::string_view text);

std::string emit_def(const Design& d);
/// The variant is taken from `lib`; every component macro must exist there.
Design parse_def(std::string_view text, const LibraryGeometry& lib);

}  // namespace wddl
