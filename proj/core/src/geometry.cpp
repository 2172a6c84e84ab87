// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "wddl/error.hpp"

namespace wddl {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Single:
      return "single";
    case Variant::Fat:
      return "fat";
    case Variant::Differential:
      return "differential";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  if (text == "single") return Variant::Single;
  if (text == "fat") return Variant::Fat;
  if (text == "differential") return Variant::Differential;
  throw ConfigError("unknown geometry variant '" + std::string(text) + "'");
}

const MacroPin* Macro::find_pin(std::string_view pin) const {
  for (const auto& p : pins)
    if (p.name == pin) return &p;
  return nullptr;
}

const Macro* LibraryGeometry::find(std::string_view name) const {
  for (const auto& m : macros)
    if (m.name == name) return &m;
  return nullptr;
}

const Macro& LibraryGeometry::at(std::string_view name) const {
  if (const auto* m = find(name)) return *m;
  throw NetlistError("no macro for cell '" + std::string(name) + "'");
}

const Layer* LibraryGeometry::layer(std::string_view name) const {
  for (const auto& l : layers)
    if (l.name == name) return &l;
  return nullptr;
}

namespace {

std::vector<Layer> routing_layers(int width, int pitch) {
  return {{"M1", Direction::Horizontal, width, pitch}, {"M2", Direction::Vertical, width, pitch}};
}

int macro_coarse_width(const CellFunction& c) {
  const int pins = static_cast<int>(c.inputs.size()) + 1;
  const int by_area = static_cast<int>(std::ceil(c.area / 2.0));
  return std::max(2 * pins, by_area);
}

// Pin k sits at coarse (2k, 1).
Point pin_point(std::size_t k) { return {static_cast<int>(4 * k), 2}; }

}  // namespace

LibraryPair build_libraries(const Library& cells) {
  LibraryPair out;
  out.fat.variant = Variant::Fat;
  out.diff.variant = Variant::Differential;
  out.fat.layers = routing_layers(2, kCoarse);
  out.diff.layers = routing_layers(1, 1);
  for (const auto& c : cells.cells()) {
    const int w = kCoarse * macro_coarse_width(c);
    const int h = kCoarse * kMacroRows;
    Macro fat{c.name, w, h, {}};
    Macro diff{c.name, w, h, {}};
    std::vector<std::string> pins = c.inputs;
    pins.push_back(c.output);
    for (std::size_t k = 0; k < pins.size(); ++k) {
      const PinUse use = k + 1 == pins.size() ? PinUse::Output : PinUse::Input;
      const Point p = pin_point(k);
      fat.pins.push_back({pins[k], p, use});
      diff.pins.push_back({pins[k] + "_t", p, use});
      diff.pins.push_back({pins[k] + "_f", {p.x + kFalseRailOffset.x, p.y + kFalseRailOffset.y}, use});
    }
    out.fat.macros.push_back(std::move(fat));
    out.diff.macros.push_back(std::move(diff));
  }
  return out;
}

LibraryGeometry build_single_library(const Library& cells) {
  LibraryGeometry lib;
  lib.variant = Variant::Single;
  lib.layers = routing_layers(1, kCoarse);
  for (const auto& c : cells.cells()) {
    Macro m{c.name, kCoarse * macro_coarse_width(c), kCoarse * kMacroRows, {}};
    std::vector<std::string> pins = c.inputs;
    pins.push_back(c.output);
    for (std::size_t k = 0; k < pins.size(); ++k)
      m.pins.push_back({pins[k], pin_point(k), k + 1 == pins.size() ? PinUse::Output : PinUse::Input});
    lib.macros.push_back(std::move(m));
  }
  return lib;
}

int Segment::length() const { return std::abs(b.x - a.x) + std::abs(b.y - a.y); }

int DesignNet::wire_length() const {
  int total = 0;
  for (const auto& s : segments) total += s.length();
  return total;
}

const Component* Design::find_component(std::string_view n) const {
  for (const auto& c : components)
    if (c.name == n) return &c;
  return nullptr;
}

const DesignNet* Design::find_net(std::string_view n) const {
  for (const auto& net : nets)
    if (net.name == n) return &net;
  return nullptr;
}

std::vector<int> Design::rows() const {
  std::set<int> ys;
  for (const auto& c : components) ys.insert(c.at.y);
  return {ys.begin(), ys.end()};
}

std::size_t Design::segment_count() const {
  std::size_t n = 0;
  for (const auto& net : nets) n += net.segments.size();
  return n;
}

Point Design::pin_location(const LibraryGeometry& lib, const NetPin& p) const {
  const Component* c = find_component(p.inst);
  if (!c) throw NetlistError("net pin references unknown component '" + p.inst + "'");
  const MacroPin* mp = lib.at(c->macro).find_pin(p.pin);
  if (!mp) throw NetlistError("macro " + c->macro + " has no pin '" + p.pin + "'");
  return {c->at.x + mp->at.x, c->at.y + mp->at.y};
}

}  // namespace wddl
