// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/drc.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace wddl {

std::string_view to_string(DrcKind kind) {
  switch (kind) {
    case DrcKind::Short:
      return "short";
    case DrcKind::Open:
      return "open";
    case DrcKind::OffGrid:
      return "off-grid";
    case DrcKind::NonAxis:
      return "non-axis";
    case DrcKind::WrongDirection:
      return "wrong-direction";
    case DrcKind::WrongWidth:
      return "wrong-width";
    case DrcKind::OutsideDie:
      return "outside-die";
    case DrcKind::Overlap:
      return "overlap";
    case DrcKind::UnknownLayer:
      return "unknown-layer";
  }
  return "?";
}

namespace {

struct Rect {
  int x0, y0, x1, y1;  // inclusive
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

bool on_grid(Variant v, Point p) {
  if (v == Variant::Differential) return (p.x & 1) == (p.y & 1);
  return p.x % 2 == 0 && p.y % 2 == 0;
}

}  // namespace

std::vector<DrcViolation> check_drc(const Design& d, const LibraryGeometry& lib) {
  std::vector<DrcViolation> out;
  auto report = [&](DrcKind k, std::string obj, std::string msg) { out.push_back({k, std::move(obj), std::move(msg)}); };

  // Components: inside the die, on grid, pairwise disjoint.
  std::vector<std::pair<Rect, std::string>> boxes;
  for (const auto& c : d.components) {
    const Macro* m = lib.find(c.macro);
    if (!m) {
      report(DrcKind::Overlap, c.name, "component uses unknown macro " + c.macro);
      continue;
    }
    if (c.at.x % 2 || c.at.y % 2) report(DrcKind::OffGrid, c.name, "component origin is off the routing grid");
    const Rect r{c.at.x, c.at.y, c.at.x + m->width - 1, c.at.y + m->height - 1};
    if (r.x0 < d.die_lo.x || r.y0 < d.die_lo.y || r.x1 >= d.die_hi.x || r.y1 >= d.die_hi.y)
      report(DrcKind::OutsideDie, c.name, "component extends outside the die");
    boxes.emplace_back(r, c.name);
  }
  std::sort(boxes.begin(), boxes.end(), [](const auto& a, const auto& b) { return a.first.x0 < b.first.x0; });
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size() && boxes[j].first.x0 <= boxes[i].first.x1; ++j) {
      const Rect& a = boxes[i].first;
      const Rect& b = boxes[j].first;
      if (a.y0 <= b.y1 && b.y0 <= a.y1)
        report(DrcKind::Overlap, boxes[i].second, "component overlaps " + boxes[j].second);
    }

  const int pin_size = d.variant == Variant::Fat ? 2 : 1;
  const int layer_count = static_cast<int>(lib.layers.size());
  auto layer_index = [&](const std::string& name) {
    for (int i = 0; i < layer_count; ++i)
      if (lib.layers[static_cast<std::size_t>(i)].name == name) return i;
    return -1;
  };

  // Raster cell -> (net, object) of the first shape seen there.
  std::unordered_map<std::uint64_t, std::pair<int, std::size_t>> raster;
  std::vector<int> object_net;
  std::set<std::pair<int, int>> shorted;
  std::vector<std::pair<std::size_t, std::size_t>> merges;

  auto key = [](int layer, int x, int y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(layer)) << 48) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x) & 0xFFFFFF) << 24) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y) & 0xFFFFFF));
  };
  bool outside_reported = false;
  auto paint = [&](int net, std::size_t obj, int layer, const Rect& r, const std::string& net_name) {
    for (int x = r.x0; x <= r.x1; ++x)
      for (int y = r.y0; y <= r.y1; ++y) {
        if (x < d.die_lo.x || y < d.die_lo.y || x >= d.die_hi.x || y >= d.die_hi.y) {
          if (!outside_reported) report(DrcKind::OutsideDie, net_name, fmt::format("metal at ({} {}) is outside the die", x, y));
          outside_reported = true;
          continue;
        }
        auto [it, fresh] = raster.try_emplace(key(layer, x, y), net, obj);
        if (fresh) continue;
        if (it->second.first == net) {
          merges.emplace_back(it->second.second, obj);
        } else {
          const auto a = std::minmax(it->second.first, net);
          if (shorted.insert(a).second)
            report(DrcKind::Short, net_name,
                   fmt::format("nets {} and {} overlap at ({} {}) on {}", d.nets[static_cast<std::size_t>(a.first)].name,
                               d.nets[static_cast<std::size_t>(a.second)].name, x, y,
                               lib.layers[static_cast<std::size_t>(layer)].name));
        }
      }
  };

  std::vector<std::vector<std::size_t>> net_objects(d.nets.size());
  for (std::size_t ni = 0; ni < d.nets.size(); ++ni) {
    const auto& net = d.nets[ni];
    const int id = static_cast<int>(ni);
    auto new_object = [&] {
      object_net.push_back(id);
      net_objects[ni].push_back(object_net.size() - 1);
      return object_net.size() - 1;
    };
    for (const auto& p : net.pins) {
      Point at;
      try {
        at = d.pin_location(lib, p);
      } catch (const std::exception& e) {
        report(DrcKind::Open, net.name, e.what());
        continue;
      }
      if (!on_grid(d.variant, at)) report(DrcKind::OffGrid, net.name, fmt::format("pin {}.{} is off grid", p.inst, p.pin));
      paint(id, new_object(), 0, {at.x, at.y, at.x + pin_size - 1, at.y + pin_size - 1}, net.name);
    }
    for (const auto& s : net.segments) {
      const int l = layer_index(s.layer);
      if (l < 0) {
        report(DrcKind::UnknownLayer, net.name, "segment on unknown layer " + s.layer);
        continue;
      }
      if (s.width != lib.wire_width())
        report(DrcKind::WrongWidth, net.name, fmt::format("segment width {} on a {} design", s.width, to_string(d.variant)));
      if (!on_grid(d.variant, s.a) || !on_grid(d.variant, s.b))
        report(DrcKind::OffGrid, net.name, fmt::format("segment ({} {})-({} {}) is off grid", s.a.x, s.a.y, s.b.x, s.b.y));
      const bool horizontal = s.a.y == s.b.y;
      const bool vertical = s.a.x == s.b.x;
      if (!horizontal && !vertical) {
        report(DrcKind::NonAxis, net.name, fmt::format("segment ({} {})-({} {}) is not axis-parallel", s.a.x, s.a.y, s.b.x, s.b.y));
        continue;
      }
      const Direction dir = lib.layers[static_cast<std::size_t>(l)].direction;
      if ((dir == Direction::Horizontal && !horizontal) || (dir == Direction::Vertical && !vertical))
        report(DrcKind::WrongDirection, net.name, "segment against the preferred direction of " + s.layer);
      const int w = std::max(1, s.width);
      const Rect r{std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y), std::max(s.a.x, s.b.x) + w - 1,
                   std::max(s.a.y, s.b.y) + w - 1};
      paint(id, new_object(), l, r, net.name);
    }
    for (const auto& v : net.vias) {
      const int lo = layer_index(v.lower);
      const int hi = layer_index(v.upper);
      if (lo < 0 || hi < 0) {
        report(DrcKind::UnknownLayer, net.name, "via on unknown layer");
        continue;
      }
      if (!on_grid(d.variant, v.at)) report(DrcKind::OffGrid, net.name, fmt::format("via ({} {}) is off grid", v.at.x, v.at.y));
      const int w = lib.wire_width();
      const Rect r{v.at.x, v.at.y, v.at.x + w - 1, v.at.y + w - 1};
      const std::size_t obj = new_object();
      paint(id, obj, lo, r, net.name);
      paint(id, obj, hi, r, net.name);
    }
  }

  UnionFind sets(object_net.size());
  for (const auto& [a, b] : merges) sets.unite(a, b);
  for (std::size_t ni = 0; ni < d.nets.size(); ++ni) {
    std::set<std::size_t> roots;
    for (std::size_t o : net_objects[ni]) roots.insert(sets.find(o));
    if (roots.size() > 1)
      report(DrcKind::Open, d.nets[ni].name, fmt::format("net {} is split into {} pieces", d.nets[ni].name, roots.size()));
  }
  return out;
}

}  // namespace wddl
