// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/place.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <map>
#include <random>

#include "wddl/error.hpp"

namespace wddl {
namespace {

struct Cell {
  std::string name;
  std::string macro;
  int width = 0;  // coarse
  int height = 0;
};

// Nets as lists of cell indices, built from the pins that have macro geometry.
std::vector<DesignNet> design_nets(const Netlist& n, const LibraryGeometry& lib,
                                   std::vector<std::vector<int>>& members) {
  std::map<std::string, std::size_t> index;
  std::vector<DesignNet> nets;
  for (const auto& net : n.nets()) {
    index.emplace(net, nets.size());
    nets.push_back({net, {}, {}, {}});
  }
  members.assign(nets.size(), {});
  for (std::size_t k = 0; k < n.instances.size(); ++k) {
    const auto& inst = n.instances[k];
    const Macro& m = lib.at(inst.cell);
    for (const auto& b : inst.pins) {
      if (!m.find_pin(b.pin)) continue;
      auto it = index.find(b.net);
      if (it == index.end()) throw NetlistError("instance " + inst.name + " uses undeclared net " + b.net);
      nets[it->second].pins.push_back({inst.name, b.pin});
      members[it->second].push_back(static_cast<int>(k));
    }
  }
  std::vector<DesignNet> kept;
  std::vector<std::vector<int>> kept_members;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (nets[i].pins.empty()) continue;
    kept.push_back(std::move(nets[i]));
    kept_members.push_back(std::move(members[i]));
  }
  members = std::move(kept_members);
  return kept;
}

std::vector<int> connectivity_order(std::size_t count, const std::vector<std::vector<int>>& members,
                                    std::uint64_t seed) {
  std::vector<std::vector<int>> nets_of(count);
  for (std::size_t k = 0; k < members.size(); ++k)
    for (int c : members[k]) nets_of[static_cast<std::size_t>(c)].push_back(static_cast<int>(k));

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> tie(count);
  for (auto& t : tie) t = rng();
  std::vector<long> degree(count, 0);
  for (const auto& m : members)
    for (int c : m) degree[static_cast<std::size_t>(c)] += static_cast<long>(m.size()) - 1;

  std::vector<long> score(count, 0);
  std::vector<bool> done(count, false);
  std::vector<int> order;
  order.reserve(count);
  for (std::size_t step = 0; step < count; ++step) {
    int best = -1;
    for (std::size_t c = 0; c < count; ++c) {
      if (done[c]) continue;
      if (best < 0) {
        best = static_cast<int>(c);
        continue;
      }
      const auto b = static_cast<std::size_t>(best);
      if (std::tie(score[c], degree[c], tie[c]) > std::tie(score[b], degree[b], tie[b])) best = static_cast<int>(c);
    }
    const auto b = static_cast<std::size_t>(best);
    done[b] = true;
    order.push_back(best);
    for (int net : nets_of[b])
      for (int other : members[static_cast<std::size_t>(net)]) ++score[static_cast<std::size_t>(other)];
  }
  return order;
}

// Splits `order` into rows no wider than `width`; empty result when a cell does not fit.
std::vector<std::vector<int>> pack_rows(const std::vector<int>& order, const std::vector<Cell>& cells, int width) {
  std::vector<std::vector<int>> rows;
  int used = width + 1;
  for (int c : order) {
    const int w = cells[static_cast<std::size_t>(c)].width;
    if (w > width) return {};
    if (used + w > width) {
      rows.emplace_back();
      used = 0;
    }
    rows.back().push_back(c);
    used += w;
  }
  return rows;
}

// Pins of every net as (cell, x offset, y offset) in coarse tracks.
struct NetPins {
  std::vector<std::array<int, 3>> pins;
};

long net_hpwl(const NetPins& n, const std::vector<Point>& pos) {
  if (n.pins.empty()) return 0;
  int x0 = INT_MAX, x1 = INT_MIN, y0 = INT_MAX, y1 = INT_MIN;
  for (const auto& [c, dx, dy] : n.pins) {
    const Point p = pos[static_cast<std::size_t>(c)];
    x0 = std::min(x0, p.x + dx);
    x1 = std::max(x1, p.x + dx);
    y0 = std::min(y0, p.y + dy);
    y1 = std::max(y1, p.y + dy);
  }
  return static_cast<long>(x1 - x0) + (y1 - y0);
}

void anneal(std::vector<Point>& pos, const std::vector<Cell>& cells, const std::vector<NetPins>& nets, int passes,
            std::uint64_t seed) {
  const std::size_t count = cells.size();
  if (passes <= 0 || count < 2) return;
  std::vector<std::vector<int>> nets_of(count);
  for (std::size_t k = 0; k < nets.size(); ++k)
    for (const auto& p : nets[k].pins) {
      auto& v = nets_of[static_cast<std::size_t>(p[0])];
      if (v.empty() || v.back() != static_cast<int>(k)) v.push_back(static_cast<int>(k));
    }
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (std::size_t c = 0; c < count; ++c) groups[{cells[c].width, cells[c].height}].push_back(static_cast<int>(c));
  std::vector<const std::vector<int>*> group_of(count);
  for (const auto& [size, members] : groups)
    for (int c : members) group_of[static_cast<std::size_t>(c)] = &members;

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<int> touched;
  std::vector<unsigned> stamp(nets.size(), 0);
  unsigned tick = 0;
  auto delta_of_swap = [&](int a, int b) {
    ++tick;
    touched.clear();
    for (int c : {a, b})
      for (int k : nets_of[static_cast<std::size_t>(c)])
        if (stamp[static_cast<std::size_t>(k)] != tick) {
          stamp[static_cast<std::size_t>(k)] = tick;
          touched.push_back(k);
        }
    long before = 0;
    for (int k : touched) before += net_hpwl(nets[static_cast<std::size_t>(k)], pos);
    std::swap(pos[static_cast<std::size_t>(a)], pos[static_cast<std::size_t>(b)]);
    long after = 0;
    for (int k : touched) after += net_hpwl(nets[static_cast<std::size_t>(k)], pos);
    return after - before;
  };
  auto pick = [&](int& a, int& b) {
    a = static_cast<int>(rng() % count);
    const auto& g = *group_of[static_cast<std::size_t>(a)];
    if (g.size() < 2) return false;
    b = g[static_cast<std::size_t>(rng() % g.size())];
    return a != b;
  };

  // Starting temperature: mean uphill cost of random swaps.
  double sum = 0.0;
  int samples = 0;
  for (std::size_t i = 0; i < 4 * count; ++i) {
    int a = 0, b = 0;
    if (!pick(a, b)) continue;
    const long d = delta_of_swap(a, b);
    std::swap(pos[static_cast<std::size_t>(a)], pos[static_cast<std::size_t>(b)]);
    if (d > 0) {
      sum += static_cast<double>(d);
      ++samples;
    }
  }
  double temp = samples ? sum / samples : 1.0;
  const std::size_t moves = 20 * count;
  for (int pass = 0; pass < passes; ++pass) {
    for (std::size_t m = 0; m < moves; ++m) {
      int a = 0, b = 0;
      if (!pick(a, b)) continue;
      const long d = delta_of_swap(a, b);
      const bool last = pass + 1 == passes;
      if (d <= 0 || (!last && uniform() < std::exp(-static_cast<double>(d) / temp))) continue;
      std::swap(pos[static_cast<std::size_t>(a)], pos[static_cast<std::size_t>(b)]);
    }
    temp *= 0.85;
  }
}

}  // namespace

PlacedDesign place(const Netlist& n, const LibraryGeometry& lib, const PlaceOptions& opts) {
  if (!(opts.fill > 0.0) || opts.fill > 1.0) throw PlacementError("fill factor must be in (0, 1]");
  if (!(opts.aspect > 0.0)) throw PlacementError("aspect ratio must be positive");
  if (lib.variant == Variant::Differential) throw PlacementError("placement needs a fat or single-ended library");

  std::vector<Cell> cells;
  int row_h = kMacroRows;
  double area = 0.0;
  for (const auto& inst : n.instances) {
    const Macro& m = lib.at(inst.cell);
    Cell c{inst.name, m.name, m.width / kCoarse, m.height / kCoarse};
    area += static_cast<double>(c.width) * c.height;
    cells.push_back(std::move(c));
  }
  if (!cells.empty()) {
    row_h = 0;
    for (const auto& c : cells) row_h = std::max(row_h, c.height);
  }

  std::vector<std::vector<int>> members;
  std::vector<DesignNet> nets = design_nets(n, lib, members);
  const std::vector<int> order = connectivity_order(cells.size(), members, opts.seed);

  int W = 0;
  int H = 0;
  std::vector<std::vector<int>> rows;
  if (opts.die) {
    W = opts.die->x;
    H = opts.die->y;
    if (W < 1 || H < 1) throw PlacementError("die size must be positive");
    for (const auto& c : cells)
      if (c.width > W) throw PlacementError("cell " + c.name + " is wider than the die");
    rows = pack_rows(order, cells, W);
    if (static_cast<int>(rows.size()) * row_h > H) throw PlacementError("cells do not fit in the fixed die");
  } else {
    const int start = std::max(1, static_cast<int>(std::floor(std::sqrt(area / (opts.fill * opts.aspect)))) - 2);
    for (H = cells.empty() ? 1 : start;; ++H) {
      W = std::max(1, static_cast<int>(std::lround(opts.aspect * H)));
      if (area > opts.fill * W * H) continue;
      if (cells.empty()) break;
      rows = pack_rows(order, cells, W);
      if (!rows.empty() && static_cast<int>(rows.size()) * row_h <= H) break;
    }
  }

  PlacedDesign d;
  d.name = n.name;
  d.variant = lib.variant;
  d.die_lo = {0, 0};
  d.die_hi = {kCoarse * W, kCoarse * H};
  std::map<std::string, Point> at;
  const int R = static_cast<int>(rows.size());
  const int slack_y = H - R * row_h;
  for (int r = 0; r < R; ++r) {
    const int y = r * row_h + (r + 1) * slack_y / (R + 1);
    std::vector<int> row = rows[static_cast<std::size_t>(r)];
    if (r % 2) std::reverse(row.begin(), row.end());
    int used = 0;
    for (int c : row) used += cells[static_cast<std::size_t>(c)].width;
    const int m = static_cast<int>(row.size());
    const int slack_x = W - used;
    int x = 0;
    for (int j = 0; j < m; ++j) {
      x += (j + 1) * slack_x / (m + 1) - j * slack_x / (m + 1);
      const Cell& c = cells[static_cast<std::size_t>(row[static_cast<std::size_t>(j)])];
      at[c.name] = {kCoarse * x, kCoarse * y};
      x += c.width;
    }
  }
  std::vector<Point> pos;
  for (const auto& c : cells) {
    const Point p = at.at(c.name);
    pos.push_back({p.x / kCoarse, p.y / kCoarse});
  }
  std::vector<NetPins> pin_lists;
  for (const auto& net : nets) {
    NetPins np;
    for (const auto& pin : net.pins) {
      const auto k = static_cast<std::size_t>(std::find_if(cells.begin(), cells.end(), [&](const Cell& c) { return c.name == pin.inst; }) - cells.begin());
      const MacroPin* mp = lib.at(cells[k].macro).find_pin(pin.pin);
      np.pins.push_back({static_cast<int>(k), mp->at.x / kCoarse, mp->at.y / kCoarse});
    }
    pin_lists.push_back(std::move(np));
  }
  anneal(pos, cells, pin_lists, opts.anneal_passes, opts.seed);
  for (std::size_t k = 0; k < cells.size(); ++k)
    d.components.push_back({cells[k].name, cells[k].macro, {kCoarse * pos[k].x, kCoarse * pos[k].y}, "N"});
  d.nets = std::move(nets);
  return d;
}

}  // namespace wddl
