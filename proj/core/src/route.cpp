// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/route.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "wddl/error.hpp"

namespace wddl {
namespace {

constexpr int kNone = -1;

struct Window {
  int x0, y0, x1, y1;  // inclusive
  bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  bool covers(int w, int h) const { return x0 == 0 && y0 == 0 && x1 == w - 1 && y1 == h - 1; }
};

class Grid {
 public:
  Grid(int w, int h)
      : w_(w), h_(h), size_(static_cast<std::size_t>(2 * w * h)), blocked_(size_, 0), reserved_(size_, kNone),
        users_(size_), hist_(size_, 0.0), cost_(size_, 0.0), mark_(size_, 0), parent_(size_, -1) {}

  int node(int layer, int x, int y) const { return (layer * h_ + y) * w_ + x; }
  int layer_of(int n) const { return n / (w_ * h_); }
  int x_of(int n) const { return n % w_; }
  int y_of(int n) const { return (n / w_) % h_; }

  void block(int n) { blocked_[at(n)] = 1; }
  int reserved(int n) const { return reserved_[at(n)]; }
  void reserve(int n, int net) {
    reserved_[at(n)] = net;
    blocked_[at(n)] = 0;
  }
  std::vector<int>& users(int n) { return users_[at(n)]; }
  double& history(int n) { return hist_[at(n)]; }

  /// Same-layer nodes across the preferred direction within `spacing`.
  template <typename F>
  void for_each_near(int n, int spacing, F&& fn) const {
    const int l = layer_of(n), x = x_of(n), y = y_of(n);
    for (int d = 1; d <= spacing; ++d)
      for (int s : {-d, d}) {
        const int nx = l == 0 ? x : x + s;
        const int ny = l == 0 ? y + s : y;
        if (nx >= 0 && ny >= 0 && nx < w_ && ny < h_) fn(node(l, nx, ny));
      }
  }

  /// Other nets at `n` plus other nets within `spacing`; -1 when `n` is unusable.
  /// A net's own pin access nodes are exempt from spacing.
  int conflicts(int n, int net, int spacing) const {
    if (blocked_[at(n)]) return -1;
    const int r = reserved_[at(n)];
    if (r != kNone && r != net) return -1;
    int c = 0;
    for (int u : users_[at(n)]) c += u != net;
    if (spacing > 0 && r != net)
      for_each_near(n, spacing, [&](int q) {
        const int rq = reserved_[at(q)];
        if (rq != kNone && rq != net) ++c;
        for (int u : users_[at(q)]) c += u != net;
      });
    return c;
  }

  // Lowest-cost search from `tree` to any node flagged in `target`. Returns the
  // path target-first, or empty when no target is reachable inside `win`.
  std::vector<int> search(const std::vector<int>& tree, const std::vector<char>& target, int net, int spacing,
                          const Window& win, double via_cost, double present) {
    ++stamp_;
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (int n : tree) {
      mark_[at(n)] = stamp_;
      cost_[at(n)] = 0.0;
      parent_[at(n)] = -1;
      queue.emplace(0.0, n);
    }
    while (!queue.empty()) {
      const auto [c, n] = queue.top();
      queue.pop();
      if (c != cost_[at(n)]) continue;
      if (target[at(n)]) {
        std::vector<int> path;
        for (int p = n; p >= 0; p = parent_[at(p)]) path.push_back(p);
        return path;
      }
      const int l = layer_of(n), x = x_of(n), y = y_of(n);
      int next[3];
      int count = 0;
      if (l == 0) {
        if (x > 0) next[count++] = node(0, x - 1, y);
        if (x + 1 < w_) next[count++] = node(0, x + 1, y);
      } else {
        if (y > 0) next[count++] = node(1, x, y - 1);
        if (y + 1 < h_) next[count++] = node(1, x, y + 1);
      }
      next[count++] = node(1 - l, x, y);
      for (int i = 0; i < count; ++i) {
        const int m = next[i];
        if (!win.contains(x_of(m), y_of(m))) continue;
        const int conflict = conflicts(m, net, spacing);
        if (conflict < 0) continue;
        const double base = i == count - 1 ? via_cost : 1.0;
        const double mc = c + (base + hist_[at(m)]) * (1.0 + present * conflict);
        if (mark_[at(m)] == stamp_ && cost_[at(m)] <= mc) continue;
        mark_[at(m)] = stamp_;
        cost_[at(m)] = mc;
        parent_[at(m)] = n;
        queue.emplace(mc, m);
      }
    }
    return {};
  }

 private:
  std::size_t at(int n) const { return static_cast<std::size_t>(n); }

  int w_, h_;
  std::size_t size_;
  std::vector<char> blocked_;
  std::vector<int> reserved_;
  std::vector<std::vector<int>> users_;
  std::vector<double> hist_;
  std::vector<double> cost_;
  std::vector<unsigned> mark_;
  std::vector<int> parent_;
  unsigned stamp_ = 0;
};

struct NetPlan {
  std::string name;
  std::size_t design_index = 0;
  std::vector<int> pins;  // M1 pin nodes, net pin order, duplicates removed
  int hpwl = 0;
  Window box{0, 0, 0, 0};
};

struct NetRoute {
  std::vector<std::vector<int>> paths;
  std::vector<int> nodes;  // distinct nodes held in the grid
  bool failed = false;
};

}  // namespace

RoutedDesign route(const PlacedDesign& placed, const LibraryGeometry& lib, const RouteOptions& opts) {
  if (lib.variant == Variant::Differential)
    throw RoutingError("", "differential designs are produced by decomposition, not routed");
  if (placed.die_lo != Point{0, 0} || placed.die_hi.x % kCoarse || placed.die_hi.y % kCoarse)
    throw RoutingError("", "die must start at the origin and span whole coarse tracks");
  const int W = placed.die_hi.x / kCoarse;
  const int H = placed.die_hi.y / kCoarse;
  if (W <= 0 || H <= 0) return placed;
  Grid grid(W, H);

  // The M1 pin row of every macro is blocked; pins get their own M1 node and the M2 node above.
  for (const auto& c : placed.components) {
    const Macro& m = lib.at(c.macro);
    const int cx = c.at.x / kCoarse;
    const int row = c.at.y / kCoarse + 1;
    if (row < H)
      for (int x = cx; x < cx + m.width / kCoarse && x < W; ++x) grid.block(grid.node(0, x, row));
  }
  std::vector<NetPlan> plans;
  for (std::size_t i = 0; i < placed.nets.size(); ++i) {
    const auto& net = placed.nets[i];
    NetPlan p{net.name, i, {}, 0, {W, H, -1, -1}};
    for (const auto& pin : net.pins) {
      const Point at = placed.pin_location(lib, pin);
      if (at.x % kCoarse || at.y % kCoarse)
        throw RoutingError(net.name, "pin " + pin.inst + "." + pin.pin + " is off the routing grid");
      const int x = at.x / kCoarse, y = at.y / kCoarse;
      if (x >= W || y >= H) throw RoutingError(net.name, "pin " + pin.inst + "." + pin.pin + " is outside the die");
      const int n = grid.node(0, x, y);
      if (std::find(p.pins.begin(), p.pins.end(), n) == p.pins.end()) p.pins.push_back(n);
      p.box = {std::min(p.box.x0, x), std::min(p.box.y0, y), std::max(p.box.x1, x), std::max(p.box.y1, y)};
    }
    if (!p.pins.empty()) p.hpwl = (p.box.x1 - p.box.x0) + (p.box.y1 - p.box.y0);
    plans.push_back(std::move(p));
  }
  for (std::size_t k = 0; k < plans.size(); ++k)
    for (int n : plans[k].pins)
      for (int m : {n, grid.node(1, grid.x_of(n), grid.y_of(n))}) {
        const int o = grid.reserved(m);
        if (o != kNone && o != static_cast<int>(k))
          throw RoutingError(plans[k].name, "pin location shared with net " + plans[static_cast<std::size_t>(o)].name);
        grid.reserve(m, static_cast<int>(k));
      }

  std::vector<int> order(plans.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = plans[static_cast<std::size_t>(a)];
    const auto& pb = plans[static_cast<std::size_t>(b)];
    if (pa.hpwl != pb.hpwl) return pa.hpwl > pb.hpwl;
    return pa.name < pb.name;
  });

  std::vector<NetRoute> routes(plans.size());
  std::vector<char> target(static_cast<std::size_t>(2 * W * H), 0);
  std::vector<int> held_by(static_cast<std::size_t>(2 * W * H), kNone);
  const double via_cost = std::max(1, opts.via_cost);
  const int spacing = std::max(0, opts.spacing);

  auto rip_up = [&](int k) {
    for (int n : routes[static_cast<std::size_t>(k)].nodes) {
      auto& u = grid.users(n);
      u.erase(std::find(u.begin(), u.end(), k));
      held_by[static_cast<std::size_t>(n)] = kNone;
    }
    routes[static_cast<std::size_t>(k)] = {};
  };

  auto route_net = [&](int k, int margin0, double present) {
    const NetPlan& p = plans[static_cast<std::size_t>(k)];
    NetRoute& r = routes[static_cast<std::size_t>(k)];
    if (p.pins.size() < 2) return;
    std::vector<int> tree{p.pins.front()};
    std::vector<int> pending(p.pins.begin() + 1, p.pins.end());
    while (!pending.empty()) {
      for (int n : pending) target[static_cast<std::size_t>(n)] = 1;
      std::vector<int> path;
      for (int margin = margin0;; margin = margin * 2 + 1) {
        const Window win{std::max(0, p.box.x0 - margin), std::max(0, p.box.y0 - margin),
                         std::min(W - 1, p.box.x1 + margin), std::min(H - 1, p.box.y1 + margin)};
        path = grid.search(tree, target, k, spacing, win, via_cost, present);
        if (!path.empty() || win.covers(W, H)) break;
      }
      for (int n : pending) target[static_cast<std::size_t>(n)] = 0;
      if (path.empty()) {
        r.failed = true;
        return;
      }
      pending.erase(std::find(pending.begin(), pending.end(), path.front()));
      for (int n : path) {
        if (held_by[static_cast<std::size_t>(n)] != k) {
          held_by[static_cast<std::size_t>(n)] = k;
          grid.users(n).push_back(k);
          r.nodes.push_back(n);
        }
        tree.push_back(n);
      }
      std::reverse(path.begin(), path.end());
      r.paths.push_back(std::move(path));
    }
  };

  // Nets that share a node, violate spacing or found no path; contested nodes gain history cost.
  auto find_conflicts = [&] {
    std::vector<char> bad(plans.size(), 0);
    for (std::size_t k = 0; k < plans.size(); ++k) {
      if (routes[k].failed) bad[k] = 1;
      for (int n : routes[k].nodes) {
        if (grid.conflicts(n, static_cast<int>(k), spacing) == 0) continue;
        bad[k] = 1;
        grid.history(n) += 1.0;
      }
    }
    return bad;
  };

  const int rounds = std::max(1, opts.max_rounds);
  std::vector<char> reroute(plans.size(), 1);
  double present = 0.5;
  bool clean = false;
  for (int round = 0; round < rounds && !clean; ++round) {
    const int margin = std::min(std::max(W, H), std::max(0, opts.window_margin) << std::min(round, 16));
    for (int k : order)
      if (reroute[static_cast<std::size_t>(k)]) rip_up(k);
    for (int k : order)
      if (reroute[static_cast<std::size_t>(k)]) route_net(k, margin, present);
    reroute = find_conflicts();
    clean = std::none_of(reroute.begin(), reroute.end(), [](char c) { return c != 0; });
    present *= 1.8;
  }
  if (!clean) {
    std::size_t count = 0;
    int first = -1;
    for (int k : order)
      if (reroute[static_cast<std::size_t>(k)]) {
        ++count;
        if (first < 0) first = k;
      }
    const auto& p = plans[static_cast<std::size_t>(first)];
    throw RoutingError(p.name, "net " + p.name + " could not be routed without conflicts after " +
                                   std::to_string(rounds) + " rounds (" + std::to_string(count) + " nets affected)");
  }

  RoutedDesign out = placed;
  const int width = lib.wire_width();
  const std::string layer_name[2] = {lib.layers.size() > 0 ? lib.layers[0].name : "M1",
                                     lib.layers.size() > 1 ? lib.layers[1].name : "M2"};
  auto fine = [&](int n) { return Point{grid.x_of(n) * kCoarse, grid.y_of(n) * kCoarse}; };
  for (std::size_t k = 0; k < plans.size(); ++k) {
    DesignNet& net = out.nets[plans[k].design_index];
    net.segments.clear();
    net.vias.clear();
    for (const auto& path : routes[k].paths) {
      std::size_t run = 0;
      for (std::size_t i = 1; i <= path.size(); ++i) {
        const bool layer_change = i < path.size() && grid.layer_of(path[i]) != grid.layer_of(path[i - 1]);
        if (i < path.size() && !layer_change) continue;
        if (i - 1 > run) {
          const int l = grid.layer_of(path[run]);
          net.segments.push_back({layer_name[l], width, fine(path[run]), fine(path[i - 1])});
        }
        if (layer_change) {
          const int lo = std::min(grid.layer_of(path[i]), grid.layer_of(path[i - 1]));
          net.vias.push_back({fine(path[i]), layer_name[lo], layer_name[1 - lo]});
        }
        run = i;
      }
    }
  }
  return out;
}

}  // namespace wddl
