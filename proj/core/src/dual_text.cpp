// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <map>
#include <set>

#include "structural.hpp"
#include "wddl/error.hpp"
#include "wddl/substitute.hpp"

namespace wddl {

std::string emit_dual_netlist(const DualRailNetlist& d) {
  std::vector<Port> ports;
  const Port pre{d.precharge, PortDir::Input, 1, false};
  bool pre_done = false;
  for (const auto& p : d.ports) {
    if (d.clock && p.name == *d.clock) {
      ports.push_back(p);
      ports.push_back(pre);
      pre_done = true;
      continue;
    }
    ports.push_back({p.name + "_t", p.dir, p.width, p.bus});
    ports.push_back({p.name + "_f", p.dir, p.width, p.bus});
  }
  if (!pre_done) ports.insert(ports.begin(), pre);

  std::vector<Wire> wires;
  for (const auto& w : d.wires) {
    wires.push_back({w.name + "_t", w.width, w.bus});
    wires.push_back({w.name + "_f", w.width, w.bus});
  }

  std::vector<Instance> insts;
  for (const auto& inst : d.instances) {
    const WddlCell& w = d.cell_of(inst);
    Instance out{inst.name, w.name(), {}};
    for (const auto& p : inst.pins) {
      const RailPair r = p.pair.rails();
      out.pins.push_back({p.pin + "_t", r.t});
      out.pins.push_back({p.pin + "_f", r.f});
    }
    if (w.sequential && w.clock && d.clock) out.pins.push_back({*w.clock, *d.clock});
    insts.push_back(std::move(out));
  }

  std::vector<Assign> assigns;
  for (const auto& a : d.assigns) {
    const RailPair r = a.rhs.rails();
    assigns.push_back({rail_name(a.lhs, true), r.t});
    assigns.push_back({rail_name(a.lhs, false), r.f});
  }
  return detail::emit_structural(d.name, ports, wires, insts, assigns);
}

namespace {

// Combines the rails bound to `t` and `f` into a pair reference.
PairRef pair_from_rails(const std::string& t, const std::string& f, const std::string& where) {
  auto rt = split_rail(t);
  auto rf = split_rail(f);
  if (!rt || !rf || rt->first != rf->first || rt->second == rf->second)
    throw NetlistError(where + ": nets " + t + " and " + f + " are not the two rails of one pair");
  return {rt->first, !rt->second};
}

}  // namespace

DualRailNetlist parse_dual_netlist(std::string_view text, const WddlLibrary& wlib) {
  detail::RawModule raw = detail::parse_structural(text);
  DualRailNetlist d;
  d.name = raw.name;

  std::set<std::string> clock_nets;
  for (const auto& ri : raw.instances) {
    const WddlCell* w = wlib.find_by_name(ri.inst.cell);
    if (!w)
      throw NetlistError("line " + std::to_string(ri.pos.line) + ": unknown compound cell '" + ri.inst.cell + "'");
    if (w->sequential && w->clock)
      if (const auto* ck = ri.inst.net_of(*w->clock)) clock_nets.insert(*ck);
  }
  if (clock_nets.size() > 1) throw NetlistError("registers use more than one clock net");
  if (!clock_nets.empty()) d.clock = *clock_nets.begin();

  // Group `x_t` / `x_f` declarations into logical ports.
  auto pair_decls = [](const auto& decls, auto make, auto& out, std::vector<std::string>& unpaired) {
    std::map<std::string, std::pair<int, int>> seen;
    for (std::size_t i = 0; i < decls.size(); ++i) {
      const std::string& nm = decls[i].name;
      if (nm.size() > 2 && (nm.ends_with("_t") || nm.ends_with("_f"))) {
        auto& slot = seen[nm.substr(0, nm.size() - 2)];
        if (slot.first == 0 && slot.second == 0) slot = {-1, -1};
        (nm.ends_with("_t") ? slot.first : slot.second) = static_cast<int>(i);
      }
    }
    std::set<std::string> emitted;
    for (std::size_t i = 0; i < decls.size(); ++i) {
      const std::string& nm = decls[i].name;
      std::string stem = nm.size() > 2 ? nm.substr(0, nm.size() - 2) : nm;
      auto it = seen.find(stem);
      if (it != seen.end() && it->second.first >= 0 && it->second.second >= 0 &&
          (nm.ends_with("_t") || nm.ends_with("_f"))) {
        const auto& a = decls[static_cast<std::size_t>(it->second.first)];
        const auto& b = decls[static_cast<std::size_t>(it->second.second)];
        if (!make.compatible(a, b)) throw NetlistError("rails of '" + stem + "' disagree in shape");
        if (emitted.insert(stem).second) out.push_back(make.build(stem, a));
        continue;
      }
      unpaired.push_back(nm);
    }
  };

  struct PortMaker {
    bool compatible(const Port& a, const Port& b) const {
      return a.dir == b.dir && a.width == b.width && a.bus == b.bus;
    }
    Port build(const std::string& stem, const Port& a) const { return {stem, a.dir, a.width, a.bus}; }
  };
  struct WireMaker {
    bool compatible(const Wire& a, const Wire& b) const { return a.width == b.width && a.bus == b.bus; }
    Wire build(const std::string& stem, const Wire& a) const { return {stem, a.width, a.bus}; }
  };

  std::vector<Port> paired_ports;
  std::vector<std::string> unpaired_ports;
  pair_decls(raw.ports, PortMaker{}, paired_ports, unpaired_ports);
  std::vector<std::string> unpaired_wires;
  pair_decls(raw.wires, WireMaker{}, d.wires, unpaired_wires);
  if (!unpaired_wires.empty()) throw NetlistError("wire '" + unpaired_wires.front() + "' has no partner rail");

  std::vector<std::string> controls;
  for (const auto& nm : unpaired_ports) {
    const Port* p = nullptr;
    for (const auto& rp : raw.ports)
      if (rp.name == nm) p = &rp;
    if (p->dir != PortDir::Input || p->bus) throw NetlistError("port '" + nm + "' has no partner rail");
    if (d.clock && nm == *d.clock) continue;
    controls.push_back(nm);
  }
  if (!d.clock && controls.size() == 2) {
    // No registers: the clock cannot be identified by use, so take the control named like the default.
    const std::size_t pre = controls[0] == "pre" ? 0 : controls[1] == "pre" ? 1 : 2;
    if (pre == 2) throw NetlistError("cannot tell the precharge port from the clock");
    d.clock = controls[1 - pre];
    controls = {"pre"};
  }
  if (controls.size() != 1) throw NetlistError("expected exactly one precharge control port");
  d.precharge = controls.front();

  // Logical port order follows the header, with the clock in place.
  std::set<std::string> done;
  for (const auto& rp : raw.ports) {
    if (d.clock && rp.name == *d.clock) {
      d.ports.push_back(rp);
      continue;
    }
    if (rp.name == d.precharge) continue;
    const std::string stem = rp.name.substr(0, rp.name.size() - 2);
    if (!done.insert(stem).second) continue;
    for (const auto& pp : paired_ports)
      if (pp.name == stem) d.ports.push_back(pp);
  }

  for (auto& ri : raw.instances) {
    const WddlCell& w = *wlib.find_by_name(ri.inst.cell);
    const std::string where = "line " + std::to_string(ri.pos.line);
    DualInstance di{ri.inst.name, w.base, {}};
    std::vector<std::string> pins = w.inputs;
    pins.push_back(w.output);
    std::set<std::string> allowed;
    for (const auto& p : pins) {
      allowed.insert(p + "_t");
      allowed.insert(p + "_f");
      const auto* t = ri.inst.net_of(p + "_t");
      const auto* f = ri.inst.net_of(p + "_f");
      if (!t || !f) throw NetlistError(where + ": pin " + p + " of " + ri.inst.name + " needs both rails");
      di.pins.push_back({p, pair_from_rails(*t, *f, where)});
    }
    if (w.clock) allowed.insert(*w.clock);
    for (const auto& b : ri.inst.pins)
      if (!allowed.count(b.pin)) throw NetlistError(where + ": compound " + w.name() + " has no pin " + b.pin);
    d.instances.push_back(std::move(di));
    d.cells.emplace(w.base, w);
  }

  std::map<std::string, std::pair<std::string, std::string>> halves;
  std::vector<std::string> order;
  for (const auto& a : raw.assigns) {
    auto r = split_rail(a.lhs);
    if (!r) throw NetlistError("assign target " + a.lhs + " is not a rail");
    if (!halves.count(r->first)) order.push_back(r->first);
    (r->second ? halves[r->first].first : halves[r->first].second) = a.rhs;
  }
  for (const auto& base : order) {
    const auto& [t, f] = halves[base];
    if (t.empty() || f.empty()) throw NetlistError("assign to " + base + " covers only one rail");
    d.assigns.push_back({base, pair_from_rails(t, f, "assign " + base)});
  }

  for (const auto& b : d.pairs()) d.pair_of[b] = {b, false};
  if (auto problems = validate_dual(d); !problems.empty()) throw NetlistError(problems.front());
  return d;
}

}  // namespace wddl
