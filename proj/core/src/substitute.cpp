// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/substitute.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "wddl/error.hpp"

namespace wddl {

std::string rail_name(std::string_view base, bool true_rail) {
  const char* suffix = true_rail ? "_t" : "_f";
  auto [stem, bit] = split_bit(base);
  if (bit) return stem + suffix + "[" + std::to_string(*bit) + "]";
  return std::string(base) + suffix;
}

std::optional<std::pair<std::string, bool>> split_rail(std::string_view rail) {
  auto [stem, bit] = split_bit(rail);
  if (stem.size() < 3) return std::nullopt;
  const std::string suffix = stem.substr(stem.size() - 2);
  if (suffix != "_t" && suffix != "_f") return std::nullopt;
  std::string base = stem.substr(0, stem.size() - 2);
  if (bit) base += "[" + std::to_string(*bit) + "]";
  return std::pair{base, suffix == "_t"};
}

RailPair PairRef::rails() const {
  return swapped ? RailPair{rail_name(base, false), rail_name(base, true)}
                 : RailPair{rail_name(base, true), rail_name(base, false)};
}

const PairRef* DualInstance::pair_of_pin(std::string_view pin) const {
  for (const auto& p : pins)
    if (p.pin == pin) return &p.pair;
  return nullptr;
}

std::vector<std::string> DualRailNetlist::pairs() const {
  std::vector<std::string> out;
  for (const auto& p : ports)
    for (auto& b : p.bits())
      if (!clock || b != *clock) out.push_back(std::move(b));
  for (const auto& w : wires)
    for (auto& b : w.bits()) out.push_back(std::move(b));
  return out;
}

std::vector<std::string> DualRailNetlist::input_bits() const {
  std::vector<std::string> out;
  for (const auto& p : ports)
    if (p.dir == PortDir::Input)
      for (auto& b : p.bits())
        if (!clock || b != *clock) out.push_back(std::move(b));
  return out;
}

std::vector<std::string> DualRailNetlist::output_bits() const {
  std::vector<std::string> out;
  for (const auto& p : ports)
    if (p.dir == PortDir::Output)
      for (auto& b : p.bits()) out.push_back(std::move(b));
  return out;
}

RailPair DualRailNetlist::rails_of(std::string_view logical_net) const {
  auto it = pair_of.find(std::string(logical_net));
  if (it == pair_of.end()) throw NetlistError("no rail pair for net '" + std::string(logical_net) + "'");
  return it->second.rails();
}

const DualInstance* DualRailNetlist::find_instance(std::string_view n) const {
  for (const auto& i : instances)
    if (i.name == n) return &i;
  return nullptr;
}

const WddlCell& DualRailNetlist::cell_of(const DualInstance& inst) const {
  auto it = cells.find(inst.base);
  if (it == cells.end()) throw NetlistError("instance " + inst.name + " uses unknown compound W_" + inst.base);
  return it->second;
}

DualRailNetlist substitute_cells(const Netlist& n, const WddlLibrary& wlib) {
  const Library& lib = wlib.base();
  for (const auto& inst : n.instances)
    if (!wlib.find(inst.cell))
      throw SubstitutionError("cell '" + inst.cell + "' of instance '" + inst.name + "' has no WDDL counterpart");
  if (auto diags = validate_netlist(n, lib); !diags.empty())
    throw NetlistError(std::string(to_string(diags.front().kind)) + ": " + diags.front().message);

  // Driver of every net: instance index, assign index (encoded -2 - k) or -1 for ports.
  std::unordered_map<std::string, int> driver;
  for (std::size_t k = 0; k < n.instances.size(); ++k) {
    const auto& inst = n.instances[k];
    driver[*inst.net_of(lib.at(inst.cell).output)] = static_cast<int>(k);
  }
  for (std::size_t k = 0; k < n.assigns.size(); ++k) driver[n.assigns[k].lhs] = -2 - static_cast<int>(k);

  std::unordered_map<std::string, PairRef> memo;
  std::function<PairRef(const std::string&)> resolve = [&](const std::string& net) -> PairRef {
    if (auto it = memo.find(net); it != memo.end()) return it->second;
    if (n.clock && net == *n.clock) throw SubstitutionError("clock net '" + net + "' drives logic");
    PairRef r{net, false};
    auto it = driver.find(net);
    if (it != driver.end() && it->second >= 0) {
      const auto& inst = n.instances[static_cast<std::size_t>(it->second)];
      const WddlCell& w = wlib.at(inst.cell);
      if (w.is_wire()) {
        // Inverters and buffers: the output pair is the input pair, swapped for odd parity.
        const auto lit = w.true_logic.as_literal();
        const int rail = lit->first;
        const std::string& src = *inst.net_of(w.inputs[static_cast<std::size_t>(rail / 2)]);
        r = resolve(src);
        if (rail % 2) r = r.flipped();
      }
    } else if (it != driver.end()) {
      r = resolve(n.assigns[static_cast<std::size_t>(-2 - it->second)].rhs);
    }
    memo.emplace(net, r);
    return r;
  };

  DualRailNetlist d;
  d.name = n.name;
  d.ports = n.ports;
  d.clock = n.clock;
  d.precharge = "pre";
  for (const auto& net : n.nets()) {
    if (n.clock && net == *n.clock) continue;
    d.pair_of[net] = resolve(net);
  }
  auto physical = [&](const std::string& net) {
    const PairRef& r = d.pair_of.at(net);
    return r.base == net && !r.swapped;
  };
  std::set<std::string> names;
  for (const auto& p : n.ports) names.insert(p.name);
  for (const auto& w : n.wires) names.insert(w.name);
  while (names.count(d.precharge)) d.precharge += "_";

  for (const auto& p : n.ports) {
    if (p.dir != PortDir::Output) continue;
    for (const auto& b : p.bits()) {
      if (physical(b)) continue;
      d.assigns.push_back({b, d.pair_of[b]});
      d.pair_of[b] = {b, false};
    }
  }
  for (const auto& w : n.wires) {
    const auto bits = w.bits();
    bool any = false;
    for (const auto& b : bits) any = any || physical(b);
    if (!any) continue;
    d.wires.push_back(w);
    for (const auto& b : bits)
      if (!physical(b)) d.assigns.push_back({b, d.pair_of[b]});
  }

  for (const auto& inst : n.instances) {
    const WddlCell& w = wlib.at(inst.cell);
    if (w.is_wire()) continue;
    DualInstance di{inst.name, w.base, {}};
    for (const auto& in : w.inputs) di.pins.push_back({in, d.pair_of.at(*inst.net_of(in))});
    di.pins.push_back({w.output, {*inst.net_of(w.output), false}});
    d.instances.push_back(std::move(di));
    d.cells.emplace(w.base, w);
  }
  return d;
}

FatNetlist abstract_fat(const DualRailNetlist& d) {
  FatNetlist f;
  Netlist& n = f.netlist;
  n.name = d.name;
  n.clock = d.clock;
  bool pre_added = false;
  auto add_pre = [&] {
    n.ports.push_back({d.precharge, PortDir::Input, 1, false});
    pre_added = true;
  };
  for (const auto& p : d.ports) {
    n.ports.push_back(p);
    if (d.clock && p.name == *d.clock) add_pre();
  }
  if (!pre_added) n.ports.insert(n.ports.begin(), {d.precharge, PortDir::Input, 1, false});
  n.wires = d.wires;
  for (const auto& inst : d.instances) {
    const WddlCell& w = d.cell_of(inst);
    Instance fi{inst.name, w.name(), {}};
    for (const auto& p : inst.pins) fi.pins.push_back({p.pin, p.pair.base});
    if (w.sequential && w.clock && d.clock) fi.pins.push_back({*w.clock, *d.clock});
    n.instances.push_back(std::move(fi));
  }
  for (const auto& a : d.assigns) n.assigns.push_back({a.lhs, a.rhs.base});
  for (const auto& b : d.pairs()) f.rail_map[b] = {rail_name(b, true), rail_name(b, false)};
  return f;
}

Library fat_library(const WddlLibrary& wlib) {
  Library out;
  for (const auto& [base, w] : wlib.cells()) {
    const CellFunction& bf = wlib.base().at(base);
    CellFunction c = bf;
    c.name = w.name();
    c.area = w.area;
    out.add(std::move(c));
  }
  return out;
}

Netlist project_true_rail(const DualRailNetlist& d) {
  Netlist n;
  n.name = d.name;
  n.ports = d.ports;
  n.wires = d.wires;
  n.clock = d.clock;

  std::set<std::string> taken;
  for (const auto& net : n.nets()) taken.insert(net);
  for (const auto& inst : d.instances) taken.insert(inst.name);
  std::map<std::string, std::string> inverted;
  std::vector<Instance> inverters;
  auto fresh = [&](std::string stem) {
    std::string name = stem;
    for (int k = 0; taken.count(name); ++k) name = stem + "_" + std::to_string(k);
    taken.insert(name);
    return name;
  };
  auto true_net = [&](const PairRef& r) -> std::string {
    if (!r.swapped) return r.base;
    auto it = inverted.find(r.base);
    if (it != inverted.end()) return it->second;
    const std::string k = std::to_string(inverted.size());
    const std::string net = fresh("tr_n" + k);
    n.wires.push_back({net, 1, false});
    inverters.push_back({fresh("tr_inv" + k), "INV", {{"A", r.base}, {"Y", net}}});
    inverted.emplace(r.base, net);
    return net;
  };

  for (const auto& inst : d.instances) {
    const WddlCell& w = d.cell_of(inst);
    Instance si{inst.name, w.base, {}};
    for (const auto& p : inst.pins) {
      if (p.pin == w.output && p.pair.swapped)
        throw NetlistError("instance " + inst.name + " drives a swapped pair");
      si.pins.push_back({p.pin, true_net(p.pair)});
    }
    if (w.sequential && w.clock && d.clock) si.pins.push_back({*w.clock, *d.clock});
    n.instances.push_back(std::move(si));
  }
  for (const auto& a : d.assigns) n.assigns.push_back({a.lhs, true_net(a.rhs)});
  for (auto& inv : inverters) n.instances.push_back(std::move(inv));
  return n;
}

double dual_cell_area(const DualRailNetlist& d) {
  double total = 0.0;
  for (const auto& inst : d.instances) total += d.cell_of(inst).area;
  return total;
}

std::vector<std::string> validate_dual(const DualRailNetlist& d) {
  std::vector<std::string> problems;
  std::set<std::string> declared;
  for (const auto& b : d.pairs()) declared.insert(b);
  std::map<std::string, int> drivers;
  for (const auto& b : d.input_bits()) ++drivers[b];

  std::set<std::string> inst_names;
  for (const auto& inst : d.instances) {
    if (!inst_names.insert(inst.name).second) problems.push_back("instance " + inst.name + " declared twice");
    auto it = d.cells.find(inst.base);
    if (it == d.cells.end()) {
      problems.push_back("instance " + inst.name + " uses unknown compound W_" + inst.base);
      continue;
    }
    const WddlCell& w = it->second;
    if (w.is_wire()) problems.push_back("instance " + inst.name + " is an inverter or buffer");
    std::vector<std::string> want = w.inputs;
    want.push_back(w.output);
    std::set<std::string> seen;
    for (const auto& p : inst.pins) {
      if (std::find(want.begin(), want.end(), p.pin) == want.end()) {
        problems.push_back(inst.name + ": compound W_" + w.base + " has no pin " + p.pin);
        continue;
      }
      if (!seen.insert(p.pin).second) problems.push_back(inst.name + ": pin " + p.pin + " bound twice");
      if (!declared.count(p.pair.base)) problems.push_back(inst.name + ": pair " + p.pair.base + " is not declared");
      if (p.pin == w.output) ++drivers[p.pair.base];
    }
    for (const auto& p : want)
      if (!seen.count(p)) problems.push_back(inst.name + ": pin " + p + " is not connected");
  }
  for (const auto& a : d.assigns) {
    if (!declared.count(a.lhs)) problems.push_back("assign to undeclared pair " + a.lhs);
    if (!declared.count(a.rhs.base)) problems.push_back("assign from undeclared pair " + a.rhs.base);
    ++drivers[a.lhs];
  }
  for (const auto& b : declared) {
    const int c = drivers.count(b) ? drivers[b] : 0;
    if (c == 0) problems.push_back("pair " + b + " has no driver");
    if (c > 1) problems.push_back("pair " + b + " has " + std::to_string(c) + " drivers");
  }
  return problems;
}

}  // namespace wddl
