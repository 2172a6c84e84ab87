// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/netlist.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace wddl {

namespace {

std::vector<std::string> bus_bits(const std::string& name, int width, bool bus) {
  if (!bus) return {name};
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) out.push_back(name + "[" + std::to_string(i) + "]");
  return out;
}

}  // namespace

std::vector<std::string> Port::bits() const { return bus_bits(name, width, bus); }
std::vector<std::string> Wire::bits() const { return bus_bits(name, width, bus); }

const std::string* Instance::net_of(std::string_view pin) const {
  for (const auto& b : pins)
    if (b.pin == pin) return &b.net;
  return nullptr;
}

std::vector<std::string> Netlist::nets() const {
  std::vector<std::string> out;
  for (const auto& p : ports)
    for (auto& b : p.bits()) out.push_back(std::move(b));
  for (const auto& w : wires)
    for (auto& b : w.bits()) out.push_back(std::move(b));
  return out;
}

std::vector<std::string> Netlist::input_bits(bool include_clock) const {
  std::vector<std::string> out;
  for (const auto& p : ports) {
    if (p.dir != PortDir::Input) continue;
    for (auto& b : p.bits()) {
      if (!include_clock && clock && b == *clock) continue;
      out.push_back(std::move(b));
    }
  }
  return out;
}

std::vector<std::string> Netlist::output_bits() const {
  std::vector<std::string> out;
  for (const auto& p : ports)
    if (p.dir == PortDir::Output)
      for (auto& b : p.bits()) out.push_back(std::move(b));
  return out;
}

const Port* Netlist::find_port(std::string_view n) const {
  for (const auto& p : ports)
    if (p.name == n) return &p;
  return nullptr;
}

const Instance* Netlist::find_instance(std::string_view n) const {
  for (const auto& i : instances)
    if (i.name == n) return &i;
  return nullptr;
}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::UnknownCell:
      return "unknown-cell";
    case DiagnosticKind::UnknownPin:
      return "unknown-pin";
    case DiagnosticKind::UnboundPin:
      return "unbound-pin";
    case DiagnosticKind::UndeclaredNet:
      return "undeclared-net";
    case DiagnosticKind::DuplicateName:
      return "duplicate-name";
    case DiagnosticKind::MultipleDrivers:
      return "multiple-drivers";
    case DiagnosticKind::Undriven:
      return "undriven";
    case DiagnosticKind::CombinationalCycle:
      return "combinational-cycle";
  }
  return "?";
}

std::vector<Diagnostic> validate_netlist(const Netlist& n, const Library& lib) {
  std::vector<Diagnostic> diags;
  auto report = [&](DiagnosticKind k, std::string obj, std::string msg) {
    diags.push_back({k, std::move(obj), std::move(msg)});
  };

  std::set<std::string> declared;
  {
    std::set<std::string> names;
    for (const auto& p : n.ports)
      if (!names.insert(p.name).second)
        report(DiagnosticKind::DuplicateName, p.name, "port declared twice");
    for (const auto& w : n.wires)
      if (!names.insert(w.name).second)
        report(DiagnosticKind::DuplicateName, w.name, "wire collides with another declaration");
    for (auto& b : n.nets()) declared.insert(std::move(b));
    std::set<std::string> inst_names;
    for (const auto& i : n.instances)
      if (!inst_names.insert(i.name).second)
        report(DiagnosticKind::DuplicateName, i.name, "instance name used twice");
  }

  // Driver bookkeeping: -1 = input port, -2 - k = assign k, >= 0 = instance.
  std::map<std::string, std::vector<int>> drivers;
  std::map<std::string, std::vector<int>> loads;
  for (const auto& p : n.ports)
    if (p.dir == PortDir::Input)
      for (auto& b : p.bits()) drivers[b].push_back(-1);

  auto check_net = [&](const std::string& net, const std::string& owner) {
    if (!declared.count(net))
      report(DiagnosticKind::UndeclaredNet, net, "net used by " + owner + " is not declared");
  };

  for (std::size_t k = 0; k < n.instances.size(); ++k) {
    const auto& inst = n.instances[k];
    const CellFunction* cell = lib.find(inst.cell);
    if (!cell) {
      report(DiagnosticKind::UnknownCell, inst.name,
             "instance " + inst.name + " references unknown cell function '" + inst.cell + "'");
      continue;
    }
    std::set<std::string> bound;
    for (const auto& b : inst.pins) {
      if (!cell->has_pin(b.pin)) {
        report(DiagnosticKind::UnknownPin, inst.name + "." + b.pin,
               "cell " + cell->name + " has no pin '" + b.pin + "'");
        continue;
      }
      if (!bound.insert(b.pin).second) {
        report(DiagnosticKind::DuplicateName, inst.name + "." + b.pin, "pin bound twice");
        continue;
      }
      check_net(b.net, inst.name);
      if (b.pin == cell->output)
        drivers[b.net].push_back(static_cast<int>(k));
      else
        loads[b.net].push_back(static_cast<int>(k));
    }
    std::vector<std::string> all = cell->inputs;
    all.push_back(cell->output);
    if (cell->clock) all.push_back(*cell->clock);
    for (const auto& p : all)
      if (!bound.count(p))
        report(DiagnosticKind::UnboundPin, inst.name + "." + p, "pin " + p + " is not connected");
  }
  for (std::size_t k = 0; k < n.assigns.size(); ++k) {
    const auto& a = n.assigns[k];
    check_net(a.lhs, "assign");
    check_net(a.rhs, "assign");
    drivers[a.lhs].push_back(-2 - static_cast<int>(k));
  }

  for (const auto& net : declared) {
    auto it = drivers.find(net);
    const std::size_t count = it == drivers.end() ? 0 : it->second.size();
    if (count > 1)
      report(DiagnosticKind::MultipleDrivers, net, "net " + net + " has " + std::to_string(count) + " drivers");
    else if (count == 0)
      report(DiagnosticKind::Undriven, net, "net " + net + " has no driver");
  }

  // Combinational cycles: Tarjan over instances and assigns.
  const int ni = static_cast<int>(n.instances.size());
  const int na = static_cast<int>(n.assigns.size());
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(ni + na));
  std::vector<bool> comb(static_cast<std::size_t>(ni + na), true);
  std::unordered_map<std::string, std::vector<int>> consumers;
  for (int k = 0; k < ni; ++k) {
    const auto& inst = n.instances[static_cast<std::size_t>(k)];
    const CellFunction* cell = lib.find(inst.cell);
    if (!cell || cell->sequential()) {
      comb[static_cast<std::size_t>(k)] = false;
      continue;
    }
    for (const auto& in : cell->inputs)
      if (const auto* net = inst.net_of(in)) consumers[*net].push_back(k);
  }
  for (int k = 0; k < na; ++k) consumers[n.assigns[static_cast<std::size_t>(k)].rhs].push_back(ni + k);
  auto outputs_of = [&](int node) -> std::vector<std::string> {
    if (node >= ni) return {n.assigns[static_cast<std::size_t>(node - ni)].lhs};
    const auto& inst = n.instances[static_cast<std::size_t>(node)];
    const CellFunction* cell = lib.find(inst.cell);
    if (!cell) return {};
    if (const auto* net = inst.net_of(cell->output)) return {*net};
    return {};
  };
  for (int k = 0; k < ni + na; ++k) {
    if (!comb[static_cast<std::size_t>(k)]) continue;
    for (const auto& out : outputs_of(k)) {
      auto it = consumers.find(out);
      if (it == consumers.end()) continue;
      for (int c : it->second)
        if (comb[static_cast<std::size_t>(c)]) succ[static_cast<std::size_t>(k)].push_back(c);
    }
  }

  std::vector<int> idx(succ.size(), -1), low(succ.size(), 0);
  std::vector<bool> on_stack(succ.size(), false);
  std::vector<int> stack;
  int counter = 0;
  auto node_name = [&](int k) {
    return k < ni ? n.instances[static_cast<std::size_t>(k)].name
                  : "assign " + n.assigns[static_cast<std::size_t>(k - ni)].lhs;
  };
  std::function<void(int)> strong = [&](int v) {
    idx[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
    stack.push_back(v);
    on_stack[static_cast<std::size_t>(v)] = true;
    bool self_loop = false;
    for (int w : succ[static_cast<std::size_t>(v)]) {
      if (w == v) self_loop = true;
      if (idx[static_cast<std::size_t>(w)] < 0) {
        strong(w);
        low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], low[static_cast<std::size_t>(w)]);
      } else if (on_stack[static_cast<std::size_t>(w)]) {
        low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], idx[static_cast<std::size_t>(w)]);
      }
    }
    if (low[static_cast<std::size_t>(v)] != idx[static_cast<std::size_t>(v)]) return;
    std::vector<int> scc;
    int w = -1;
    do {
      w = stack.back();
      stack.pop_back();
      on_stack[static_cast<std::size_t>(w)] = false;
      scc.push_back(w);
    } while (w != v);
    if (scc.size() > 1 || self_loop) {
      std::sort(scc.begin(), scc.end());
      std::string members;
      for (std::size_t i = 0; i < scc.size(); ++i) members += (i ? ", " : "") + node_name(scc[i]);
      report(DiagnosticKind::CombinationalCycle, node_name(scc.front()),
             "combinational cycle through " + members);
    }
  };
  for (int k = 0; k < ni + na; ++k)
    if (comb[static_cast<std::size_t>(k)] && idx[static_cast<std::size_t>(k)] < 0) strong(k);

  return diags;
}

double cell_area(const Netlist& n, const Library& lib) {
  double total = 0.0;
  for (const auto& inst : n.instances) total += lib.at(inst.cell).area;
  return total;
}

std::pair<std::string, std::optional<int>> split_bit(std::string_view net) {
  if (!net.empty() && net.back() == ']') {
    auto open = net.rfind('[');
    if (open != std::string_view::npos) {
      int v = 0;
      bool ok = open + 1 < net.size() - 1;
      for (std::size_t i = open + 1; i + 1 < net.size(); ++i) {
        if (net[i] < '0' || net[i] > '9') {
          ok = false;
          break;
        }
        v = v * 10 + (net[i] - '0');
      }
      if (ok) return {std::string(net.substr(0, open)), v};
    }
  }
  return {std::string(net), std::nullopt};
}

}  // namespace wddl
