// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/gatesim.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "wddl/error.hpp"

namespace wddl {

std::string_view to_string(Phase p) { return p == Phase::Precharge ? "precharge" : "evaluate"; }

namespace {

class NetIndex {
 public:
  int add(const std::string& name, std::vector<std::string>& names) {
    auto [it, fresh] = index_.try_emplace(name, static_cast<int>(names.size()));
    if (fresh) names.push_back(name);
    return it->second;
  }
  int at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw SimulationError("unknown net '" + name + "'");
    return it->second;
  }

 private:
  std::unordered_map<std::string, int> index_;
};

}  // namespace

Simulator::Simulator(const Netlist& n, const Library& lib) {
  NetIndex idx;
  for (const auto& net : n.nets()) idx.add(net, net_names_);
  rail_.assign(net_names_.size(), Rail::Single);
  driver_.assign(net_names_.size(), std::string());
  inputs_ = n.input_bits();
  outputs_ = n.output_bits();
  std::vector<int> sources;
  for (const auto& b : inputs_) {
    input_nets_.emplace_back(idx.at(b), -1);
    sources.push_back(idx.at(b));
  }
  for (const auto& b : outputs_) output_nets_.push_back(idx.at(b));

  std::vector<Op> ops;
  for (const auto& inst : n.instances) {
    const CellFunction* cell = lib.find(inst.cell);
    if (!cell) throw SimulationError("instance " + inst.name + " uses unknown cell " + inst.cell);
    auto pin_net = [&](const std::string& pin) {
      const std::string* net = inst.net_of(pin);
      if (!net) throw SimulationError("instance " + inst.name + " leaves pin " + pin + " unbound");
      return idx.at(*net);
    };
    const int out = pin_net(cell->output);
    driver_[static_cast<std::size_t>(out)] = inst.name;
    if (cell->sequential()) {
      regs_.push_back({inst.name, pin_net(cell->inputs.front()), -1, out, -1});
      reg_names_.push_back(inst.name);
      sources.push_back(out);
      continue;
    }
    Op op{out, {}, cell->logic, 0, true, inst.name};
    for (const auto& in : cell->inputs) op.in.push_back(pin_net(in));
    ops.push_back(std::move(op));
  }
  for (const auto& a : n.assigns) ops.push_back({idx.at(a.lhs), {idx.at(a.rhs)}, Expr::var(0), 0, false, ""});
  levelize(std::move(ops), sources);
}

Simulator::Simulator(const DualRailNetlist& d) : dual_(true) {
  NetIndex idx;
  for (const auto& p : d.pairs()) {
    idx.add(rail_name(p, true), net_names_);
    idx.add(rail_name(p, false), net_names_);
  }
  rail_.resize(net_names_.size());
  for (std::size_t i = 0; i < net_names_.size(); ++i) rail_[i] = i % 2 ? Rail::False : Rail::True;
  driver_.assign(net_names_.size(), std::string());
  inputs_ = d.input_bits();
  outputs_ = d.output_bits();
  std::vector<int> sources;
  for (const auto& b : inputs_) {
    const RailPair r = d.rails_of(b);
    input_nets_.emplace_back(idx.at(r.t), idx.at(r.f));
    sources.push_back(idx.at(r.t));
    sources.push_back(idx.at(r.f));
  }
  for (const auto& b : outputs_) output_nets_.push_back(idx.at(d.rails_of(b).t));

  std::vector<Op> ops;
  for (const auto& inst : d.instances) {
    const WddlCell& cell = d.cell_of(inst);
    std::vector<int> in;
    for (const auto& in_pin : cell.inputs) {
      const PairRef* pr = inst.pair_of_pin(in_pin);
      if (!pr) throw SimulationError("instance " + inst.name + " leaves pin " + in_pin + " unbound");
      const RailPair r = pr->rails();
      in.push_back(idx.at(r.t));
      in.push_back(idx.at(r.f));
    }
    const PairRef* po = inst.pair_of_pin(cell.output);
    if (!po) throw SimulationError("instance " + inst.name + " leaves its output unbound");
    const RailPair r = po->rails();
    const int out_t = idx.at(r.t), out_f = idx.at(r.f);
    driver_[static_cast<std::size_t>(out_t)] = inst.name;
    driver_[static_cast<std::size_t>(out_f)] = inst.name;
    if (cell.sequential) {
      if (in.size() != 2) throw SimulationError("register " + inst.name + " must have one data pair");
      regs_.push_back({inst.name, in[0], in[1], out_t, out_f});
      reg_names_.push_back(inst.name);
      sources.push_back(out_t);
      sources.push_back(out_f);
      continue;
    }
    ops.push_back({out_t, in, cell.true_logic, 0, true, inst.name});
    ops.push_back({out_f, std::move(in), cell.false_logic, 0, true, inst.name});
  }
  for (const auto& a : d.assigns) {
    const RailPair rhs = a.rhs.rails();
    ops.push_back({idx.at(rail_name(a.lhs, true)), {idx.at(rhs.t)}, Expr::var(0), 0, false, ""});
    ops.push_back({idx.at(rail_name(a.lhs, false)), {idx.at(rhs.f)}, Expr::var(0), 0, false, ""});
  }
  levelize(std::move(ops), sources);
}

void Simulator::levelize(std::vector<Op> ops, const std::vector<int>& sources) {
  const std::size_t n = net_names_.size();
  std::vector<int> driver_op(n, -1);
  std::vector<char> is_source(n, 0);
  for (int s : sources) is_source[static_cast<std::size_t>(s)] = 1;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto out = static_cast<std::size_t>(ops[k].out);
    if (driver_op[out] >= 0 || is_source[out]) throw SimulationError("net " + net_names_[out] + " has several drivers");
    driver_op[out] = static_cast<int>(k);
  }
  // Kahn's algorithm over ops; an op is ready once all its input nets are final.
  std::vector<std::vector<int>> readers(n);
  std::vector<int> pending(ops.size(), 0);
  for (std::size_t k = 0; k < ops.size(); ++k)
    for (int in : ops[k].in)
      if (driver_op[static_cast<std::size_t>(in)] >= 0) {
        readers[static_cast<std::size_t>(in)].push_back(static_cast<int>(k));
        ++pending[k];
      }
  std::vector<int> ready;
  for (std::size_t k = 0; k < ops.size(); ++k)
    if (pending[k] == 0) ready.push_back(static_cast<int>(k));
  depth_.assign(n, 0);
  energy_.assign(n, 0);
  for (const auto& r : regs_) {
    energy_[static_cast<std::size_t>(r.q_t)] = 1;
    if (r.q_f >= 0) energy_[static_cast<std::size_t>(r.q_f)] = 1;
  }
  std::vector<Op> order;
  order.reserve(ops.size());
  for (std::size_t head = 0; head < ready.size(); ++head) {
    Op& op = ops[static_cast<std::size_t>(ready[head])];
    int d = 0;
    for (int in : op.in) d = std::max(d, depth_[static_cast<std::size_t>(in)]);
    op.depth = op.energy ? d + 1 : d;
    depth_[static_cast<std::size_t>(op.out)] = op.depth;
    energy_[static_cast<std::size_t>(op.out)] = op.energy ? 1 : 0;
    for (int r : readers[static_cast<std::size_t>(op.out)])
      if (--pending[static_cast<std::size_t>(r)] == 0) ready.push_back(r);
    order.push_back(std::move(op));
  }
  if (order.size() != ops.size()) {
    for (std::size_t k = 0; k < ops.size(); ++k)
      if (pending[k] > 0)
        throw SimulationError("network does not settle: combinational loop through net " +
                              net_names_[static_cast<std::size_t>(ops[k].out)]);
  }
  ops_ = std::move(order);
  max_depth_ = 0;
  for (const auto& op : ops_) max_depth_ = std::max(max_depth_, op.depth);
}

void Simulator::settle(std::vector<std::uint8_t>& v) const {
  std::uint64_t vars[64];
  std::vector<std::uint64_t> wide;
  for (const auto& op : ops_) {
    std::span<std::uint64_t> buf;
    if (op.in.size() <= 64) {
      buf = std::span<std::uint64_t>(vars, op.in.size());
    } else {
      wide.resize(op.in.size());
      buf = wide;
    }
    for (std::size_t i = 0; i < op.in.size(); ++i) buf[i] = v[static_cast<std::size_t>(op.in[i])];
    v[static_cast<std::size_t>(op.out)] = static_cast<std::uint8_t>(op.logic.eval(buf) & 1);
  }
}

const std::string& Simulator::driver_of(int net) const { return driver_.at(static_cast<std::size_t>(net)); }

std::size_t Simulator::gate_net_count() const {
  return static_cast<std::size_t>(std::count(energy_.begin(), energy_.end(), 1));
}

SimResult Simulator::run(const CapTable& caps, const std::vector<InputVector>& stimulus, const SimOptions& opts) const {
  if (opts.samples_per_cycle < 1) throw SimulationError("samples per cycle must be at least 1");
  for (std::size_t c = 0; c < stimulus.size(); ++c)
    if (stimulus[c].size() != inputs_.size())
      throw SimulationError(fmt::format("stimulus cycle {} has {} bits, the design has {} inputs", c,
                                        stimulus[c].size(), inputs_.size()));
  const int S = opts.samples_per_cycle;
  std::vector<int> energy_nets;
  std::vector<double> cap(net_names_.size(), 0.0);
  std::vector<int> bucket(net_names_.size(), 0);
  for (std::size_t i = 0; i < net_names_.size(); ++i) {
    if (!energy_[i]) continue;
    energy_nets.push_back(static_cast<int>(i));
    cap[i] = caps.total(net_names_[i]);
    bucket[i] = static_cast<int>(static_cast<long>(depth_[i]) * S / (max_depth_ + 1));
  }
  std::set<std::pair<int, std::size_t>> faults;
  for (const auto& f : opts.faults) {
    auto it = std::find(reg_names_.begin(), reg_names_.end(), f.reg);
    if (it == reg_names_.end()) throw SimulationError("fault targets unknown register " + f.reg);
    faults.emplace(f.cycle, static_cast<std::size_t>(it - reg_names_.begin()));
  }

  SimResult res;
  res.power.samples_per_cycle = S;
  const std::size_t cycles = stimulus.size();
  res.power.samples.assign(cycles, std::vector<double>(static_cast<std::size_t>(S), 0.0));
  res.power.totals.assign(cycles, 0.0);
  res.stats.evaluate_rising.assign(cycles, 0);
  res.stats.precharge_rising.assign(cycles, 0);
  res.outputs.reserve(cycles);

  std::vector<std::uint8_t> v(net_names_.size(), 0);
  std::vector<std::uint8_t> prev;
  std::vector<std::uint8_t> stored(regs_.size(), 0);

  auto account = [&](int c, Phase phase) {
    auto& row = res.power.samples[static_cast<std::size_t>(c)];
    long& count = phase == Phase::Evaluate ? res.stats.evaluate_rising[static_cast<std::size_t>(c)]
                                           : res.stats.precharge_rising[static_cast<std::size_t>(c)];
    for (int n : energy_nets) {
      const auto i = static_cast<std::size_t>(n);
      if (prev[i] || !v[i]) continue;
      ++count;
      row[static_cast<std::size_t>(bucket[i])] += cap[i];
      if (opts.record_events) res.stats.events.push_back({n, c, phase, rail_[i]});
    }
  };

  for (std::size_t c = 0; c < cycles; ++c) {
    const int ci = static_cast<int>(c);
    const InputVector& in = stimulus[c];
    if (dual_) {
      prev = v;
      for (const auto& [t, f] : input_nets_) v[static_cast<std::size_t>(t)] = v[static_cast<std::size_t>(f)] = 0;
      for (const auto& r : regs_) v[static_cast<std::size_t>(r.q_t)] = v[static_cast<std::size_t>(r.q_f)] = 0;
      settle(v);
      account(ci, Phase::Precharge);
      prev = v;
      for (std::size_t k = 0; k < input_nets_.size(); ++k) {
        const std::uint8_t b = in[k] ? 1 : 0;
        v[static_cast<std::size_t>(input_nets_[k].first)] = b;
        v[static_cast<std::size_t>(input_nets_[k].second)] = b ^ 1;
      }
      for (std::size_t k = 0; k < regs_.size(); ++k) {
        v[static_cast<std::size_t>(regs_[k].q_t)] = stored[k];
        v[static_cast<std::size_t>(regs_[k].q_f)] = stored[k] ^ 1;
      }
      settle(v);
      account(ci, Phase::Evaluate);
    } else {
      prev = v;
      for (std::size_t k = 0; k < input_nets_.size(); ++k)
        v[static_cast<std::size_t>(input_nets_[k].first)] = in[k] ? 1 : 0;
      for (std::size_t k = 0; k < regs_.size(); ++k) v[static_cast<std::size_t>(regs_[k].q_t)] = stored[k];
      settle(v);
      account(ci, Phase::Evaluate);
    }
    auto& out = res.outputs.emplace_back(output_nets_.size());
    for (std::size_t k = 0; k < output_nets_.size(); ++k) out[k] = v[static_cast<std::size_t>(output_nets_[k])];
    double total = 0.0;
    for (double s : res.power.samples[c]) total += s;
    res.power.totals[c] = total;

    for (std::size_t k = 0; k < regs_.size(); ++k) {
      const Reg& r = regs_[k];
      if (!dual_) {
        stored[k] = v[static_cast<std::size_t>(r.d_t)];
        continue;
      }
      bool t = v[static_cast<std::size_t>(r.d_t)] != 0;
      bool f = v[static_cast<std::size_t>(r.d_f)] != 0;
      if (faults.count({ci, k})) t = f = false;
      if (fault_alarm(t, f)) {
        res.alarms.push_back({ci, r.name, t, f});
        continue;
      }
      stored[k] = t ? 1 : 0;
    }
  }
  return res;
}

PrechargeVerdict Simulator::check_precharge() const {
  std::vector<std::uint8_t> v(net_names_.size(), 0);
  settle(v);
  PrechargeVerdict verdict;
  for (const auto& op : ops_) {
    if (!v[static_cast<std::size_t>(op.out)]) continue;
    const bool inputs_low = std::none_of(op.in.begin(), op.in.end(), [&](int i) { return v[static_cast<std::size_t>(i)] != 0; });
    if (!inputs_low) continue;
    verdict.pass = false;
    verdict.gate = op.name.empty() ? "assign" : op.name;
    verdict.net = net_names_[static_cast<std::size_t>(op.out)];
    verdict.message = fmt::format("gate {} drives {} to 1 with all inputs at 0", verdict.gate, verdict.net);
    return verdict;
  }
  return verdict;
}

SimResult simulate(const Netlist& n, const Library& lib, const CapTable& caps,
                   const std::vector<InputVector>& stimulus, const SimOptions& opts) {
  return Simulator(n, lib).run(caps, stimulus, opts);
}

SimResult simulate(const DualRailNetlist& d, const CapTable& caps, const std::vector<InputVector>& stimulus,
                   const SimOptions& opts) {
  return Simulator(d).run(caps, stimulus, opts);
}

PrechargeVerdict precharge_check(const DualRailNetlist& d) { return Simulator(d).check_precharge(); }

std::vector<long> switching_histogram(const SwitchStats& s) { return s.evaluate_rising; }

CapTable fanout_captable(const Netlist& n, const Library& lib) {
  CapTable t;
  for (const auto& net : n.nets()) t.nets[net];
  for (const auto& inst : n.instances) {
    const CellFunction& cell = lib.at(inst.cell);
    for (const auto& in : cell.inputs)
      if (const std::string* net = inst.net_of(in)) t.nets[*net].pin += cell.input_cap;
  }
  return t;
}

CapTable fanout_captable(const DualRailNetlist& d) {
  CapTable t;
  for (const auto& p : d.pairs()) {
    t.nets[rail_name(p, true)];
    t.nets[rail_name(p, false)];
  }
  for (const auto& inst : d.instances) {
    const WddlCell& cell = d.cell_of(inst);
    for (const auto& in : cell.inputs)
      if (const PairRef* pr = inst.pair_of_pin(in)) {
        const RailPair r = pr->rails();
        t.nets[r.t].pin += cell.input_cap;
        t.nets[r.f].pin += cell.input_cap;
      }
  }
  return t;
}

CapTable uniform_captable(const Simulator& sim, double cap) {
  CapTable t;
  for (const auto& n : sim.net_names()) t.nets[n] = {cap, 0.0};
  return t;
}

std::vector<InputVector> random_stimulus(std::size_t width, std::size_t cycles, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<InputVector> out(cycles, InputVector(width));
  for (auto& v : out)
    for (auto& b : v) b = static_cast<std::uint8_t>(rng() >> 63);
  return out;
}

std::string emit_trace_csv(const PowerTrace& t) {
  std::string out = "cycle,total_energy";
  for (int s = 0; s < t.samples_per_cycle; ++s) out += fmt::format(",s{}", s);
  out += '\n';
  for (std::size_t c = 0; c < t.samples.size(); ++c) {
    out += fmt::format("{},{}", c, t.totals[c]);
    for (double s : t.samples[c]) out += fmt::format(",{}", s);
    out += '\n';
  }
  return out;
}

}  // namespace wddl
