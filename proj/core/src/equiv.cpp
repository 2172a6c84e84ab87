// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/equiv.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

#include "wddl/error.hpp"
#include "wddl/gatesim.hpp"

namespace wddl {

std::string EquivVerdict::line() const {
  if (equivalent) return "EQUIV vector=- port=-";
  std::string s = fmt::format("DIFF vector={} port={}", vector.empty() ? "-" : vector, port.empty() ? "-" : port);
  if (cycle) s += fmt::format(" cycle={}", *cycle);
  return s;
}

namespace {

// Registers cut, evaluated 64 vectors at a time.
class CombModel {
 public:
  CombModel(const Netlist& n, const Library& lib) {
    for (const auto& net : n.nets()) index_.emplace(net, static_cast<int>(index_.size()));
    auto at = [&](const std::string& net) {
      auto it = index_.find(net);
      if (it == index_.end()) throw EquivalenceError("net '" + net + "' is not declared in " + n.name);
      return it->second;
    };
    for (const auto& b : n.input_bits()) add_input(b, at(b));
    for (const auto& b : n.output_bits()) add_output(b, at(b));
    struct Op {
      int out;
      std::vector<int> in;
      Expr logic;
    };
    std::vector<Op> ops;
    for (const auto& inst : n.instances) {
      const CellFunction& cell = lib.at(inst.cell);
      auto pin = [&](const std::string& p) {
        const std::string* net = inst.net_of(p);
        if (!net) throw EquivalenceError("instance " + inst.name + " leaves pin " + p + " unbound");
        return at(*net);
      };
      if (cell.sequential()) {
        add_input(inst.name + ".Q", pin(cell.output));
        add_output(inst.name + ".D", pin(cell.inputs.front()));
        continue;
      }
      Op op{pin(cell.output), {}, cell.logic};
      for (const auto& in : cell.inputs) op.in.push_back(pin(in));
      ops.push_back(std::move(op));
    }
    for (const auto& a : n.assigns) ops.push_back({at(a.lhs), {at(a.rhs)}, Expr::var(0)});

    const std::size_t N = index_.size();
    std::vector<int> driver(N, -1);
    for (std::size_t k = 0; k < ops.size(); ++k) driver[static_cast<std::size_t>(ops[k].out)] = static_cast<int>(k);
    std::vector<std::vector<int>> readers(N);
    std::vector<int> pending(ops.size(), 0);
    for (std::size_t k = 0; k < ops.size(); ++k)
      for (int in : ops[k].in)
        if (driver[static_cast<std::size_t>(in)] >= 0) {
          readers[static_cast<std::size_t>(in)].push_back(static_cast<int>(k));
          ++pending[k];
        }
    std::vector<int> ready;
    for (std::size_t k = 0; k < ops.size(); ++k)
      if (!pending[k]) ready.push_back(static_cast<int>(k));
    for (std::size_t h = 0; h < ready.size(); ++h) {
      const auto k = static_cast<std::size_t>(ready[h]);
      for (int r : readers[static_cast<std::size_t>(ops[k].out)])
        if (--pending[static_cast<std::size_t>(r)] == 0) ready.push_back(r);
    }
    if (ready.size() != ops.size()) throw EquivalenceError(n.name + " has a combinational loop");

    support_.assign(N, {});
    for (std::size_t i = 0; i < input_nets_.size(); ++i) support_[static_cast<std::size_t>(input_nets_[i])] = {static_cast<int>(i)};
    for (int k : ready) {
      Op& op = ops[static_cast<std::size_t>(k)];
      std::vector<int> s;
      for (int in : op.in) {
        const auto& si = support_[static_cast<std::size_t>(in)];
        std::vector<int> merged;
        std::set_union(s.begin(), s.end(), si.begin(), si.end(), std::back_inserter(merged));
        s = std::move(merged);
      }
      support_[static_cast<std::size_t>(op.out)] = std::move(s);
      order_.push_back({op.out, std::move(op.in), std::move(op.logic)});
    }
    words_.assign(N, 0);
  }

  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  int input_index(const std::string& name) const { return input_pos_.at(name); }
  int output_index(const std::string& name) const { return output_pos_.at(name); }
  /// Input indices that output `o` depends on, ascending.
  const std::vector<int>& support(int o) const { return support_[static_cast<std::size_t>(output_nets_[static_cast<std::size_t>(o)])]; }

  /// `in[i]` is the word of input i; returns the word of every output.
  std::vector<std::uint64_t> eval(const std::vector<std::uint64_t>& in) {
    std::fill(words_.begin(), words_.end(), 0);
    for (std::size_t i = 0; i < input_nets_.size(); ++i) words_[static_cast<std::size_t>(input_nets_[i])] = in[i];
    std::vector<std::uint64_t> buf;
    for (const auto& op : order_) {
      buf.resize(op.in.size());
      for (std::size_t i = 0; i < op.in.size(); ++i) buf[i] = words_[static_cast<std::size_t>(op.in[i])];
      words_[static_cast<std::size_t>(op.out)] = op.logic.eval(buf);
    }
    std::vector<std::uint64_t> out(output_nets_.size());
    for (std::size_t o = 0; o < out.size(); ++o) out[o] = words_[static_cast<std::size_t>(output_nets_[o])];
    return out;
  }

 private:
  struct CompiledOp {
    int out;
    std::vector<int> in;
    Expr logic;
  };
  void add_input(const std::string& name, int net) {
    input_pos_.emplace(name, static_cast<int>(inputs_.size()));
    inputs_.push_back(name);
    input_nets_.push_back(net);
  }
  void add_output(const std::string& name, int net) {
    output_pos_.emplace(name, static_cast<int>(outputs_.size()));
    outputs_.push_back(name);
    output_nets_.push_back(net);
  }

  std::unordered_map<std::string, int> index_;
  std::vector<std::string> inputs_, outputs_;
  std::map<std::string, int> input_pos_, output_pos_;
  std::vector<int> input_nets_, output_nets_;
  std::vector<CompiledOp> order_;
  std::vector<std::vector<int>> support_;
  std::vector<std::uint64_t> words_;
};

void check_same_names(std::vector<std::string> a, std::vector<std::string> b, const char* what) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a == b) return;
  std::vector<std::string> only;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only));
  throw EquivalenceError(fmt::format("port mismatch: {} {} present in only one design", what,
                                     only.empty() ? std::string("lists differ") : only.front()));
}

// Compares as integers with input 0 as the least significant bit.
bool vector_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

std::string bits_text(const std::vector<std::uint8_t>& v) {
  std::string s;
  for (auto b : v) s += b ? '1' : '0';
  return s;
}

}  // namespace

CutPorts cut_ports(const Netlist& n, const Library& lib) {
  CombModel m(n, lib);
  return {m.inputs(), m.outputs()};
}

EquivVerdict exhaustive_equiv(const Netlist& a, const Netlist& b, const Library& lib, int max_inputs) {
  CombModel ma(a, lib);
  CombModel mb(b, lib);
  check_same_names(ma.inputs(), mb.inputs(), "input");
  check_same_names(ma.outputs(), mb.outputs(), "output");
  const std::size_t ni = ma.inputs().size();
  const std::size_t no = ma.outputs().size();
  std::vector<int> b_in(ni), b_out(no);
  for (std::size_t i = 0; i < ni; ++i) b_in[i] = mb.input_index(ma.inputs()[i]);
  for (std::size_t o = 0; o < no; ++o) b_out[o] = mb.output_index(ma.outputs()[o]);

  std::map<std::vector<int>, std::vector<int>> groups;
  for (std::size_t o = 0; o < no; ++o) {
    std::vector<int> s = ma.support(static_cast<int>(o));
    for (int bi : mb.support(b_out[o])) s.push_back(ma.input_index(mb.inputs()[static_cast<std::size_t>(bi)]));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    groups[s].push_back(static_cast<int>(o));
  }
  for (const auto& [support, outs] : groups)
    if (static_cast<int>(support.size()) > max_inputs)
      throw EquivalenceError(fmt::format("output {} depends on {} inputs, more than the bound of {}",
                                         ma.outputs()[static_cast<std::size_t>(outs.front())], support.size(), max_inputs));

  std::optional<std::vector<std::uint8_t>> best;
  std::vector<std::uint64_t> wa(ni), wb(ni);
  for (const auto& [support, outs] : groups) {
    const std::size_t k = support.size();
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t base = 0; base < total; base += 64) {
      const std::uint64_t lanes = std::min<std::uint64_t>(64, total - base);
      const std::uint64_t mask = lanes == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
      std::fill(wa.begin(), wa.end(), 0);
      for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t w = 0;
        for (std::uint64_t j = 0; j < lanes; ++j) w |= (((base + j) >> i) & 1) << j;
        wa[static_cast<std::size_t>(support[i])] = w;
      }
      for (std::size_t i = 0; i < ni; ++i) wb[static_cast<std::size_t>(b_in[i])] = wa[i];
      const auto oa = ma.eval(wa);
      const auto ob = mb.eval(wb);
      std::uint64_t diff = 0;
      for (int o : outs) diff |= oa[static_cast<std::size_t>(o)] ^ ob[static_cast<std::size_t>(b_out[static_cast<std::size_t>(o)])];
      diff &= mask;
      if (!diff) continue;
      const std::uint64_t counter = base + static_cast<std::uint64_t>(std::countr_zero(diff));
      std::vector<std::uint8_t> v(ni, 0);
      for (std::size_t i = 0; i < k; ++i) v[static_cast<std::size_t>(support[i])] = static_cast<std::uint8_t>((counter >> i) & 1);
      if (!best || vector_less(v, *best)) best = std::move(v);
      break;
    }
  }
  EquivVerdict verdict;
  if (!best) return verdict;
  verdict.equivalent = false;
  verdict.vector = bits_text(*best);
  for (std::size_t i = 0; i < ni; ++i) {
    wa[i] = (*best)[i];
    wb[static_cast<std::size_t>(b_in[i])] = wa[i];
  }
  const auto oa = ma.eval(wa);
  const auto ob = mb.eval(wb);
  for (std::size_t o = 0; o < no; ++o)
    if ((oa[o] ^ ob[static_cast<std::size_t>(b_out[o])]) & 1) {
      verdict.port = ma.outputs()[o];
      break;
    }
  return verdict;
}

EquivVerdict cosim_equiv(const Netlist& a, const Library& lib, const DualRailNetlist& b, int cycles,
                         std::uint64_t seed) {
  const Simulator sa(a, lib);
  const Simulator sb(b);
  check_same_names(sa.input_names(), sb.input_names(), "input");
  check_same_names(sa.output_names(), sb.output_names(), "output");
  EquivVerdict verdict;
  if (cycles <= 0) return verdict;
  const auto stim_a = random_stimulus(sa.input_names().size(), static_cast<std::size_t>(cycles), seed);
  std::vector<std::size_t> to_b(sa.input_names().size());
  for (std::size_t i = 0; i < to_b.size(); ++i)
    to_b[i] = static_cast<std::size_t>(
        std::find(sb.input_names().begin(), sb.input_names().end(), sa.input_names()[i]) - sb.input_names().begin());
  std::vector<InputVector> stim_b(stim_a.size(), InputVector(to_b.size()));
  for (std::size_t c = 0; c < stim_a.size(); ++c)
    for (std::size_t i = 0; i < to_b.size(); ++i) stim_b[c][to_b[i]] = stim_a[c][i];
  std::vector<std::size_t> out_b(sa.output_names().size());
  for (std::size_t o = 0; o < out_b.size(); ++o)
    out_b[o] = static_cast<std::size_t>(
        std::find(sb.output_names().begin(), sb.output_names().end(), sa.output_names()[o]) - sb.output_names().begin());

  SimOptions opts;
  opts.samples_per_cycle = 1;
  const SimResult ra = sa.run(uniform_captable(sa, 0.0), stim_a, opts);
  const SimResult rb = sb.run(uniform_captable(sb, 0.0), stim_b, opts);
  std::size_t alarm = 0;
  for (std::size_t c = 0; c < stim_a.size(); ++c) {
    for (std::size_t o = 0; o < out_b.size(); ++o) {
      if (ra.outputs[c][o] == rb.outputs[c][out_b[o]]) continue;
      verdict.equivalent = false;
      verdict.vector = bits_text(stim_a[c]);
      verdict.port = sa.output_names()[o];
      verdict.cycle = static_cast<int>(c);
      return verdict;
    }
    if (alarm < rb.alarms.size() && rb.alarms[alarm].cycle == static_cast<int>(c)) {
      verdict.equivalent = false;
      verdict.vector = bits_text(stim_a[c]);
      verdict.port = rb.alarms[alarm].reg;
      verdict.cycle = static_cast<int>(c);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace wddl
