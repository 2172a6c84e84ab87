// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wddl/captable.hpp"
#include "wddl/library.hpp"
#include "wddl/netlist.hpp"
#include "wddl/substitute.hpp"

namespace wddl {

enum class Phase : std::uint8_t { Precharge, Evaluate };
/// Which rail of a pair a net is; single-ended nets are `Single`.
enum class Rail : std::uint8_t { Single, True, False };

std::string_view to_string(Phase p);

/// One bit per logical input, in `input_bits()` order.
using InputVector = std::vector<std::uint8_t>;

struct SimState {
  std::vector<std::uint8_t> values;     // per net
  std::vector<std::uint8_t> registers;  // stored logical value per register
  int cycle = 0;
  Phase phase = Phase::Evaluate;
};

struct PowerTrace {
  int samples_per_cycle = 0;
  /// samples[cycle][bucket].
  std::vector<std::vector<double>> samples;
  std::vector<double> totals;
};

struct SwitchEvent {
  int net = 0;
  int cycle = 0;
  Phase phase = Phase::Evaluate;
  Rail rail = Rail::Single;
};

struct SwitchStats {
  /// Rising transitions of gate-driven nets per cycle, per phase.
  std::vector<long> evaluate_rising;
  std::vector<long> precharge_rising;
  /// Filled only when `SimOptions::record_events` is set.
  std::vector<SwitchEvent> events;
};

struct Alarm {
  int cycle = 0;
  std::string reg;
  bool t = false;
  bool f = false;
};

/// Forces the data pair of register `reg` to (0,0) at the capture of `cycle`.
struct FaultInjection {
  int cycle = 0;
  std::string reg;
};

struct SimOptions {
  int samples_per_cycle = 800;
  bool record_events = false;
  std::vector<FaultInjection> faults;
};

struct SimResult {
  /// Settled output values per cycle (true rails for dual-rail designs).
  std::vector<std::vector<std::uint8_t>> outputs;
  PowerTrace power;
  SwitchStats stats;
  std::vector<Alarm> alarms;
};

struct PrechargeVerdict {
  bool pass = true;
  std::string gate;
  std::string net;
  std::string message;
};

/// Levelized zero-delay model of a netlist, built once and run many times.
///
/// Single-ended: each cycle applies the inputs and register outputs, settles
/// and counts the nets that rose since the previous cycle (all nets start at
/// 0). Dual-rail: each cycle is a precharge phase (inputs and register outputs
/// at (0,0)) followed by an evaluate phase; rising nets are counted in both.
/// A net rising adds its capacitance to the bucket
/// floor(depth * samples_per_cycle / (max_depth + 1)) of its driver. Port and
/// alias nets carry no energy. Registers reset to 0 and capture at the end of
/// each evaluate phase; a (0,0) or (1,1) data pair raises an alarm and the
/// register keeps its value.
class Simulator {
 public:
  Simulator(const Netlist& n, const Library& lib);
  explicit Simulator(const DualRailNetlist& d);

  bool dual_rail() const noexcept { return dual_; }
  const std::vector<std::string>& input_names() const noexcept { return inputs_; }
  const std::vector<std::string>& output_names() const noexcept { return outputs_; }
  const std::vector<std::string>& net_names() const noexcept { return net_names_; }
  const std::vector<std::string>& register_names() const noexcept { return reg_names_; }
  /// Instance driving `net`, empty for ports and aliases.
  const std::string& driver_of(int net) const;
  int max_depth() const noexcept { return max_depth_; }
  /// Number of gate-driven nets (rails count separately).
  std::size_t gate_net_count() const;

  /// Throws SimulationError on a stimulus width mismatch or a gate-driven net
  /// missing from `caps`.
  SimResult run(const CapTable& caps, const std::vector<InputVector>& stimulus, const SimOptions& opts = {}) const;

  /// Settles one precharge phase and reports the first gate whose output is 1
  /// while all of its inputs are 0.
  PrechargeVerdict check_precharge() const;

 private:
  struct Op {
    int out = 0;
    std::vector<int> in;
    Expr logic = Expr::constant(false);
    int depth = 0;
    bool energy = false;
    std::string name;
  };
  struct Reg {
    std::string name;
    int d_t = -1, d_f = -1;  // data pair (d_f unused when single-ended)
    int q_t = -1, q_f = -1;
  };

  void levelize(std::vector<Op> ops, const std::vector<int>& sources);
  void settle(std::vector<std::uint8_t>& v) const;

  bool dual_ = false;
  std::vector<std::string> net_names_;
  std::vector<Rail> rail_;
  std::vector<std::string> driver_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<std::string> reg_names_;
  std::vector<std::pair<int, int>> input_nets_;   // (t, f); f = -1 when single-ended
  std::vector<int> output_nets_;
  std::vector<Reg> regs_;
  std::vector<Op> ops_;  // topological order
  std::vector<int> depth_;
  std::vector<char> energy_;
  int max_depth_ = 0;
};

SimResult simulate(const Netlist& n, const Library& lib, const CapTable& caps,
                   const std::vector<InputVector>& stimulus, const SimOptions& opts = {});
SimResult simulate(const DualRailNetlist& d, const CapTable& caps, const std::vector<InputVector>& stimulus,
                   const SimOptions& opts = {});

/// PASS iff every rail settles to 0 with all inputs and registers precharged.
PrechargeVerdict precharge_check(const DualRailNetlist& d);

/// True when a captured register pair is invalid: (0,0) or (1,1).
constexpr bool fault_alarm(bool t, bool f) { return t == f; }

/// Evaluate-phase rising count per cycle (for single-ended designs, the
/// rising count per cycle).
std::vector<long> switching_histogram(const SwitchStats& s);

/// Capacitance = input_cap of every driven sink pin, no wire load.
CapTable fanout_captable(const Netlist& n, const Library& lib);
CapTable fanout_captable(const DualRailNetlist& d);
/// The same value on every net of the simulator.
CapTable uniform_captable(const Simulator& sim, double cap);

/// `cycles` uniformly random input vectors of `width` bits.
std::vector<InputVector> random_stimulus(std::size_t width, std::size_t cycles, std::uint64_t seed);

/// `cycle,total_energy,s0,...` one row per cycle.
std::string emit_trace_csv(const PowerTrace& t);

}  // namespace wddl
