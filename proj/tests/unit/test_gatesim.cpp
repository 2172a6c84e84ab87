// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <numeric>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "wddl/des.hpp"
#include "wddl/error.hpp"
#include "wddl/gatesim.hpp"
#include "wddl/library.hpp"
#include "wddl/netlist.hpp"
#include "wddl/substitute.hpp"

using namespace wddl;

namespace {

const char* kAnd = "module g (a, b, y);\ninput a;\ninput b;\noutput y;\nAND2 u (.A(a), .B(b), .Y(y));\nendmodule\n";

double variance(const std::vector<long>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0;
  for (long x : v) s += (static_cast<double>(x) - m) * (static_cast<double>(x) - m);
  return s / static_cast<double>(v.size());
}

std::vector<InputVector> repeat(const InputVector& v, std::size_t n) { return std::vector<InputVector>(n, v); }

DualRailNetlist des_dual() {
  const Library lib = base_library();
  return substitute_cells(build_des_module(DutConfig{}, lib), WddlLibrary(lib));
}

}  // namespace

TEST_CASE("WDDL AND with balanced caps draws exactly one rail's charge") {
  const Library lib = base_library();
  const DualRailNetlist d = substitute_cells(parse_netlist(kAnd, lib), WddlLibrary(lib));
  const Simulator sim(d);
  const double c = 2.5;
  for (int v = 0; v < 4; ++v) {
    const SimResult r = sim.run(uniform_captable(sim, c), {{static_cast<std::uint8_t>(v & 1), static_cast<std::uint8_t>(v >> 1)}});
    CHECK(r.power.totals[0] == c);
    CHECK(r.stats.evaluate_rising[0] == 1);
    CHECK(r.stats.precharge_rising[0] == 0);
  }
}

TEST_CASE("WDDL AND with unequal rail caps") {
  const Library lib = base_library();
  const DualRailNetlist d = substitute_cells(parse_netlist(kAnd, lib), WddlLibrary(lib));
  const Simulator sim(d);
  CapTable caps = uniform_captable(sim, 1.0);
  caps.nets["y_t"] = {3.0, 0.0};
  caps.nets["y_f"] = {5.0, 0.0};
  CHECK(sim.run(caps, {{1, 1}}).power.totals[0] == 3.0);
  CHECK(sim.run(caps, {{0, 1}}).power.totals[0] == 5.0);
}

TEST_CASE("single-ended AND with a constant 0 output draws nothing") {
  const Library lib = base_library();
  const Simulator sim(parse_netlist(kAnd, lib), lib);
  const SimResult r = sim.run(uniform_captable(sim, 1.0), {{0, 0}, {1, 0}, {0, 1}, {0, 0}});
  for (double t : r.power.totals) CHECK(t == 0.0);
  const SimResult rise = sim.run(uniform_captable(sim, 1.0), {{0, 0}, {1, 1}, {1, 1}, {0, 0}, {1, 1}});
  CHECK(rise.power.totals == std::vector<double>{0, 1, 0, 0, 1});
}

TEST_CASE("energy lands in the bucket of the driver's depth") {
  const Library lib = base_library();
  const Netlist n = parse_netlist(
      "module c (a, b, y);\ninput a;\ninput b;\noutput y;\nwire p;\nwire q;\n"
      "AND2 g1 (.A(a), .B(b), .Y(p));\nAND2 g2 (.A(p), .B(b), .Y(q));\nAND2 g3 (.A(q), .B(b), .Y(y));\nendmodule\n",
      lib);
  const Simulator sim(n, lib);
  const int spc = 12;
  const SimResult r = sim.run(uniform_captable(sim, 1.0), {{1, 1}}, SimOptions{.samples_per_cycle = spc});
  // Gate depths 1, 2, 3 with inputs at depth 0; bucket = depth * spc / (3 + 1).
  std::vector<double> expect(spc, 0.0);
  for (int depth = 1; depth <= 3; ++depth) expect[static_cast<std::size_t>(depth * spc / 4)] += 1.0;
  CHECK(r.power.samples[0] == expect);
}

TEST_CASE("precharge check") {
  const Library lib = base_library();
  const WddlLibrary wlib(lib);
  CHECK(precharge_check(des_dual()).pass);
  CHECK(precharge_check(DualRailNetlist{}).pass);
  DualRailNetlist d = substitute_cells(parse_netlist(kAnd, lib), wlib);
  test::inject_non_monotone(d, 0, 0);
  const PrechargeVerdict v = precharge_check(d);
  CHECK_FALSE(v.pass);
  CHECK(v.gate == "u");
}

TEST_CASE("precharge check catches every injected inverting gate") {
  const WddlLibrary wlib(base_library());
  int injected = 0, caught = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const DualRailNetlist base = substitute_cells(test::random_sequential(s), wlib);
    CHECK(precharge_check(base).pass);
    for (std::size_t i = 0; i < base.instances.size(); ++i) {
      if (base.cell_of(base.instances[i]).sequential) continue;
      DualRailNetlist d = base;
      test::inject_non_monotone(d, i, static_cast<int>(i + s));
      ++injected;
      const PrechargeVerdict v = precharge_check(d);
      caught += !v.pass && v.gate == base.instances[i].name;
    }
  }
  CHECK(injected > 50);
  CHECK(caught == injected);
}

TEST_CASE("alarm rule") {
  CHECK_FALSE(fault_alarm(true, false));
  CHECK_FALSE(fault_alarm(false, true));
  CHECK(fault_alarm(false, false));
  CHECK(fault_alarm(true, true));
}

TEST_CASE("forced (0,0) register input raises an alarm in that cycle") {
  const DualRailNetlist d = des_dual();
  const Simulator sim(d);
  const auto stim = random_stimulus(sim.input_names().size(), 20, 3);
  const SimResult clean = sim.run(uniform_captable(sim, 1.0), stim);
  CHECK(clean.alarms.empty());
  SimOptions o;
  o.faults = {{7, "out_reg2"}, {12, "pl_reg0"}};
  const SimResult r = sim.run(uniform_captable(sim, 1.0), stim, o);
  REQUIRE(r.alarms.size() == 2);
  CHECK(r.alarms[0].cycle == 7);
  CHECK(r.alarms[0].reg == "out_reg2");
  CHECK_FALSE(r.alarms[0].t);
  CHECK_FALSE(r.alarms[0].f);
  CHECK(r.alarms[1].cycle == 12);
}

TEST_CASE("WDDL DES switches the same number of gates every cycle, idle or not") {
  const DualRailNetlist d = des_dual();
  const Simulator sim(d);
  // Every compound and register pair drives one rail pair.
  const std::size_t gates = d.instances.size();
  auto stim = random_stimulus(sim.input_names().size(), 100, 11);
  const SimResult r = sim.run(uniform_captable(sim, 1.0), stim);
  const auto h = switching_histogram(r.stats);
  CHECK(variance(h) == 0.0);
  CHECK(h.front() == static_cast<long>(gates));

  // Interleave 50 idle cycles (inputs repeated).
  std::vector<InputVector> mixed;
  for (std::size_t i = 0; i < 50; ++i) {
    mixed.push_back(stim[i]);
    mixed.push_back(stim[i]);
  }
  const auto h2 = switching_histogram(sim.run(uniform_captable(sim, 1.0), mixed).stats);
  CHECK(variance(h2) == 0.0);
  CHECK(h2.front() == h.front());
}

TEST_CASE("single-ended DES stops switching under constant inputs") {
  const Library lib = base_library();
  const Simulator sim(build_des_module(DutConfig{}, lib), lib);
  InputVector v(sim.input_names().size(), 1);
  const auto h = switching_histogram(sim.run(uniform_captable(sim, 1.0), repeat(v, 8)).stats);
  CHECK(h[0] + h[1] + h[2] > 0);
  for (std::size_t c = 3; c < h.size(); ++c) CHECK(h[c] == 0);
}

TEST_CASE("dual-rail properties on the random corpus") {
  const Library lib = base_library();
  const WddlLibrary wlib(lib);
  for (std::uint64_t s = 1; s <= 15; ++s) {
    const Netlist n = test::random_sequential(s);
    const DualRailNetlist d = substitute_cells(n, wlib);
    const Simulator se(n, lib), dr(d);
    REQUIRE(se.input_names() == dr.input_names());
    REQUIRE(se.output_names() == dr.output_names());
    const auto stim = random_stimulus(se.input_names().size(), 40, s);
    const SimResult a = se.run(uniform_captable(se, 1.0), stim);

    // Random but balanced caps.
    std::mt19937_64 rng(s);
    CapTable caps;
    for (const auto& p : d.pairs()) {
      const double c = std::uniform_real_distribution<double>(1.0, 9.0)(rng);
      const RailPair rp = d.rails_of(p);
      caps.nets[rp.t] = {c, 0.0};
      caps.nets[rp.f] = {c, 0.0};
    }
    const SimResult b = dr.run(caps, stim, SimOptions{.record_events = true});
    CHECK(a.outputs == b.outputs);
    CHECK(b.alarms.empty());

    // Constant energy and identical sample vectors every cycle.
    for (std::size_t c = 1; c < b.power.samples.size(); ++c) CHECK(b.power.samples[c] == b.power.samples[0]);

    // Every driven pair has exactly one rising rail per evaluate phase.
    std::map<std::pair<int, std::string>, int> rises;
    double event_energy = 0;
    for (const auto& e : b.stats.events) {
      const std::string& net = dr.net_names()[static_cast<std::size_t>(e.net)];
      event_energy += caps.total(net);
      CHECK(e.phase == Phase::Evaluate);
      ++rises[{e.cycle, split_rail(net)->first}];
    }
    for (const auto& [k, count] : rises) CHECK(count == 1);

    // Energy additivity and sample sums.
    double total = 0;
    for (std::size_t c = 0; c < b.power.totals.size(); ++c) {
      double sum = 0;
      for (double x : b.power.samples[c]) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(sum == doctest::Approx(b.power.totals[c]));
      total += b.power.totals[c];
    }
    CHECK(total == doctest::Approx(event_energy));
  }
}

TEST_CASE("simulator input errors") {
  const Library lib = base_library();
  const Simulator sim(parse_netlist(kAnd, lib), lib);
  CHECK_THROWS_AS(sim.run(uniform_captable(sim, 1.0), {{1}}), SimulationError);
  CHECK_THROWS_AS(sim.run(CapTable{}, {{1, 1}}), SimulationError);
}

TEST_CASE("trace CSV layout") {
  const Library lib = base_library();
  const Simulator sim(parse_netlist(kAnd, lib), lib);
  // Depth 1 of max depth 1 lands in bucket 1 * 3 / 2 = 1.
  const SimResult r = sim.run(uniform_captable(sim, 1.0), {{1, 1}}, SimOptions{.samples_per_cycle = 3});
  CHECK(emit_trace_csv(r.power) == "cycle,total_energy,s0,s1,s2\n0,1,0,1,0\n");
}
