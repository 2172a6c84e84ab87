// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

// Runs the ten acceptance criteria and prints one PASS/FAIL line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "wddl/des.hpp"
#include "wddl/diffroute.hpp"
#include "wddl/drc.hpp"
#include "wddl/equiv.hpp"
#include "wddl/flow.hpp"
#include "wddl/gatesim.hpp"
#include "wddl/library.hpp"
#include "wddl/place.hpp"
#include "wddl/route.hpp"
#include "wddl/sca.hpp"
#include "wddl/substitute.hpp"

using namespace wddl;
namespace fs = std::filesystem;

namespace {

constexpr int kKey = 46;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Shared DES designs: reference and WDDL, each placed, routed and extracted.
struct Des {
  Library lib = base_library();
  Netlist rtl;
  DualRailNetlist dual;
  FatNetlist fat;
  LibraryPair libs;
  RoutedDesign fat_routed;
  RoutedDesign diff;
  CapTable dual_caps;
  LibraryGeometry single;
  CapTable ref_caps;
};

const Des& des() {
  static const Des d = [] {
    Des x;
    x.rtl = build_des_module(DutConfig{.key = kKey}, x.lib);
    const WddlLibrary wlib(x.lib);
    x.dual = substitute_cells(x.rtl, wlib);
    x.fat = abstract_fat(x.dual);
    x.libs = build_libraries(fat_library(wlib));
    x.fat_routed = route(place(x.fat.netlist, x.libs.fat, PlaceOptions{}), x.libs.fat);
    x.diff = decompose(x.fat_routed, x.libs.fat, x.libs.diff, &x.fat.rail_map);
    x.dual_caps = extract_capacitance(x.diff, x.libs.diff);
    x.single = build_single_library(x.lib);
    return x;
  }();
  return d;
}

Outcome substitution_soundness() {
  const WddlLibrary wlib(base_library());
  const auto t0 = Clock::now();
  int total = 0, ok = 0;
  for (std::uint64_t s = 1; s <= 60; ++s) {
    const Netlist n = test::random_netlist(s, 12, 40);
    ++total;
    ok += exhaustive_equiv(n, project_true_rail(substitute_cells(n, wlib)), wlib.base(), 12).equivalent;
  }
  const double t = seconds_since(t0);
  return {ok == total && total >= 50 && t < 10.0,
          std::to_string(ok) + "/" + std::to_string(total) + " equivalent in " + fmt_double(t) + " s"};
}

Outcome precharge_wave() {
  const WddlLibrary wlib(base_library());
  int designs = 0, clean = 0, injected = 0, caught = 0;
  for (std::uint64_t s = 1; s <= 60; ++s) {
    const DualRailNetlist base = substitute_cells(test::random_netlist(s, 12, 40), wlib);
    ++designs;
    clean += precharge_check(base).pass;
    for (std::size_t i = 0; i < base.instances.size(); ++i) {
      DualRailNetlist d = base;
      test::inject_non_monotone(d, i, static_cast<int>(i + s));
      ++injected;
      caught += !precharge_check(d).pass;
    }
  }
  return {clean == designs && caught == injected && injected > 0,
          std::to_string(clean) + "/" + std::to_string(designs) + " clean, " + std::to_string(caught) + "/" +
              std::to_string(injected) + " mutations detected"};
}

double variance(const std::vector<long>& v) {
  double m = 0;
  for (long x : v) m += static_cast<double>(x);
  m /= static_cast<double>(v.size());
  double s = 0;
  for (long x : v) s += (static_cast<double>(x) - m) * (static_cast<double>(x) - m);
  return s / static_cast<double>(v.size());
}

Outcome constant_switching() {
  const Des& d = des();
  const Simulator sim(d.dual);
  auto stim = random_stimulus(sim.input_names().size(), 2000, 1);
  stim.insert(stim.end(), 100, InputVector(sim.input_names().size(), 0));
  const SimResult r = sim.run(d.dual_caps, stim);
  const double var = variance(switching_histogram(r.stats));
  TraceSet t;
  t.energy = r.power.totals;
  const EnergyStats e = energy_stats(t);
  return {var == 0.0 && e.ned == 0.0 && e.nsd == 0.0 && r.power.totals.size() == 2100,
          "cycles=" + std::to_string(r.power.totals.size()) + " variance=" + fmt_double(var) +
              " ned=" + fmt_double(e.ned) + " nsd=" + fmt_double(e.nsd)};
}

Outcome geometry() {
  const Des& d = des();
  const BalanceReport b = balance_report(d.dual_caps, d.fat.rail_map, d.diff);
  std::size_t zero = 0;
  for (const auto& p : b.pairs) zero += p.dlen == 0;
  bool offset = true;
  for (const auto& n : d.fat_routed.nets) {
    const RailPair& rp = d.fat.rail_map.at(n.name);
    const DesignNet* t = d.diff.find_net(rp.t);
    const DesignNet* f = d.diff.find_net(rp.f);
    if (!t || !f || t->segments.size() != f->segments.size()) {
      offset = false;
      continue;
    }
    for (std::size_t i = 0; i < t->segments.size(); ++i) {
      const Segment& a = t->segments[i];
      const Segment& c = f->segments[i];
      offset &= a.layer == c.layer && c.a == Point{a.a.x + 1, a.a.y + 1} && c.b == Point{a.b.x + 1, a.b.y + 1};
    }
  }
  const bool doubled = d.diff.segment_count() == 2 * d.fat_routed.segment_count();
  const auto drc = check_drc(d.diff, d.libs.diff);
  return {zero == b.pairs.size() && !b.pairs.empty() && doubled && offset && drc.empty(),
          std::to_string(zero) + "/" + std::to_string(b.pairs.size()) + " pairs with dL=0, segments " +
              std::to_string(d.diff.segment_count()) + "=2x" + std::to_string(d.fat_routed.segment_count()) +
              ", offset " + (offset ? "ok" : "bad") + ", drc violations " + std::to_string(drc.size())};
}

struct ReferenceRun {
  DpaResult dpa;
  double seconds = 0;
};

const ReferenceRun& reference_run() {
  static const ReferenceRun r = [] {
    const Des& d = des();
    const auto t0 = Clock::now();
    const RoutedDesign ref = route(place(d.rtl, d.single, PlaceOptions{}), d.single);
    const CapTable caps = extract_capacitance(ref, d.single);
    const LabeledTraces t = collect_traces(Simulator(d.rtl, d.lib), caps, CollectOptions{.traces = 2000}, kKey);
    ReferenceRun out;
    out.dpa = run_dpa(t);
    out.seconds = seconds_since(t0);
    return out;
  }();
  return r;
}

Outcome dpa_disclosure() {
  const ReferenceRun& r = reference_run();
  const int rank = key_rank(r.dpa.series.pkpk.back(), kKey);
  const bool disclosed = r.dpa.mtd.has_value() && *r.dpa.mtd <= 250;
  return {rank == 1 && disclosed && r.seconds < 60.0,
          "rank=" + std::to_string(rank) + " mtd=" + (r.dpa.mtd ? std::to_string(*r.dpa.mtd) : "not_disclosed") +
              " (bound 250) runtime=" + fmt_double(r.seconds) + " s"};
}

Outcome dpa_resistance() {
  const Des& d = des();
  const Simulator sim(d.dual);
  const auto run = [&](double eps) {
    return run_dpa(collect_traces(sim, inject_imbalance(d.dual_caps, eps, 1), CollectOptions{.traces = 2000}, kKey));
  };
  const DpaResult bal = run(0.0);
  bool zero = true;
  for (const auto& g : bal.guesses)
    for (double v : g.diff) zero &= v == 0.0;
  const DpaResult imb = run(0.05);
  const EnergyStats& ref = reference_run().dpa.stats;
  const bool grows = imb.stats.ned > bal.stats.ned && imb.stats.nsd > bal.stats.nsd;
  const bool below = imb.stats.ned < ref.ned && imb.stats.nsd < ref.nsd;
  return {!bal.mtd && zero && grows && below,
          "eps=0 mtd=" + std::string(bal.mtd ? std::to_string(*bal.mtd) : "not_disclosed") +
              " diffs " + (zero ? "zero" : "nonzero") + "; eps=0.05 ned=" + fmt_double(imb.stats.ned) +
              " nsd=" + fmt_double(imb.stats.nsd) + "; reference ned=" + fmt_double(ref.ned) +
              " nsd=" + fmt_double(ref.nsd)};
}

Outcome fault_alarm_check() {
  const Des& d = des();
  const Simulator sim(d.dual);
  const auto& regs = sim.register_names();
  const auto stim = random_stimulus(sim.input_names().size(), 40, 7);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, regs.size() - 1);
  std::uniform_int_distribution<int> when(0, 39);
  int detected = 0;
  for (int i = 0; i < 100; ++i) {
    SimOptions o;
    o.samples_per_cycle = 1;
    o.faults = {{when(rng), regs[pick(rng)]}};
    const SimResult r = sim.run(d.dual_caps, stim, o);
    for (const Alarm& a : r.alarms)
      if (a.cycle == o.faults[0].cycle && a.reg == o.faults[0].reg && !a.t && !a.f) {
        ++detected;
        break;
      }
  }
  return {detected == 100, std::to_string(detected) + "/100 injections alarmed in the same cycle"};
}

Outcome equivalence_gate() {
  const Des& d = des();
  const EquivVerdict ok = cosim_equiv(d.rtl, d.lib, d.dual, 1000, 1);
  DualRailNetlist bad = d.dual;
  for (auto& inst : bad.instances)
    if (inst.name == "out_reg0")
      for (auto& p : inst.pins)
        if (p.pin == "Q") p.pair.swapped = !p.pair.swapped;
  const EquivVerdict caught = cosim_equiv(d.rtl, d.lib, bad, 1000, 1);
  return {ok.equivalent && !caught.equivalent, "clean: " + ok.line() + "; swapped rail: " + caught.line()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> m;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    m[e.path().filename().string()] = s.str();
  }
  return m;
}

fs::path flow_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wddlflow_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

Outcome determinism() {
  FlowConfig a;
  a.out = flow_dir("a");
  FlowConfig b = a;
  b.out = flow_dir("b");
  run_flow(a);
  run_flow(b);
  const auto sa = snapshot(a.out);
  const auto sb = snapshot(b.out);
  return {sa == sb && !sa.empty(), std::to_string(sa.size()) + " artifacts, " + (sa == sb ? "identical" : "differ")};
}

Outcome area_trend() {
  const fs::path dir = fs::temp_directory_path() / "wddlflow_acceptance_a";
  if (!fs::exists(dir / "report.txt")) run_flow(FlowConfig{.out = dir});
  std::ifstream in(dir / "report.txt");
  std::string line;
  while (std::getline(in, line)) {
    const auto at = line.find(" ratio=");
    if (line.rfind("area ", 0) == 0 && at != std::string::npos) {
      const double ratio = std::stod(line.substr(at + 7));
      return {ratio > 2.0, line};
    }
  }
  return {false, "no area ratio in report.txt"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"substitution soundness", substitution_soundness},
      {"precharge wave", precharge_wave},
      {"constant switching", constant_switching},
      {"differential geometry", geometry},
      {"DPA disclosure, reference", dpa_disclosure},
      {"DPA resistance, secure", dpa_resistance},
      {"fault alarm", fault_alarm_check},
      {"equivalence gate", equivalence_gate},
      {"determinism", determinism},
      {"area trend", area_trend},
  };
  int failed = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %d %s: %s (%s)\n", index, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
