// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "wddl/des.hpp"
#include "wddl/diffroute.hpp"
#include "wddl/equiv.hpp"
#include "wddl/gatesim.hpp"
#include "wddl/library.hpp"
#include "wddl/place.hpp"
#include "wddl/route.hpp"
#include "wddl/sca.hpp"
#include "wddl/substitute.hpp"

namespace {

using namespace wddl;

struct Des {
  Library lib = base_library();
  Netlist rtl = build_des_module(DutConfig{}, lib);
  WddlLibrary wlib{lib};
  DualRailNetlist dual = substitute_cells(rtl, wlib);
  FatNetlist fat = abstract_fat(dual);
  LibraryPair libs = build_libraries(fat_library(wlib));
  PlacedDesign placed = place(fat.netlist, libs.fat, PlaceOptions{});
  RoutedDesign routed = route(placed, libs.fat);
  RoutedDesign diff = decompose(routed, libs.fat, libs.diff, &fat.rail_map);
  CapTable caps = extract_capacitance(diff, libs.diff);
};

const Des& des() {
  static const Des d;
  return d;
}

void BM_Substitute(benchmark::State& state) {
  const Des& d = des();
  for (auto _ : state) benchmark::DoNotOptimize(substitute_cells(d.rtl, d.wlib));
}
BENCHMARK(BM_Substitute)->Unit(benchmark::kMicrosecond);

void BM_PlaceFat(benchmark::State& state) {
  const Des& d = des();
  for (auto _ : state) benchmark::DoNotOptimize(place(d.fat.netlist, d.libs.fat, PlaceOptions{}));
}
BENCHMARK(BM_PlaceFat)->Unit(benchmark::kMillisecond);

void BM_RouteFat(benchmark::State& state) {
  const Des& d = des();
  for (auto _ : state) benchmark::DoNotOptimize(route(d.placed, d.libs.fat));
}
BENCHMARK(BM_RouteFat)->Unit(benchmark::kMillisecond);

void BM_DecomposeAndExtract(benchmark::State& state) {
  const Des& d = des();
  for (auto _ : state) {
    const RoutedDesign diff = decompose(d.routed, d.libs.fat, d.libs.diff, &d.fat.rail_map);
    benchmark::DoNotOptimize(extract_capacitance(diff, d.libs.diff));
  }
}
BENCHMARK(BM_DecomposeAndExtract)->Unit(benchmark::kMillisecond);

void BM_SimulateDual(benchmark::State& state) {
  const Des& d = des();
  const Simulator sim(d.dual);
  const auto stim = random_stimulus(sim.input_names().size(), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(d.caps, stim));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateDual)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Dpa(benchmark::State& state) {
  const Des& d = des();
  const LabeledTraces t = collect_traces(Simulator(d.dual), inject_imbalance(d.caps, 0.05, 1),
                                         CollectOptions{.traces = static_cast<std::size_t>(state.range(0))}, 46);
  for (auto _ : state) benchmark::DoNotOptimize(run_dpa(t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dpa)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveEquiv(benchmark::State& state) {
  const Des& d = des();
  const Netlist proj = project_true_rail(d.dual);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_equiv(d.rtl, proj, d.lib));
}
BENCHMARK(BM_ExhaustiveEquiv)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
