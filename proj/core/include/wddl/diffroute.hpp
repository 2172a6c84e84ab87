// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wddl/captable.hpp"
#include "wddl/geometry.hpp"
#include "wddl/substitute.hpp"

namespace wddl {

/// Splits every fat wire into a true wire on the same points and a false
/// wire translated by (+1, +1), both one track wide; vias are duplicated the
/// same way and pins are renamed `P_t` / `P_f`. Rail net names come from
/// `rail_map` when given, `rail_name` otherwise. Throws DecompositionError
/// when a translated shape leaves the die.
RoutedDesign decompose(const RoutedDesign& fat, const LibraryGeometry& fat_lib, const LibraryGeometry& diff_lib,
                       const std::map<std::string, RailPair>* rail_map = nullptr);

struct UnitCaps {
  /// Per fine unit of wire length, by layer name; layers not listed use `wire`.
  std::map<std::string, double> layer;
  double wire = 1.0;
  double via = 1.0;
  double pin = 2.0;

  double layer_cap(const std::string& name) const;
};

/// cap = sum(length * layer cap) + vias * via cap + input pins * pin cap.
CapTable extract_capacitance(const RoutedDesign& d, const LibraryGeometry& lib, const UnitCaps& units = {});

struct PairBalance {
  std::string pair;
  int len_t = 0;
  int len_f = 0;
  /// |len_t - len_f|.
  int dlen = 0;
  double cap_t = 0.0;
  double cap_f = 0.0;
  /// cap_t - cap_f.
  double dcap = 0.0;
};

/// Perpendicular neighbours of every fine wire cell, counted per side.
struct AdjacencyStats {
  long empty = 0;
  long same_pair = 0;
  long other_pair = 0;

  long total() const { return empty + same_pair + other_pair; }
  double fraction_empty() const;
  double fraction_same() const;
  double fraction_other() const;
};

struct HistogramBin {
  /// Upper edge of |dcap| for the bin; the last bin is unbounded.
  double upper = 0.0;
  int count = 0;
};

struct BalanceReport {
  std::vector<PairBalance> pairs;
  std::vector<HistogramBin> histogram;
  AdjacencyStats adjacency;
};

/// Counts of |dcap| in the bins (-inf,0], (0,1], (1,2], (2,4], (4,8],
/// (8,16], (16,inf).
std::vector<HistogramBin> dcap_histogram(const std::vector<PairBalance>& pairs);

/// Per-pair length and capacitance balance of a differential design. Pairs
/// come from `rail_map`; a pair with only one rail in the design, or a rail
/// with no pair, is an error.
BalanceReport balance_report(const CapTable& caps, const std::map<std::string, RailPair>& rail_map,
                             const RoutedDesign& diff);

/// Scales every true-rail capacitance (a `_t` net whose `_f` partner is in
/// the table) by 1 + u, u uniform in [-epsilon, epsilon). Same seed, same table.
CapTable inject_imbalance(const CapTable& caps, double epsilon, std::uint64_t seed);

/// `pair,len_t,len_f,dlen,cap_t,cap_f,dcap`.
std::string emit_balance_csv(const BalanceReport& r);
std::vector<PairBalance> parse_balance_csv(std::string_view text);
/// `empty,same_pair,other_pair`.
std::string emit_adjacency_csv(const AdjacencyStats& a);
AdjacencyStats parse_adjacency_csv(std::string_view text);

/// Reads `pair,true,false` rows.
std::map<std::string, RailPair> parse_rail_map_csv(std::string_view text);
std::string emit_rail_map_csv(const std::map<std::string, RailPair>& m);

}  // namespace wddl
