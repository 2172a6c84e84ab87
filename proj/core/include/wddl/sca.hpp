// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wddl/captable.hpp"
#include "wddl/gatesim.hpp"

namespace wddl {

inline constexpr int kGuesses = 64;

/// Bit `bit` (0 = LSB) of S1(p_r xor guess).
int selection_bit(int p_r, int guess, int bit = 0);

struct Plaintext {
  int pl = 0;
  int pr = 0;
  friend bool operator==(const Plaintext&, const Plaintext&) = default;
};

/// Attack input: plaintexts and their traces. The key is deliberately not here.
struct TraceSet {
  std::vector<Plaintext> plaintexts;
  int samples_per_cycle = 0;
  /// traces[row][sample].
  std::vector<std::vector<double>> traces;
  /// Noise-free energy per encryption.
  std::vector<double> energy;

  std::size_t rows() const noexcept { return traces.size(); }
  friend bool operator==(const TraceSet&, const TraceSet&) = default;
};

/// A trace set with the key that produced it, for evaluation only.
struct LabeledTraces {
  TraceSet set;
  int key = 0;
};

struct CollectOptions {
  std::size_t traces = 2000;
  std::uint64_t seed = 1;
  /// Standard deviation of additive Gaussian noise per sample; 0 disables it.
  double noise = 0.0;
  int samples_per_cycle = 800;
};

/// Encrypts `traces` random plaintexts back to back on the DES test module
/// (inputs `pl[i]`, `pr[i]`). Row i is the cycle in which plaintext i is in
/// the input registers, so n + 1 cycles are simulated. Noise for row i comes
/// from a generator seeded with (seed, i).
LabeledTraces collect_traces(const Simulator& sim, const CapTable& caps, const CollectOptions& opts, int key);

struct GuessTrace {
  int guess = 0;
  /// False when one partition is empty.
  bool defined = false;
  std::vector<double> diff;
  double pkpk = 0.0;
};

/// mean(set1) - mean(set0) per guess over the first `n` rows. Samples that
/// are constant over the whole set are exactly 0.
std::vector<GuessTrace> differential_traces(const TraceSet& t, std::size_t n, int bit = 0);

/// Guesses by pkpk descending, ties by guess; undefined guesses last.
std::vector<int> ranking(const std::vector<GuessTrace>& g);

/// Peak-to-peak of every guess for every prefix n = 1..rows; NaN marks an
/// undefined guess.
struct PrefixSeries {
  std::vector<std::array<double, kGuesses>> pkpk;  // index n - 1
};
PrefixSeries prefix_series(const TraceSet& t, int bit = 0);

/// 1 + number of other defined guesses with pkpk >= the key's, or
/// kGuesses + 1 when the key itself is undefined.
int key_rank(const std::array<double, kGuesses>& pkpk, int key);

/// Smallest n such that the key is strictly first for every prefix from n to
/// rows; nullopt when never.
std::optional<std::size_t> mtd(const LabeledTraces& t, int bit = 0);
std::optional<std::size_t> mtd(const PrefixSeries& s, int key);

struct EnergyStats {
  double ned = 0.0;
  double nsd = 0.0;
};
/// NED = (max - min) / max, NSD = population stddev / mean; 0 for zero energy.
EnergyStats energy_stats(const TraceSet& t);

struct DpaResult {
  std::vector<GuessTrace> guesses;
  std::vector<int> ranking;
  std::optional<std::size_t> mtd;
  EnergyStats stats;
  PrefixSeries series;
};
DpaResult run_dpa(const LabeledTraces& t, int bit = 0);

/// `mtd=<n|not_disclosed> ned=<x> nsd=<x>`.
std::string summary_line(const DpaResult& r);

/// `guess,pkpk,rank`, one row per guess in guess order.
std::string emit_dpa_csv(const DpaResult& r);
/// `guess,defined,d0,...`.
std::string emit_dtraces_csv(const DpaResult& r);
/// `n,key_rank,key_pkpk,best_other_pkpk`.
std::string emit_mtd_csv(const PrefixSeries& s, int key);
/// `index,pl,pr`.
std::string emit_plaintexts_csv(const TraceSet& t);
/// `cycle,total_energy,s0,...`; total_energy is the noise-free energy.
std::string emit_traces_csv(const TraceSet& t);
TraceSet parse_trace_files(std::string_view plaintexts_csv, std::string_view traces_csv);

}  // namespace wddl
