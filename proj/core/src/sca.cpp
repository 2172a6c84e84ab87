// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/sca.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "wddl/des.hpp"
#include "wddl/error.hpp"

namespace wddl {

int selection_bit(int p_r, int guess, int bit) {
  if (p_r < 0 || p_r > 63 || guess < 0 || guess > 63) throw ConfigError("selection inputs must be 6-bit values");
  if (bit < 0 || bit > 3) throw ConfigError("selection bit must be in [0, 3]");
  return (des_s1(p_r ^ guess) >> bit) & 1;
}

namespace {

// Indices of input bits `stem[0..]` in the simulator's input order.
std::vector<std::size_t> bus_inputs(const Simulator& sim, const std::string& stem) {
  std::vector<std::size_t> out;
  for (int i = 0;; ++i) {
    const std::string name = fmt::format("{}[{}]", stem, i);
    auto it = std::find(sim.input_names().begin(), sim.input_names().end(), name);
    if (it == sim.input_names().end()) break;
    out.push_back(static_cast<std::size_t>(it - sim.input_names().begin()));
  }
  return out;
}

// Samples that vary over the set; all others give exactly zero differences.
std::vector<std::size_t> active_columns(const TraceSet& t) {
  std::vector<std::size_t> cols;
  const auto S = static_cast<std::size_t>(t.samples_per_cycle);
  for (std::size_t c = 0; c < S; ++c) {
    for (std::size_t r = 1; r < t.rows(); ++r)
      if (t.traces[r][c] != t.traces[0][c]) {
        cols.push_back(c);
        break;
      }
  }
  return cols;
}

struct Accumulator {
  std::vector<double> sum1, sum0;  // [guess * A + col]
  std::array<std::size_t, kGuesses> n1{}, n0{};
};

void accumulate(Accumulator& acc, const TraceSet& t, std::size_t row, const std::vector<std::size_t>& cols, int bit) {
  const std::size_t A = cols.size();
  const auto& trace = t.traces[row];
  const int pr = t.plaintexts[row].pr;
  for (int g = 0; g < kGuesses; ++g) {
    const bool one = selection_bit(pr, g, bit) != 0;
    double* dst = (one ? acc.sum1.data() : acc.sum0.data()) + static_cast<std::size_t>(g) * A;
    for (std::size_t k = 0; k < A; ++k) dst[k] += trace[cols[k]];
    ++(one ? acc.n1 : acc.n0)[static_cast<std::size_t>(g)];
  }
}

// Difference on active columns for guess g; nullopt when a partition is empty.
bool guess_diff(const Accumulator& acc, int g, std::size_t A, std::vector<double>& out) {
  const auto gi = static_cast<std::size_t>(g);
  if (!acc.n1[gi] || !acc.n0[gi]) return false;
  const double a = static_cast<double>(acc.n1[gi]);
  const double b = static_cast<double>(acc.n0[gi]);
  out.resize(A);
  for (std::size_t k = 0; k < A; ++k) out[k] = acc.sum1[gi * A + k] / a - acc.sum0[gi * A + k] / b;
  return true;
}

double peak_to_peak(const std::vector<double>& active, bool has_inactive) {
  double lo = has_inactive ? 0.0 : std::numeric_limits<double>::infinity();
  double hi = has_inactive ? 0.0 : -std::numeric_limits<double>::infinity();
  for (double v : active) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return active.empty() && !has_inactive ? 0.0 : hi - lo;
}

void check_set(const TraceSet& t) {
  if (t.plaintexts.size() != t.traces.size()) throw ConfigError("trace set has mismatched plaintext and trace counts");
  for (const auto& r : t.traces)
    if (r.size() != static_cast<std::size_t>(t.samples_per_cycle)) throw ConfigError("trace row has the wrong sample count");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

double number(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError("not a number: '" + s + "'", line, 1);
  return v;
}

std::vector<std::vector<std::string>> csv_rows(std::string_view text, std::string& header) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      header = line;
      first = false;
      continue;
    }
    rows.push_back(split(line));
  }
  if (first) throw ParseError("empty CSV", 1, 1);
  return rows;
}

}  // namespace

LabeledTraces collect_traces(const Simulator& sim, const CapTable& caps, const CollectOptions& opts, int key) {
  if (opts.traces < 1) throw ConfigError("at least one trace is needed");
  if (opts.noise < 0) throw ConfigError("noise must be non-negative");
  const auto pl = bus_inputs(sim, "pl");
  const auto pr = bus_inputs(sim, "pr");
  if (pl.empty() || pr.size() != 6) throw SimulationError("design is not the DES test module (needs pl[] and pr[0..5])");
  std::mt19937_64 rng(opts.seed);
  LabeledTraces out;
  out.key = key;
  TraceSet& t = out.set;
  t.samples_per_cycle = opts.samples_per_cycle;
  std::vector<InputVector> stim(opts.traces + 1, InputVector(sim.input_names().size(), 0));
  for (std::size_t i = 0; i < opts.traces; ++i) {
    Plaintext p{static_cast<int>(rng() >> (64 - pl.size())), static_cast<int>(rng() >> 58)};
    for (std::size_t b = 0; b < pl.size(); ++b) stim[i][pl[b]] = static_cast<std::uint8_t>((p.pl >> b) & 1);
    for (std::size_t b = 0; b < pr.size(); ++b) stim[i][pr[b]] = static_cast<std::uint8_t>((p.pr >> b) & 1);
    t.plaintexts.push_back(p);
  }
  SimOptions so;
  so.samples_per_cycle = opts.samples_per_cycle;
  SimResult r = sim.run(caps, stim, so);
  for (std::size_t i = 0; i < opts.traces; ++i) {
    std::vector<double> row = std::move(r.power.samples[i + 1]);
    if (opts.noise > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                        static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) >> 32)};
      std::mt19937_64 g(seq);
      std::normal_distribution<double> nd(0.0, opts.noise);
      for (double& s : row) s += nd(g);
    }
    t.traces.push_back(std::move(row));
    t.energy.push_back(r.power.totals[i + 1]);
  }
  return out;
}

std::vector<GuessTrace> differential_traces(const TraceSet& t, std::size_t n, int bit) {
  check_set(t);
  if (n < 1 || n > t.rows()) throw ConfigError(fmt::format("prefix {} outside 1..{}", n, t.rows()));
  const auto cols = active_columns(t);
  const std::size_t A = cols.size();
  const auto S = static_cast<std::size_t>(t.samples_per_cycle);
  Accumulator acc{std::vector<double>(kGuesses * A, 0.0), std::vector<double>(kGuesses * A, 0.0), {}, {}};
  for (std::size_t r = 0; r < n; ++r) accumulate(acc, t, r, cols, bit);
  std::vector<GuessTrace> out;
  std::vector<double> d;
  for (int g = 0; g < kGuesses; ++g) {
    GuessTrace gt;
    gt.guess = g;
    gt.diff.assign(S, 0.0);
    gt.defined = guess_diff(acc, g, A, d);
    if (gt.defined) {
      for (std::size_t k = 0; k < A; ++k) gt.diff[cols[k]] = d[k];
      gt.pkpk = peak_to_peak(d, A < S);
    }
    out.push_back(std::move(gt));
  }
  return out;
}

std::vector<int> ranking(const std::vector<GuessTrace>& g) {
  std::vector<int> idx(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const auto& ga = g[static_cast<std::size_t>(a)];
    const auto& gb = g[static_cast<std::size_t>(b)];
    if (ga.defined != gb.defined) return ga.defined;
    if (ga.pkpk != gb.pkpk) return ga.pkpk > gb.pkpk;
    return ga.guess < gb.guess;
  });
  std::vector<int> out;
  for (int i : idx) out.push_back(g[static_cast<std::size_t>(i)].guess);
  return out;
}

PrefixSeries prefix_series(const TraceSet& t, int bit) {
  check_set(t);
  const auto cols = active_columns(t);
  const std::size_t A = cols.size();
  const bool has_inactive = A < static_cast<std::size_t>(t.samples_per_cycle);
  Accumulator acc{std::vector<double>(kGuesses * A, 0.0), std::vector<double>(kGuesses * A, 0.0), {}, {}};
  PrefixSeries s;
  s.pkpk.reserve(t.rows());
  std::vector<double> d;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    accumulate(acc, t, r, cols, bit);
    auto& row = s.pkpk.emplace_back();
    for (int g = 0; g < kGuesses; ++g)
      row[static_cast<std::size_t>(g)] =
          guess_diff(acc, g, A, d) ? peak_to_peak(d, has_inactive) : std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

int key_rank(const std::array<double, kGuesses>& pkpk, int key) {
  const double k = pkpk[static_cast<std::size_t>(key)];
  if (std::isnan(k)) return kGuesses + 1;
  int rank = 1;
  for (int g = 0; g < kGuesses; ++g)
    if (g != key && !std::isnan(pkpk[static_cast<std::size_t>(g)]) && pkpk[static_cast<std::size_t>(g)] >= k) ++rank;
  return rank;
}

std::optional<std::size_t> mtd(const PrefixSeries& s, int key) {
  std::optional<std::size_t> first;
  for (std::size_t i = s.pkpk.size(); i-- > 0;) {
    if (key_rank(s.pkpk[i], key) != 1) break;
    first = i + 1;
  }
  return first;
}

std::optional<std::size_t> mtd(const LabeledTraces& t, int bit) { return mtd(prefix_series(t.set, bit), t.key); }

EnergyStats energy_stats(const TraceSet& t) {
  EnergyStats s;
  if (t.energy.empty()) return s;
  const auto [lo, hi] = std::minmax_element(t.energy.begin(), t.energy.end());
  double sum = 0.0;
  for (double e : t.energy) sum += e;
  const double mean = sum / static_cast<double>(t.energy.size());
  if (*hi <= 0.0 || mean <= 0.0) return s;
  double var = 0.0;
  for (double e : t.energy) var += (e - mean) * (e - mean);
  var /= static_cast<double>(t.energy.size());
  s.ned = (*hi - *lo) / *hi;
  s.nsd = std::sqrt(var) / mean;
  return s;
}

DpaResult run_dpa(const LabeledTraces& t, int bit) {
  DpaResult r;
  r.guesses = differential_traces(t.set, t.set.rows(), bit);
  r.ranking = ranking(r.guesses);
  r.series = prefix_series(t.set, bit);
  r.mtd = mtd(r.series, t.key);
  r.stats = energy_stats(t.set);
  return r;
}

std::string summary_line(const DpaResult& r) {
  return fmt::format("mtd={} ned={} nsd={}", r.mtd ? std::to_string(*r.mtd) : std::string("not_disclosed"),
                     r.stats.ned, r.stats.nsd);
}

std::string emit_dpa_csv(const DpaResult& r) {
  std::vector<int> rank(r.guesses.size(), 0);
  for (std::size_t i = 0; i < r.ranking.size(); ++i) rank[static_cast<std::size_t>(r.ranking[i])] = static_cast<int>(i) + 1;
  std::string out = "guess,pkpk,rank\n";
  for (const auto& g : r.guesses)
    out += fmt::format("{},{},{}\n", g.guess, g.defined ? fmt::format("{}", g.pkpk) : std::string("nan"),
                       rank[static_cast<std::size_t>(g.guess)]);
  return out;
}

std::string emit_dtraces_csv(const DpaResult& r) {
  std::string out = "guess,defined";
  const std::size_t S = r.guesses.empty() ? 0 : r.guesses.front().diff.size();
  for (std::size_t s = 0; s < S; ++s) out += fmt::format(",d{}", s);
  out += '\n';
  for (const auto& g : r.guesses) {
    out += fmt::format("{},{}", g.guess, g.defined ? 1 : 0);
    for (double v : g.diff) out += fmt::format(",{}", v);
    out += '\n';
  }
  return out;
}

std::string emit_mtd_csv(const PrefixSeries& s, int key) {
  std::string out = "n,key_rank,key_pkpk,best_other_pkpk\n";
  for (std::size_t i = 0; i < s.pkpk.size(); ++i) {
    const auto& row = s.pkpk[i];
    double best = std::numeric_limits<double>::quiet_NaN();
    for (int g = 0; g < kGuesses; ++g) {
      const double v = row[static_cast<std::size_t>(g)];
      if (g != key && !std::isnan(v) && (std::isnan(best) || v > best)) best = v;
    }
    out += fmt::format("{},{},{},{}\n", i + 1, key_rank(row, key), row[static_cast<std::size_t>(key)], best);
  }
  return out;
}

std::string emit_plaintexts_csv(const TraceSet& t) {
  std::string out = "index,pl,pr\n";
  for (std::size_t i = 0; i < t.plaintexts.size(); ++i)
    out += fmt::format("{},{},{}\n", i, t.plaintexts[i].pl, t.plaintexts[i].pr);
  return out;
}

std::string emit_traces_csv(const TraceSet& t) {
  std::string out = "cycle,total_energy";
  for (int s = 0; s < t.samples_per_cycle; ++s) out += fmt::format(",s{}", s);
  out += '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    out += fmt::format("{},{}", r, t.energy[r]);
    for (double v : t.traces[r]) out += fmt::format(",{}", v);
    out += '\n';
  }
  return out;
}

TraceSet parse_trace_files(std::string_view plaintexts_csv, std::string_view traces_csv) {
  TraceSet t;
  std::string header;
  int line = 1;
  for (const auto& row : csv_rows(plaintexts_csv, header)) {
    ++line;
    if (row.size() != 3) throw ParseError("plaintext rows need index,pl,pr", line, 1);
    const double pl = number(row[1], line), pr = number(row[2], line);
    if (pr < 0 || pr > 63 || pl < 0 || pl != std::floor(pl) || pr != std::floor(pr))
      throw ParseError("plaintext out of range", line, 1);
    t.plaintexts.push_back({static_cast<int>(pl), static_cast<int>(pr)});
  }
  if (header != "index,pl,pr") throw ParseError("expected header 'index,pl,pr'", 1, 1);
  line = 1;
  const auto rows = csv_rows(traces_csv, header);
  const auto cols = split(header);
  if (cols.size() < 2 || cols[0] != "cycle" || cols[1] != "total_energy")
    throw ParseError("expected header 'cycle,total_energy,s0,...'", 1, 1);
  t.samples_per_cycle = static_cast<int>(cols.size()) - 2;
  for (const auto& row : rows) {
    ++line;
    if (row.size() != cols.size()) throw ParseError("trace row has the wrong column count", line, 1);
    t.energy.push_back(number(row[1], line));
    std::vector<double> v;
    for (std::size_t k = 2; k < row.size(); ++k) v.push_back(number(row[k], line));
    t.traces.push_back(std::move(v));
  }
  if (t.traces.size() != t.plaintexts.size()) throw ParseError("trace and plaintext counts differ", line, 1);
  return t;
}

}  // namespace wddl
