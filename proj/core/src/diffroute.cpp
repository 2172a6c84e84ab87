// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/diffroute.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "wddl/error.hpp"

namespace wddl {

const NetCap* CapTable::find(std::string_view net) const {
  auto it = nets.find(net);
  return it == nets.end() ? nullptr : &it->second;
}

double CapTable::total(std::string_view net) const {
  if (const auto* c = find(net)) return c->total();
  throw SimulationError("no capacitance for net '" + std::string(net) + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'", line, 1);
  }
}

// Net names may contain brackets but never commas, so plain splitting is enough.
template <typename Row>
void read_rows(std::string_view text, const std::string& header, std::size_t columns, Row row) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) throw ParseError("expected header '" + header + "'", lineno, 1);
      seen_header = true;
      continue;
    }
    auto cells = split_csv_line(line);
    if (cells.size() != columns)
      throw ParseError(fmt::format("expected {} columns, got {}", columns, cells.size()), lineno, 1);
    row(cells, lineno);
  }
  if (!seen_header) throw ParseError("missing header '" + header + "'", 1, 1);
}

}  // namespace

std::string emit_caps_csv(const CapTable& t) {
  std::string out = "net,cap_wire,cap_pin,cap_total\n";
  for (const auto& [net, c] : t.nets) out += fmt::format("{},{},{},{}\n", net, c.wire, c.pin, c.total());
  return out;
}

CapTable parse_caps_csv(std::string_view text) {
  CapTable t;
  read_rows(text, "net,cap_wire,cap_pin,cap_total", 4, [&](const std::vector<std::string>& c, int line) {
    NetCap nc{to_double(c[1], line), to_double(c[2], line)};
    if (nc.wire < 0 || nc.pin < 0) throw ParseError("negative capacitance", line, 1);
    if (!t.nets.emplace(c[0], nc).second) throw ParseError("net '" + c[0] + "' listed twice", line, 1);
  });
  return t;
}

std::string emit_rail_map_csv(const std::map<std::string, RailPair>& m) {
  std::string out = "pair,true,false\n";
  for (const auto& [pair, r] : m) out += fmt::format("{},{},{}\n", pair, r.t, r.f);
  return out;
}

std::map<std::string, RailPair> parse_rail_map_csv(std::string_view text) {
  std::map<std::string, RailPair> m;
  read_rows(text, "pair,true,false", 3, [&](const std::vector<std::string>& c, int line) {
    if (!m.emplace(c[0], RailPair{c[1], c[2]}).second) throw ParseError("pair '" + c[0] + "' listed twice", line, 1);
  });
  return m;
}

RoutedDesign decompose(const RoutedDesign& fat, const LibraryGeometry& fat_lib, const LibraryGeometry& diff_lib,
                       const std::map<std::string, RailPair>* rail_map) {
  if (fat.variant != Variant::Fat || fat_lib.variant != Variant::Fat)
    throw DecompositionError("decomposition needs a fat design and fat library");
  if (diff_lib.variant != Variant::Differential) throw DecompositionError("target library is not differential");

  RoutedDesign out;
  out.name = fat.name;
  out.variant = Variant::Differential;
  out.die_lo = fat.die_lo;
  out.die_hi = fat.die_hi;
  for (const auto& c : fat.components) {
    if (!diff_lib.find(c.macro)) throw DecompositionError("no differential macro for " + c.macro);
    out.components.push_back(c);
  }
  const Point off = kFalseRailOffset;
  auto shift = [&](Point p, const std::string& net) {
    const Point q{p.x + off.x, p.y + off.y};
    if (q.x >= fat.die_hi.x || q.y >= fat.die_hi.y)
      throw DecompositionError(fmt::format("false rail of {} at ({} {}) leaves the die; die margin too small", net, q.x, q.y));
    return q;
  };
  for (const auto& n : fat.nets) {
    RailPair rails{rail_name(n.name, true), rail_name(n.name, false)};
    if (rail_map) {
      auto it = rail_map->find(n.name);
      if (it == rail_map->end()) throw DecompositionError("fat net " + n.name + " has no entry in the rail map");
      rails = it->second;
    }
    DesignNet t{rails.t, {}, {}, {}};
    DesignNet f{rails.f, {}, {}, {}};
    for (const auto& p : n.pins) {
      t.pins.push_back({p.inst, p.pin + "_t"});
      f.pins.push_back({p.inst, p.pin + "_f"});
    }
    for (const auto& s : n.segments) {
      t.segments.push_back({s.layer, 1, s.a, s.b});
      f.segments.push_back({s.layer, 1, shift(s.a, n.name), shift(s.b, n.name)});
    }
    for (const auto& v : n.vias) {
      t.vias.push_back(v);
      f.vias.push_back({shift(v.at, n.name), v.lower, v.upper});
    }
    out.nets.push_back(std::move(t));
    out.nets.push_back(std::move(f));
  }
  (void)fat_lib;
  return out;
}

double UnitCaps::layer_cap(const std::string& name) const {
  auto it = layer.find(name);
  return it == layer.end() ? wire : it->second;
}

CapTable extract_capacitance(const RoutedDesign& d, const LibraryGeometry& lib, const UnitCaps& units) {
  CapTable t;
  for (const auto& n : d.nets) {
    NetCap c;
    for (const auto& s : n.segments) c.wire += s.length() * units.layer_cap(s.layer);
    c.wire += static_cast<double>(n.vias.size()) * units.via;
    for (const auto& p : n.pins) {
      const Component* comp = d.find_component(p.inst);
      if (!comp) throw NetlistError("net " + n.name + " references unknown component " + p.inst);
      const MacroPin* mp = lib.at(comp->macro).find_pin(p.pin);
      if (!mp) throw NetlistError("macro " + comp->macro + " has no pin " + p.pin);
      if (mp->use == PinUse::Input) c.pin += units.pin;
    }
    t.nets.emplace(n.name, c);
  }
  return t;
}

double AdjacencyStats::fraction_empty() const { return total() ? static_cast<double>(empty) / total() : 0.0; }
double AdjacencyStats::fraction_same() const { return total() ? static_cast<double>(same_pair) / total() : 0.0; }
double AdjacencyStats::fraction_other() const { return total() ? static_cast<double>(other_pair) / total() : 0.0; }

std::vector<HistogramBin> dcap_histogram(const std::vector<PairBalance>& pairs) {
  static constexpr double kEdges[] = {0.0, 1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<HistogramBin> h;
  for (double e : kEdges) h.push_back({e, 0});
  h.push_back({INFINITY, 0});
  for (const auto& b : pairs) {
    const double a = std::abs(b.dcap);
    std::size_t bin = 0;
    while (bin + 1 < h.size() && a > h[bin].upper) ++bin;
    ++h[bin].count;
  }
  return h;
}

BalanceReport balance_report(const CapTable& caps, const std::map<std::string, RailPair>& rail_map,
                             const RoutedDesign& diff) {
  BalanceReport r;
  std::unordered_map<std::string, std::size_t> net_index;
  for (std::size_t i = 0; i < diff.nets.size(); ++i) net_index.emplace(diff.nets[i].name, i);

  // Pair id per design net.
  std::vector<int> pair_of(diff.nets.size(), -1);
  int pid = 0;
  for (const auto& [pair, rails] : rail_map) {
    const bool ht = net_index.count(rails.t) > 0;
    const bool hf = net_index.count(rails.f) > 0;
    if (!ht && !hf) continue;
    if (ht != hf) throw DecompositionError("pair " + pair + " has only one rail in the design");
    const DesignNet& nt = diff.nets[net_index[rails.t]];
    const DesignNet& nf = diff.nets[net_index[rails.f]];
    pair_of[net_index[rails.t]] = pid;
    pair_of[net_index[rails.f]] = pid;
    ++pid;
    PairBalance b;
    b.pair = pair;
    b.len_t = nt.wire_length();
    b.len_f = nf.wire_length();
    b.dlen = std::abs(b.len_t - b.len_f);
    const NetCap* ct = caps.find(rails.t);
    const NetCap* cf = caps.find(rails.f);
    if (!ct || !cf) throw DecompositionError("no capacitance for a rail of pair " + pair);
    b.cap_t = ct->total();
    b.cap_f = cf->total();
    b.dcap = b.cap_t - b.cap_f;
    r.pairs.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < diff.nets.size(); ++i)
    if (pair_of[i] < 0) throw DecompositionError("net " + diff.nets[i].name + " has no partner rail");

  r.histogram = dcap_histogram(r.pairs);

  // Fine-grid metal ownership per layer, then classify both perpendicular neighbours of each wire cell.
  std::map<std::string, std::uint64_t, std::less<>> layer_ids;
  std::unordered_map<std::uint64_t, int> metal;
  auto key = [&](const std::string& layer, int x, int y) {
    const std::uint64_t l = layer_ids.try_emplace(layer, layer_ids.size()).first->second;
    return (l << 48) | (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x) & 0xFFFFFF) << 24) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(y) & 0xFFFFFF);
  };
  auto cells_of = [](const Segment& s, auto&& fn) {
    const int x0 = std::min(s.a.x, s.b.x), x1 = std::max(s.a.x, s.b.x);
    const int y0 = std::min(s.a.y, s.b.y), y1 = std::max(s.a.y, s.b.y);
    for (int x = x0; x <= x1 + s.width - 1; ++x)
      for (int y = y0; y <= y1 + s.width - 1; ++y) fn(x, y);
  };
  for (std::size_t i = 0; i < diff.nets.size(); ++i) {
    const auto& n = diff.nets[i];
    for (const auto& s : n.segments) cells_of(s, [&](int x, int y) { metal.emplace(key(s.layer, x, y), static_cast<int>(i)); });
    for (const auto& v : n.vias) {
      metal.emplace(key(v.lower, v.at.x, v.at.y), static_cast<int>(i));
      metal.emplace(key(v.upper, v.at.x, v.at.y), static_cast<int>(i));
    }
  }
  for (std::size_t i = 0; i < diff.nets.size(); ++i) {
    const auto& n = diff.nets[i];
    for (const auto& s : n.segments) {
      const bool horizontal = s.a.y == s.b.y && s.a.x != s.b.x;
      const bool vertical = s.a.x == s.b.x && s.a.y != s.b.y;
      if (!horizontal && !vertical) continue;
      cells_of(s, [&](int x, int y) {
        for (int side : {-1, 1}) {
          const int nx = horizontal ? x : x + side;
          const int ny = horizontal ? y + side : y;
          auto it = metal.find(key(s.layer, nx, ny));
          if (it == metal.end()) ++r.adjacency.empty;
          else if (pair_of[static_cast<std::size_t>(it->second)] == pair_of[i]) ++r.adjacency.same_pair;
          else ++r.adjacency.other_pair;
        }
      });
    }
  }
  return r;
}

CapTable inject_imbalance(const CapTable& caps, double epsilon, std::uint64_t seed) {
  if (epsilon < 0) throw ConfigError("imbalance epsilon must be non-negative");
  CapTable out = caps;
  std::mt19937_64 rng(seed);
  for (auto& [net, c] : out.nets) {
    auto r = split_rail(net);
    if (!r || !r->second || !caps.find(rail_name(r->first, false))) continue;
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double scale = 1.0 + epsilon * (2.0 * u - 1.0);
    c.wire *= scale;
    c.pin *= scale;
  }
  return out;
}

std::vector<PairBalance> parse_balance_csv(std::string_view text) {
  std::vector<PairBalance> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (no == 1) {
      if (line != "pair,len_t,len_f,dlen,cap_t,cap_f,dcap") throw ParseError("expected balance CSV header", 1, 1);
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream cells(line);
    for (std::string c; std::getline(cells, c, ',');) f.push_back(c);
    if (f.size() != 7) throw ParseError("balance rows need 7 fields", no, 1);
    try {
      out.push_back({f[0], std::stoi(f[1]), std::stoi(f[2]), std::stoi(f[3]), std::stod(f[4]), std::stod(f[5]),
                     std::stod(f[6])});
    } catch (const std::logic_error&) {
      throw ParseError("malformed number in balance row", no, 1);
    }
  }
  if (no == 0) throw ParseError("empty balance CSV", 1, 1);
  return out;
}

std::string emit_adjacency_csv(const AdjacencyStats& a) {
  return fmt::format("empty,same_pair,other_pair\n{},{},{}\n", a.empty, a.same_pair, a.other_pair);
}

AdjacencyStats parse_adjacency_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header, row;
  std::getline(in, header);
  if (header != "empty,same_pair,other_pair" || !std::getline(in, row))
    throw ParseError("expected adjacency CSV 'empty,same_pair,other_pair'", 1, 1);
  AdjacencyStats a;
  char c1 = 0, c2 = 0;
  std::istringstream r(row);
  if (!(r >> a.empty >> c1 >> a.same_pair >> c2 >> a.other_pair) || c1 != ',' || c2 != ',')
    throw ParseError("malformed adjacency row", 2, 1);
  return a;
}

std::string emit_balance_csv(const BalanceReport& r) {
  std::string out = "pair,len_t,len_f,dlen,cap_t,cap_f,dcap\n";
  for (const auto& b : r.pairs)
    out += fmt::format("{},{},{},{},{},{},{}\n", b.pair, b.len_t, b.len_f, b.dlen, b.cap_t, b.cap_f, b.dcap);
  return out;
}

}  // namespace wddl
