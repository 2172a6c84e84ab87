// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/flow.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "wddl/captable.hpp"
#include "wddl/drc.hpp"
#include "wddl/equiv.hpp"
#include "wddl/gatesim.hpp"
#include "wddl/geometry.hpp"
#include "wddl/library.hpp"
#include "wddl/netlist.hpp"
#include "wddl/sca.hpp"
#include "wddl/substitute.hpp"
#include "wddl/wddl_cell.hpp"

namespace wddl {

namespace fs = std::filesystem;

std::string_view to_string(FlowMode m) { return m == FlowMode::Secure ? "secure" : "reference"; }

FlowMode parse_flow_mode(std::string_view text) {
  if (text == "secure") return FlowMode::Secure;
  if (text == "reference") return FlowMode::Reference;
  throw ConfigError(fmt::format("flow must be secure or reference, got '{}'", text));
}

namespace {

template <typename T>
T parse_number(const std::string& section, const std::string& key, const std::string& value) {
  T v{};
  const char* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || p != end)
    throw ConfigError(fmt::format("[{}] {}: '{}' is not a valid number", section, key, value));
  return v;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

FlowConfig parse_config(std::string_view text, const fs::path& base) {
  // Drop '#' comment lines and trailing comments after whitespace; the INI
  // reader only knows full-line ';' comments.
  std::string cleaned;
  std::istringstream lines{std::string(text)};
  for (std::string line; std::getline(lines, line);) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') line.clear();
    for (std::size_t i = 1; i < line.size(); ++i) {
      if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    cleaned += line + '\n';
  }
  boost::property_tree::ptree tree;
  try {
    std::istringstream in(cleaned);
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }

  FlowConfig c;
  int die_w = 0, die_h = 0;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(fmt::format("key '{}' must be inside a section", section));
    for (const auto& [key, node] : body) {
      const std::string v = node.get_value<std::string>();
      auto i64 = [&] { return parse_number<long long>(section, key, v); };
      auto u64 = [&] { return parse_number<std::uint64_t>(section, key, v); };
      auto i32 = [&] { return parse_number<int>(section, key, v); };
      auto dbl = [&] { return parse_number<double>(section, key, v); };
      bool known = true;
      if (section == "flow") {
        if (key == "mode") c.mode = parse_flow_mode(v);
        else if (key == "seed") c.seed = u64();
        else if (key == "out") c.out = resolve(base, v);
        else known = false;
      } else if (section == "dut") {
        if (key == "key") c.dut.key = i32();
        else if (key == "pl_width") c.dut.pl_width = i32();
        else if (key == "pr_width") c.dut.pr_width = i32();
        else if (key == "sbox") c.dut.sbox = i32();
        else if (key == "samples_per_cycle") c.dut.samples_per_cycle = i32();
        else if (key == "netlist") c.netlist = v.empty() ? std::nullopt : std::optional(resolve(base, v));
        else if (key == "library") c.library = v.empty() ? std::nullopt : std::optional(resolve(base, v));
        else known = false;
      } else if (section == "place") {
        if (key == "aspect") c.place.aspect = dbl();
        else if (key == "fill") c.place.fill = dbl();
        else if (key == "anneal_passes") c.place.anneal_passes = i32();
        else if (key == "die_width") die_w = i32();
        else if (key == "die_height") die_h = i32();
        else known = false;
      } else if (section == "route") {
        if (key == "spacing") c.route.spacing = i32();
        else if (key == "max_rounds") c.route.max_rounds = i32();
        else if (key == "window_margin") c.route.window_margin = i32();
        else if (key == "via_cost") c.route.via_cost = i32();
        else known = false;
      } else if (section == "power") {
        if (key == "wire") c.caps.wire = dbl();
        else if (key == "via") c.caps.via = dbl();
        else if (key == "pin") c.caps.pin = dbl();
        else if (key == "epsilon") c.epsilon = dbl();
        else if (key.rfind("layer_", 0) == 0 && key.size() > 6) c.caps.layer[key.substr(6)] = dbl();
        else known = false;
      } else if (section == "dpa") {
        if (key == "traces") {
          const long long n = i64();
          if (n < 1) throw ConfigError("[dpa] traces must be positive");
          c.traces = static_cast<std::size_t>(n);
        } else if (key == "noise") c.noise = dbl();
        else if (key == "bit") c.bit = i32();
        else known = false;
      } else if (section == "equiv") {
        if (key == "max_inputs") c.max_inputs = i32();
        else if (key == "cosim_cycles") c.cosim_cycles = i32();
        else known = false;
      } else {
        throw ConfigError(fmt::format("unknown config section [{}]", section));
      }
      if (!known) throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, section));
    }
  }
  if ((die_w > 0) != (die_h > 0)) throw ConfigError("[place] die_width and die_height must be set together");
  if (die_w > 0) c.place.die = Point{die_w, die_h};
  c.place.seed = c.seed;
  if (!(c.place.fill > 0 && c.place.fill <= 1)) throw ConfigError("[place] fill must be in (0,1]");
  if (!(c.place.aspect > 0)) throw ConfigError("[place] aspect must be positive");
  if (c.bit < 0 || c.bit > 3) throw ConfigError("[dpa] bit must be in [0,3]");
  if (c.noise < 0) throw ConfigError("[dpa] noise must be non-negative");
  if (c.epsilon < 0) throw ConfigError("[power] epsilon must be non-negative");
  if (c.cosim_cycles < 1) throw ConfigError("[equiv] cosim_cycles must be positive");
  c.dut.validate();
  return c;
}

FlowConfig load_config(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.parent_path());
}

std::string default_config_text() {
  const FlowConfig c;
  return fmt::format(
      "[flow]\n"
      "mode = {}             ; secure or reference\n"
      "seed = {}\n"
      "out = {}\n"
      "\n"
      "[dut]\n"
      "key = {}\n"
      "pl_width = {}\n"
      "pr_width = {}\n"
      "sbox = {}\n"
      "samples_per_cycle = {}\n"
      "netlist =                 ; structural verilog; empty builds the DES module\n"
      "library =                 ; cell library for netlist; empty uses the built-in cells\n"
      "\n"
      "[place]\n"
      "aspect = {}\n"
      "fill = {}\n"
      "anneal_passes = {}\n"
      "die_width = 0             ; 0 sizes the die from fill and aspect\n"
      "die_height = 0\n"
      "\n"
      "[route]\n"
      "spacing = {}\n"
      "max_rounds = {}\n"
      "window_margin = {}\n"
      "via_cost = {}\n"
      "\n"
      "[power]\n"
      "wire = {}                 ; per unit length; layer_<NAME> overrides per layer\n"
      "via = {}\n"
      "pin = {}\n"
      "epsilon = {}\n"
      "\n"
      "[dpa]\n"
      "traces = {}\n"
      "noise = {}\n"
      "bit = {}\n"
      "\n"
      "[equiv]\n"
      "max_inputs = {}\n"
      "cosim_cycles = {}\n",
      to_string(c.mode), c.seed, c.out.string(), c.dut.key, c.dut.pl_width, c.dut.pr_width, c.dut.sbox,
      c.dut.samples_per_cycle, c.place.aspect, c.place.fill, c.place.anneal_passes, c.route.spacing,
      c.route.max_rounds, c.route.window_margin, c.route.via_cost, c.caps.wire, c.caps.via, c.caps.pin, c.epsilon,
      c.traces, c.noise, c.bit, c.max_inputs, c.cosim_cycles);
}

namespace {

constexpr std::string_view kStageNames[] = {"gen-dut", "substitute", "place", "route",    "decompose",
                                            "extract", "equiv",      "simulate", "dpa", "report"};

}  // namespace

std::string_view to_string(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

std::optional<Stage> parse_stage(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kStageNames); ++i)
    if (kStageNames[i] == name) return static_cast<Stage>(i);
  return std::nullopt;
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = {Stage::GenDut,  Stage::Substitute, Stage::Place, Stage::Route,
                                            Stage::Decompose, Stage::Extract, Stage::Equiv, Stage::Simulate,
                                            Stage::Dpa,     Stage::Report};
  return stages;
}

FlowError::FlowError(Stage stage, const std::string& what, bool verification)
    : Error(fmt::format("{}: {}", to_string(stage), what)), stage_(stage), verification_(verification) {}

namespace {

std::optional<std::string> try_read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Artifact access for one stage run.
class Workspace {
 public:
  Workspace(Stage stage, const FlowConfig& cfg) : stage_(stage), cfg_(cfg) {}

  std::string read(const std::string& name) const {
    auto text = try_read(cfg_.out / name);
    if (!text) throw FlowError(stage_, "missing artifact " + name);
    return *text;
  }

  void write(const std::string& name, const std::string& text) {
    std::error_code ec;
    fs::create_directories(cfg_.out, ec);
    std::ofstream out(cfg_.out / name, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw FlowError(stage_, "cannot write " + (cfg_.out / name).string());
    written_.push_back(name);
  }

  [[noreturn]] void fail(const std::string& what) const { throw FlowError(stage_, what, true); }

  const FlowConfig& cfg() const { return cfg_; }
  bool secure() const { return cfg_.mode == FlowMode::Secure; }
  std::vector<std::string> take() { return std::move(written_); }

  Library library() const { return parse_library(read("cells.lib")); }
  Netlist rtl(const Library& lib) const { return parse_netlist(read("rtl.v"), lib); }
  DualRailNetlist dual(const WddlLibrary& wlib) const { return parse_dual_netlist(read("diff.v"), wlib); }

 private:
  Stage stage_;
  const FlowConfig& cfg_;
  std::vector<std::string> written_;
};

void check_drc_clean(Workspace& w, const Design& d, const LibraryGeometry& lib, const std::string& what) {
  const auto v = check_drc(d, lib);
  if (!v.empty())
    w.fail(fmt::format("{} has {} DRC violations, first {} {}: {}", what, v.size(), to_string(v[0].kind),
                       v[0].object, v[0].message));
}

void stage_gen_dut(Workspace& w) {
  const auto& cfg = w.cfg();
  Library lib = base_library();
  if (cfg.library) {
    auto text = try_read(*cfg.library);
    if (!text) throw ConfigError("cannot read library " + cfg.library->string());
    lib = parse_library(*text);
  }
  Netlist n;
  if (cfg.netlist) {
    auto text = try_read(*cfg.netlist);
    if (!text) throw ConfigError("cannot read netlist " + cfg.netlist->string());
    n = parse_netlist(*text, lib);
  } else {
    n = build_des_module(cfg.dut, lib);
  }
  const auto diags = validate_netlist(n, lib);
  if (!diags.empty())
    w.fail(fmt::format("netlist has {} problems, first {} {}: {}", diags.size(), to_string(diags[0].kind),
                       diags[0].object, diags[0].message));
  w.write("cells.lib", emit_library(lib));
  w.write("rtl.v", emit_netlist(n));
}

void stage_substitute(Workspace& w) {
  if (!w.secure()) return;
  const Library lib = w.library();
  const Netlist n = w.rtl(lib);
  const WddlLibrary wlib(lib);
  const DualRailNetlist d = substitute_cells(n, wlib);
  const auto problems = validate_dual(d);
  if (!problems.empty()) w.fail(fmt::format("dual-rail netlist invalid: {}", problems.front()));
  const PrechargeVerdict pv = precharge_check(d);
  if (!pv.pass) w.fail(fmt::format("precharge check failed at {} ({}): {}", pv.gate, pv.net, pv.message));
  const FatNetlist fat = abstract_fat(d);
  w.write("diff.v", emit_dual_netlist(d));
  w.write("fat_cells.lib", emit_library(fat_library(wlib)));
  w.write("fat.v", emit_netlist(fat.netlist));
  w.write("rail_map.csv", emit_rail_map_csv(fat.rail_map));
}

void stage_place(Workspace& w) {
  const auto& cfg = w.cfg();
  const Library lib = w.library();
  if (w.secure()) {
    const Library fat_lib = parse_library(w.read("fat_cells.lib"));
    const Netlist fat = parse_netlist(w.read("fat.v"), fat_lib);
    const LibraryPair libs = build_libraries(fat_lib);
    const PlacedDesign p = place(fat, libs.fat, cfg.place);
    w.write("fat_lib.lef", emit_lef(libs.fat));
    w.write("diff_lib.lef", emit_lef(libs.diff));
    w.write("fat_placed.def", emit_def(p));
  }
  const Netlist n = w.rtl(lib);
  const LibraryGeometry single = build_single_library(lib);
  const PlacedDesign p = place(n, single, cfg.place);
  w.write("single_lib.lef", emit_lef(single));
  w.write("ref_placed.def", emit_def(p));
}

void stage_route(Workspace& w) {
  const auto& cfg = w.cfg();
  auto one = [&](const std::string& lef, const std::string& in, const std::string& out, const std::string& what) {
    const LibraryGeometry lib = parse_lef(w.read(lef));
    const RoutedDesign r = route(parse_def(w.read(in), lib), lib, cfg.route);
    check_drc_clean(w, r, lib, what);
    w.write(out, emit_def(r));
  };
  if (w.secure()) one("fat_lib.lef", "fat_placed.def", "fat.def", "fat design");
  one("single_lib.lef", "ref_placed.def", "ref.def", "reference design");
}

void stage_decompose(Workspace& w) {
  if (!w.secure()) return;
  const LibraryGeometry fat_lib = parse_lef(w.read("fat_lib.lef"));
  const LibraryGeometry diff_lib = parse_lef(w.read("diff_lib.lef"));
  const auto rail_map = parse_rail_map_csv(w.read("rail_map.csv"));
  const RoutedDesign fat = parse_def(w.read("fat.def"), fat_lib);
  const RoutedDesign diff = decompose(fat, fat_lib, diff_lib, &rail_map);
  check_drc_clean(w, diff, diff_lib, "differential design");
  w.write("diff.def", emit_def(diff));
}

void stage_extract(Workspace& w) {
  const auto& cfg = w.cfg();
  if (w.secure()) {
    const LibraryGeometry diff_lib = parse_lef(w.read("diff_lib.lef"));
    const RoutedDesign diff = parse_def(w.read("diff.def"), diff_lib);
    const auto rail_map = parse_rail_map_csv(w.read("rail_map.csv"));
    const CapTable caps = extract_capacitance(diff, diff_lib, cfg.caps);
    const BalanceReport b = balance_report(caps, rail_map, diff);
    w.write("caps.csv", emit_caps_csv(caps));
    w.write("balance.csv", emit_balance_csv(b));
    w.write("adjacency.csv", emit_adjacency_csv(b.adjacency));
  }
  const LibraryGeometry single = parse_lef(w.read("single_lib.lef"));
  const RoutedDesign ref = parse_def(w.read("ref.def"), single);
  w.write("ref_caps.csv", emit_caps_csv(extract_capacitance(ref, single, cfg.caps)));
}

void stage_equiv(Workspace& w) {
  if (!w.secure()) return;
  const auto& cfg = w.cfg();
  const Library lib = w.library();
  const Netlist n = w.rtl(lib);
  const DualRailNetlist d = w.dual(WddlLibrary(lib));
  const EquivVerdict ex = exhaustive_equiv(n, project_true_rail(d), lib, cfg.max_inputs);
  const EquivVerdict co = cosim_equiv(n, lib, d, cfg.cosim_cycles, cfg.seed);
  w.write("equiv.txt", fmt::format("exhaustive {}\ncosim {}\n", ex.line(), co.line()));
  if (!ex.equivalent) w.fail("exhaustive check: " + ex.line());
  if (!co.equivalent) w.fail("co-simulation: " + co.line());
}

CollectOptions collect_options(const FlowConfig& cfg) {
  CollectOptions o;
  o.traces = cfg.traces;
  o.seed = cfg.seed;
  o.noise = cfg.noise;
  o.samples_per_cycle = cfg.dut.samples_per_cycle;
  return o;
}

void write_traces(Workspace& w, const std::string& variant, const TraceSet& t) {
  w.write(variant + "_plaintexts.csv", emit_plaintexts_csv(t));
  w.write(variant + "_traces.csv", emit_traces_csv(t));
}

void stage_simulate(Workspace& w) {
  const auto& cfg = w.cfg();
  const Library lib = w.library();
  if (w.secure()) {
    const DualRailNetlist d = w.dual(WddlLibrary(lib));
    const Simulator sim(d);
    const CapTable caps = inject_imbalance(parse_caps_csv(w.read("caps.csv")), cfg.epsilon, cfg.seed);
    write_traces(w, "secure", collect_traces(sim, caps, collect_options(cfg), cfg.dut.key).set);
  }
  const Simulator sim(w.rtl(lib), lib);
  const CapTable caps = parse_caps_csv(w.read("ref_caps.csv"));
  write_traces(w, "reference", collect_traces(sim, caps, collect_options(cfg), cfg.dut.key).set);
}

void stage_dpa(Workspace& w) {
  const auto& cfg = w.cfg();
  auto one = [&](const std::string& v) {
    LabeledTraces t{parse_trace_files(w.read(v + "_plaintexts.csv"), w.read(v + "_traces.csv")), cfg.dut.key};
    const DpaResult r = run_dpa(t, cfg.bit);
    w.write(v + "_dpa.csv", emit_dpa_csv(r));
    w.write(v + "_dtraces.csv", emit_dtraces_csv(r));
    w.write(v + "_mtd.csv", emit_mtd_csv(r.series, cfg.dut.key));
    w.write(v + "_summary.txt", summary_line(r) + "\n");
  };
  if (w.secure()) one("secure");
  one("reference");
}

void stage_report(Workspace& w) {
  const Report r = make_report(w.cfg().out);
  w.write("report.txt", r.summary);
  w.write("plot_mtd.csv", r.mtd_csv);
  w.write("plot_pkpk.csv", r.pkpk_csv);
}

}  // namespace

std::vector<std::string> run_stage(Stage s, const FlowConfig& cfg) {
  Workspace w(s, cfg);
  try {
    switch (s) {
      case Stage::GenDut: stage_gen_dut(w); break;
      case Stage::Substitute: stage_substitute(w); break;
      case Stage::Place: stage_place(w); break;
      case Stage::Route: stage_route(w); break;
      case Stage::Decompose: stage_decompose(w); break;
      case Stage::Extract: stage_extract(w); break;
      case Stage::Equiv: stage_equiv(w); break;
      case Stage::Simulate: stage_simulate(w); break;
      case Stage::Dpa: stage_dpa(w); break;
      case Stage::Report: stage_report(w); break;
    }
  } catch (const FlowError&) {
    throw;
  } catch (const std::exception& e) {
    throw FlowError(s, e.what());
  }
  return w.take();
}

std::vector<std::string> run_flow(const FlowConfig& cfg) {
  std::vector<std::string> all;
  for (Stage s : all_stages()) {
    auto files = run_stage(s, cfg);
    all.insert(all.end(), files.begin(), files.end());
  }
  return all;
}

namespace {

std::string need(const fs::path& dir, const std::string& name) {
  auto text = try_read(dir / name);
  if (!text) throw ReportError("missing artifact " + name);
  return *text;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, const std::string& name) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ReportError("empty artifact " + name);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    rows.push_back(std::move(f));
  }
  return rows;
}

struct VariantData {
  std::string summary;
  // guess -> (pkpk, rank)
  std::vector<std::pair<std::string, std::string>> pkpk;
  // n -> key rank
  std::vector<std::string> ranks;
  int key_rank = 0;
};

VariantData load_variant(const fs::path& dir, const std::string& v) {
  VariantData d;
  d.summary = need(dir, v + "_summary.txt");
  while (!d.summary.empty() && (d.summary.back() == '\n' || d.summary.back() == '\r')) d.summary.pop_back();
  const auto dpa = csv_rows(need(dir, v + "_dpa.csv"), v + "_dpa.csv");
  d.pkpk.assign(64, {"", ""});
  for (const auto& r : dpa) {
    if (r.size() != 3) throw ReportError("malformed row in " + v + "_dpa.csv");
    const int g = std::stoi(r[0]);
    if (g < 0 || g > 63) throw ReportError("guess out of range in " + v + "_dpa.csv");
    d.pkpk[static_cast<std::size_t>(g)] = {r[1], r[2]};
  }
  for (const auto& r : csv_rows(need(dir, v + "_mtd.csv"), v + "_mtd.csv")) {
    if (r.size() < 2) throw ReportError("malformed row in " + v + "_mtd.csv");
    d.ranks.push_back(r[1]);
  }
  if (!d.ranks.empty()) d.key_rank = std::stoi(d.ranks.back());
  return d;
}

}  // namespace

Report make_report(const fs::path& dir) {
  const Library lib = parse_library(need(dir, "cells.lib"));
  const Netlist n = parse_netlist(need(dir, "rtl.v"), lib);
  const VariantData ref = load_variant(dir, "reference");
  const bool secure = fs::exists(dir / "diff.v");
  std::optional<VariantData> sec;

  std::string s;
  s += fmt::format("design {}\n", n.name);
  s += fmt::format("flow {}\n", secure ? "secure" : "reference");
  const double ref_area = cell_area(n, lib);
  if (secure) {
    const DualRailNetlist d = parse_dual_netlist(need(dir, "diff.v"), WddlLibrary(lib));
    const double dual_area = dual_cell_area(d);
    s += fmt::format("area reference={} secure={} ratio={:.4f}\n", ref_area, dual_area, dual_area / ref_area);
    const auto pairs = parse_balance_csv(need(dir, "balance.csv"));
    const auto adj = parse_adjacency_csv(need(dir, "adjacency.csv"));
    const auto equiv = need(dir, "equiv.txt");
    const long unequal = std::count_if(pairs.begin(), pairs.end(), [](const PairBalance& p) { return p.dlen != 0; });
    double max_dcap = 0;
    for (const auto& p : pairs) max_dcap = std::max(max_dcap, std::abs(p.dcap));
    s += fmt::format("balance pairs={} dlen_nonzero={} max_abs_dcap={}\n", pairs.size(), unequal, max_dcap);
    s += "balance_histogram";
    for (const auto& b : dcap_histogram(pairs))
      s += std::isinf(b.upper) ? fmt::format(" inf:{}", b.count) : fmt::format(" {}:{}", b.upper, b.count);
    s += '\n';
    s += fmt::format("adjacency empty={:.4f} same_pair={:.4f} other_pair={:.4f}\n", adj.fraction_empty(),
                     adj.fraction_same(), adj.fraction_other());
    std::istringstream eq(equiv);
    for (std::string line; std::getline(eq, line);)
      if (!line.empty()) s += "equiv " + line + '\n';
    sec = load_variant(dir, "secure");
  } else {
    s += fmt::format("area reference={}\n", ref_area);
  }
  s += fmt::format("reference {} key_rank={}\n", ref.summary, ref.key_rank);
  if (sec) s += fmt::format("secure {} key_rank={}\n", sec->summary, sec->key_rank);

  Report r;
  r.summary = std::move(s);
  r.mtd_csv = "n,reference_key_rank,secure_key_rank\n";
  const std::size_t rows = std::max(ref.ranks.size(), sec ? sec->ranks.size() : 0);
  for (std::size_t i = 0; i < rows; ++i) {
    r.mtd_csv += fmt::format("{},{},{}\n", i + 1, i < ref.ranks.size() ? ref.ranks[i] : "",
                             sec && i < sec->ranks.size() ? sec->ranks[i] : "");
  }
  r.pkpk_csv = "guess,reference_pkpk,reference_rank,secure_pkpk,secure_rank\n";
  for (std::size_t g = 0; g < 64; ++g) {
    r.pkpk_csv += fmt::format("{},{},{},{},{}\n", g, ref.pkpk[g].first, ref.pkpk[g].second,
                              sec ? sec->pkpk[g].first : "", sec ? sec->pkpk[g].second : "");
  }
  return r;
}

}  // namespace wddl
