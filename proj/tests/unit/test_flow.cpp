// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <doctest.h>

#include "wddl/error.hpp"
#include "wddl/flow.hpp"

using namespace wddl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wddlflow_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> m;
  for (const auto& e : fs::directory_iterator(dir)) m[e.path().filename().string()] = slurp(e.path());
  return m;
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

FlowConfig secure_config(const std::string& name) {
  FlowConfig c;
  c.out = scratch(name);
  c.traces = 300;
  return c;
}

// Secure flow artifacts, built once.
const fs::path& secure_run() {
  static const fs::path dir = [] {
    const FlowConfig c = secure_config("secure");
    run_flow(c);
    return c.out;
  }();
  return dir;
}

}  // namespace

TEST_CASE("default config text parses back to the defaults") {
  const FlowConfig c = parse_config(default_config_text());
  const FlowConfig d;
  CHECK(c.mode == d.mode);
  CHECK(c.seed == d.seed);
  CHECK(c.out == d.out);
  CHECK(c.dut.key == d.dut.key);
  CHECK(c.place.fill == d.place.fill);
  CHECK(c.route.spacing == d.route.spacing);
  CHECK(c.traces == d.traces);
  CHECK(c.epsilon == d.epsilon);
  CHECK(c.cosim_cycles == d.cosim_cycles);
  CHECK_FALSE(c.netlist.has_value());
}

TEST_CASE("config values, comments and relative paths") {
  const FlowConfig c = parse_config(
      "# header\n[flow]\nmode = reference ; trailing\nseed = 9\nout = o\n[dut]\nkey = 5\nnetlist = n.v\n"
      "[power]\nepsilon = 0.05\n[dpa]\ntraces = 10\n",
      "/base");
  CHECK(c.mode == FlowMode::Reference);
  CHECK(c.seed == 9);
  CHECK(c.place.seed == 9);
  CHECK(c.dut.key == 5);
  CHECK(c.epsilon == doctest::Approx(0.05));
  CHECK(c.traces == 10);
  CHECK(c.out == fs::path("/base/o"));
  REQUIRE(c.netlist.has_value());
  CHECK(*c.netlist == fs::path("/base/n.v"));
}

TEST_CASE("bad config input is rejected") {
  CHECK_THROWS_AS(parse_config("[flow]\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[dpa]\ntraces = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[flow]\nmode = sideways\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[dut]\nkey = 64\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[place]\nfill = 0\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/wddl.ini"), ConfigError);
}

TEST_CASE("stage names") {
  REQUIRE(all_stages().size() == 10);
  for (Stage s : all_stages()) CHECK(parse_stage(to_string(s)) == s);
  CHECK(to_string(Stage::GenDut) == "gen-dut");
  CHECK_FALSE(parse_stage("synthesize").has_value());
  CHECK(parse_flow_mode("secure") == FlowMode::Secure);
  CHECK_THROWS_AS(parse_flow_mode("insecure"), ConfigError);
}

TEST_CASE("secure flow writes a complete artifact set") {
  const fs::path& dir = secure_run();
  for (const char* f : {"cells.lib", "rtl.v", "diff.v", "fat.v", "rail_map.csv", "fat_lib.lef", "diff_lib.lef",
                        "fat.def", "diff.def", "ref.def", "caps.csv", "balance.csv", "ref_caps.csv", "equiv.txt",
                        "secure_traces.csv", "reference_traces.csv", "secure_dpa.csv", "reference_mtd.csv",
                        "report.txt", "plot_mtd.csv", "plot_pkpk.csv"})
    CHECK_MESSAGE(fs::exists(dir / f), f);
  const std::string report = slurp(dir / "report.txt");
  CHECK(report.find("secure mtd=not_disclosed ned=0 nsd=0") != std::string::npos);
  CHECK(report.find("equiv exhaustive EQUIV") != std::string::npos);
  const std::string eq = slurp(dir / "equiv.txt");
  CHECK(eq.rfind("exhaustive EQUIV", 0) == 0);
  CHECK(eq.find("\ncosim EQUIV") != std::string::npos);
}

TEST_CASE("the report rebuilds from artifacts and names missing ones") {
  const fs::path& dir = secure_run();
  const Report r = make_report(dir);
  CHECK(r.summary == slurp(dir / "report.txt"));
  CHECK(r.pkpk_csv == slurp(dir / "plot_pkpk.csv"));
  const std::string& p = r.pkpk_csv;
  CHECK(p.rfind("guess,reference_pkpk,reference_rank,secure_pkpk,secure_rank\n", 0) == 0);
  CHECK(std::count(p.begin(), p.end(), '\n') == 65);
  CHECK(r.mtd_csv.rfind("n,reference_key_rank,secure_key_rank\n1,", 0) == 0);

  const fs::path empty = scratch("empty");
  fs::create_directories(empty);
  try {
    make_report(empty);
    FAIL("expected ReportError");
  } catch (const ReportError& e) {
    CHECK(std::string(e.what()).find("missing artifact") != std::string::npos);
  }
}

TEST_CASE("identical configs give byte-identical artifacts") {
  const FlowConfig c = secure_config("secure_again");
  run_flow(c);
  CHECK(snapshot(c.out) == snapshot(secure_run()));
}

TEST_CASE("reference mode skips the secure stages") {
  FlowConfig c = secure_config("reference");
  c.mode = FlowMode::Reference;
  c.traces = 2000;
  run_flow(c);
  CHECK_FALSE(fs::exists(c.out / "diff.v"));
  CHECK_FALSE(fs::exists(c.out / "fat.def"));
  CHECK_FALSE(fs::exists(c.out / "equiv.txt"));
  CHECK(fs::exists(c.out / "ref.def"));
  const std::string pk = slurp(c.out / "plot_pkpk.csv");
  CHECK(pk.find("\n46,") != std::string::npos);
  const auto at = pk.find("\n46,");
  const std::string row = pk.substr(at + 1, pk.find('\n', at + 1) - at - 1);
  // guess,reference_pkpk,reference_rank,,
  CHECK(row.substr(row.find(',', 3) + 1, 2) == "1,");
  CHECK(slurp(c.out / "report.txt").find("reference mtd=") != std::string::npos);
}

TEST_CASE("stage failures carry the stage and kind") {
  SUBCASE("a later stage without its inputs") {
    const FlowConfig c = secure_config("no_inputs");
    try {
      run_stage(Stage::Route, c);
      FAIL("expected FlowError");
    } catch (const FlowError& e) {
      CHECK(e.stage() == Stage::Route);
      CHECK_FALSE(e.verification());
      CHECK(std::string(e.what()).find("missing artifact") != std::string::npos);
    }
  }
  SUBCASE("a full die cannot be routed") {
    FlowConfig c = secure_config("full");
    c.place.fill = 1.0;
    run_stage(Stage::GenDut, c);
    run_stage(Stage::Substitute, c);
    run_stage(Stage::Place, c);
    try {
      run_stage(Stage::Route, c);
      FAIL("expected FlowError");
    } catch (const FlowError& e) {
      CHECK(e.stage() == Stage::Route);
    }
  }
  SUBCASE("a netlist with two drivers on one net") {
    FlowConfig c = secure_config("two_drivers");
    const fs::path in = scratch("two_drivers_in");
    spit(in / "d.v",
         "module d (a, b, y);\ninput a;\ninput b;\noutput y;\nAND2 u1 (.A(a), .B(b), .Y(y));\n"
         "OR2 u2 (.A(a), .B(b), .Y(y));\nendmodule\n");
    c.netlist = in / "d.v";
    try {
      run_stage(Stage::GenDut, c);
      FAIL("expected FlowError");
    } catch (const FlowError& e) {
      CHECK(e.stage() == Stage::GenDut);
      CHECK_FALSE(e.verification());
      CHECK(std::string(e.what()).find("y") != std::string::npos);
    }
  }
}

TEST_CASE("a library-defined cell is dualized from its function") {
  FlowConfig c = secure_config("mux");
  const fs::path in = scratch("mux_in");
  spit(in / "m.v",
       "module m (a, b, s, y);\ninput a;\ninput b;\ninput s;\noutput y;\nMUX2 u (.A(a), .B(b), .S(s), .Y(y));\n"
       "endmodule\n");
  const FlowConfig base = secure_config("lib_source");
  run_stage(Stage::GenDut, base);
  spit(in / "cells.lib", slurp(base.out / "cells.lib") + "MUX2 Y = S & B | !S & A (A, B, S) ; area=12 ; cap=2\n");
  c.netlist = in / "m.v";
  c.library = in / "cells.lib";
  for (Stage s : {Stage::GenDut, Stage::Substitute, Stage::Place, Stage::Route, Stage::Decompose, Stage::Extract,
                  Stage::Equiv})
    run_stage(s, c);
  CHECK(slurp(c.out / "equiv.txt").rfind("exhaustive EQUIV", 0) == 0);
  CHECK(slurp(c.out / "diff.v").find("W_MUX2") != std::string::npos);
}

TEST_CASE("a user netlist goes through the physical and equivalence stages") {
  FlowConfig c = secure_config("user");
  const fs::path in = scratch("user_in");
  spit(in / "t.v",
       "module t (a, b, c, y, z);\ninput a;\ninput b;\ninput c;\noutput y;\noutput z;\n"
       "AND2 u1 (.A(a), .B(b), .Y(n1));\nXOR2 u2 (.A(n1), .B(c), .Y(y));\nINV u3 (.A(n1), .Y(z));\nendmodule\n");
  c.netlist = in / "t.v";
  for (Stage s : {Stage::GenDut, Stage::Substitute, Stage::Place, Stage::Route, Stage::Decompose, Stage::Extract,
                  Stage::Equiv})
    run_stage(s, c);
  CHECK(slurp(c.out / "equiv.txt").rfind("exhaustive EQUIV", 0) == 0);
  const std::string bal = slurp(c.out / "balance.csv");
  CHECK(bal.find("n1,") != std::string::npos);
}
