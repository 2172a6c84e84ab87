// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wddl/flow.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> flow;
  std::optional<double> epsilon;
  std::optional<double> noise;
  std::optional<std::size_t> traces;
};

void add_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "INI config file; defaults apply when omitted")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "seed for placement, imbalance, stimulus and co-simulation (default 1)");
  cmd->add_option("--out", o.out, "artifact directory (default wddl_out)");
  cmd->add_option("--flow", o.flow, "secure or reference (default secure)")
      ->check(CLI::IsMember({"secure", "reference"}));
  cmd->add_option("--epsilon", o.epsilon, "rail imbalance injected before secure simulation (default 0)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--noise", o.noise, "gaussian sample noise sigma (default 0)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--traces", o.traces, "number of DPA traces (default 2000)")->check(CLI::PositiveNumber);
}

wddl::FlowConfig resolve(const Overrides& o) {
  wddl::FlowConfig cfg = o.config.empty() ? wddl::FlowConfig{} : wddl::load_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.place.seed = *o.seed;
  }
  if (o.out) cfg.out = *o.out;
  if (o.flow) cfg.mode = wddl::parse_flow_mode(*o.flow);
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  if (o.noise) cfg.noise = *o.noise;
  if (o.traces) cfg.traces = *o.traces;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure dual-rail (WDDL) design flow with DPA evaluation"};
  app.footer("Config file keys and defaults:\n\n" + wddl::default_config_text() +
             "\nExit status: 0 success, 2 verification failure, 1 other errors.");
  app.require_subcommand(1, 1);

  Overrides o;
  std::optional<wddl::Stage> stage;
  auto* run = app.add_subcommand("run", "run every stage in order");
  add_options(run, o);
  for (wddl::Stage s : wddl::all_stages()) {
    auto* cmd = app.add_subcommand(std::string(wddl::to_string(s)), fmt::format("run the {} stage", wddl::to_string(s)));
    add_options(cmd, o);
    cmd->callback([&stage, s] { stage = s; });
  }
  auto* defaults = app.add_subcommand("defaults", "print a config file with every default value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (defaults->parsed()) {
    std::cout << wddl::default_config_text();
    return 0;
  }
  try {
    const wddl::FlowConfig cfg = resolve(o);
    const auto files = stage ? wddl::run_stage(*stage, cfg) : wddl::run_flow(cfg);
    for (const auto& f : files) std::cout << (cfg.out / f).string() << '\n';
    if (stage == wddl::Stage::Report || !stage) {
      std::ifstream report(cfg.out / "report.txt");
      std::cout << report.rdbuf();
    }
    return 0;
  } catch (const wddl::FlowError& e) {
    std::cerr << "wddlflow: " << e.what() << '\n';
    return e.verification() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "wddlflow: " << e.what() << '\n';
    return 1;
  }
}
