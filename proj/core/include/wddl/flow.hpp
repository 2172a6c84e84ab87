// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wddl/des.hpp"
#include "wddl/diffroute.hpp"
#include "wddl/error.hpp"
#include "wddl/place.hpp"
#include "wddl/route.hpp"

namespace wddl {

enum class FlowMode { Secure, Reference };

std::string_view to_string(FlowMode m);
FlowMode parse_flow_mode(std::string_view text);

struct FlowConfig {
  FlowMode mode = FlowMode::Secure;
  std::uint64_t seed = 1;
  std::filesystem::path out = "wddl_out";

  DutConfig dut;
  /// Structural netlist to protect instead of the generated DES module.
  std::optional<std::filesystem::path> netlist;
  /// Cell library for `netlist`; the built-in library when unset.
  std::optional<std::filesystem::path> library;

  PlaceOptions place;
  RouteOptions route;

  UnitCaps caps;
  /// Relative rail imbalance injected before secure-flow simulation.
  double epsilon = 0.0;

  std::size_t traces = 2000;
  double noise = 0.0;
  int bit = 0;

  int max_inputs = 20;
  int cosim_cycles = 1000;
};

/// Parses the INI-style config. Relative paths resolve against `base`.
/// Unknown sections and keys are rejected with ConfigError.
FlowConfig parse_config(std::string_view text, const std::filesystem::path& base = {});
FlowConfig load_config(const std::filesystem::path& file);

/// A config file listing every key with its default value.
std::string default_config_text();

enum class Stage { GenDut, Substitute, Place, Route, Decompose, Extract, Equiv, Simulate, Dpa, Report };

std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view name);
const std::vector<Stage>& all_stages();

/// A stage failure. `verification()` marks failed checks (precharge, DRC,
/// equivalence) as opposed to bad inputs or tool errors.
class FlowError : public Error {
 public:
  FlowError(Stage stage, const std::string& what, bool verification = false);
  Stage stage() const noexcept { return stage_; }
  bool verification() const noexcept { return verification_; }

 private:
  Stage stage_;
  bool verification_;
};

/// Runs one stage against the artifact directory `cfg.out` and returns the
/// file names it wrote. Stages that do not apply to `cfg.mode` write nothing.
std::vector<std::string> run_stage(Stage s, const FlowConfig& cfg);

/// Runs every stage in order.
std::vector<std::string> run_flow(const FlowConfig& cfg);

struct Report {
  std::string summary;
  /// `n,reference_key_rank,secure_key_rank` per prefix length.
  std::string mtd_csv;
  /// `guess,reference_pkpk,reference_rank,secure_pkpk,secure_rank` at the
  /// full trace count.
  std::string pkpk_csv;
};

/// Builds the report from a completed artifact directory. A reference-only
/// directory yields empty secure columns. Throws ReportError naming the
/// first missing artifact.
Report make_report(const std::filesystem::path& dir);

}  // namespace wddl
