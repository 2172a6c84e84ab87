// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wddl/library.hpp"

namespace wddl {

enum class PortDir { Input, Output };

/// A module port. Bus ports expand to bit nets `name[0] .. name[width-1]`;
/// scalar ports are a single net named `name`.
struct Port {
  std::string name;
  PortDir dir = PortDir::Input;
  int width = 1;
  bool bus = false;

  std::vector<std::string> bits() const;
  friend bool operator==(const Port&, const Port&) = default;
};

struct Wire {
  std::string name;
  int width = 1;
  bool bus = false;

  std::vector<std::string> bits() const;
  friend bool operator==(const Wire&, const Wire&) = default;
};

struct PinBinding {
  std::string pin;
  std::string net;
  friend bool operator==(const PinBinding&, const PinBinding&) = default;
};

struct Instance {
  std::string name;
  std::string cell;
  std::vector<PinBinding> pins;

  /// Net bound to `pin`, or nullptr.
  const std::string* net_of(std::string_view pin) const;
  friend bool operator==(const Instance&, const Instance&) = default;
};

/// `assign lhs = rhs;`, a zero-cost alias that drives `lhs`.
struct Assign {
  std::string lhs;
  std::string rhs;
  friend bool operator==(const Assign&, const Assign&) = default;
};

/// Single-ended gate-level circuit. Nets are bit-level names.
struct Netlist {
  std::string name;
  std::vector<Port> ports;
  std::vector<Wire> wires;
  std::vector<Instance> instances;
  std::vector<Assign> assigns;
  std::optional<std::string> clock;

  /// Every declared bit net: port bits in port order, then wire bits.
  std::vector<std::string> nets() const;
  /// Input port bits in declaration order; the clock net is skipped unless asked for.
  std::vector<std::string> input_bits(bool include_clock = false) const;
  std::vector<std::string> output_bits() const;
  const Port* find_port(std::string_view name) const;
  const Instance* find_instance(std::string_view name) const;

  friend bool operator==(const Netlist&, const Netlist&) = default;
};

enum class DiagnosticKind {
  UnknownCell,
  UnknownPin,
  UnboundPin,
  UndeclaredNet,
  DuplicateName,
  MultipleDrivers,
  Undriven,
  CombinationalCycle,
};

struct Diagnostic {
  DiagnosticKind kind;
  std::string object;
  std::string message;
};

std::string_view to_string(DiagnosticKind kind);

/// Empty iff every netlist invariant holds against `lib`.
std::vector<Diagnostic> validate_netlist(const Netlist& n, const Library& lib);

/// Parses the structural netlist text format and validates against `lib`.
/// Throws ParseError on syntax errors and NetlistError on invariant violations.
Netlist parse_netlist(std::string_view text, const Library& lib);

std::string emit_netlist(const Netlist& n);

/// Total library area of all instances.
double cell_area(const Netlist& n, const Library& lib);

/// Splits `name[3]` into ("name", 3); scalar names give (name, nullopt).
std::pair<std::string, std::optional<int>> split_bit(std::string_view net);

}  // namespace wddl
