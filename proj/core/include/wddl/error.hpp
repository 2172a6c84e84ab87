// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace wddl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text input that does not follow a grammar. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// A structurally invalid netlist (unknown cell, multiple drivers, ...).
class NetlistError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SubstitutionError : public Error {
 public:
  using Error::Error;
};

class PlacementError : public Error {
 public:
  using Error::Error;
};

class RoutingError : public Error {
 public:
  RoutingError(const std::string& net, const std::string& what)
      : Error(what), net_(net) {}
  const std::string& net() const noexcept { return net_; }

 private:
  std::string net_;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  using Error::Error;
};

class EquivalenceError : public Error {
 public:
  using Error::Error;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace wddl
