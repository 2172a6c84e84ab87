// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "wddl/library.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "wddl/error.hpp"

namespace wddl {

bool CellFunction::has_pin(std::string_view pin) const {
  if (pin == output) return true;
  if (clock && pin == *clock) return true;
  return std::find(inputs.begin(), inputs.end(), pin) != inputs.end();
}

Library::Library(std::vector<CellFunction> cells) {
  for (auto& c : cells) add(std::move(c));
}

void Library::add(CellFunction cell) {
  if (index_.count(cell.name)) throw ConfigError("duplicate library cell '" + cell.name + "'");
  if (cell.logic.max_var() >= static_cast<int>(cell.inputs.size()))
    throw ConfigError("cell '" + cell.name + "' logic references an undeclared input");
  if (cell.sequential()) {
    if (cell.inputs.size() != 1 || cell.logic != Expr::var(0))
      throw ConfigError("register cell '" + cell.name + "' must have exactly one data input");
  }
  index_.emplace(cell.name, cells_.size());
  cells_.push_back(std::move(cell));
}

const CellFunction* Library::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &cells_[it->second];
}

const CellFunction& Library::at(std::string_view name) const {
  if (const auto* c = find(name)) return *c;
  throw NetlistError("unknown cell function '" + std::string(name) + "'");
}

Library base_library() {
  static const char* kText =
      "AND2 Y = A & B (A, B) ; area=6 ; cap=2\n"
      "OR2 Y = A | B (A, B) ; area=6 ; cap=2\n"
      "NAND2 Y = !(A & B) (A, B) ; area=4 ; cap=2\n"
      "NOR2 Y = !(A | B) (A, B) ; area=4 ; cap=2\n"
      "XOR2 Y = A ^ B (A, B) ; area=10 ; cap=2\n"
      "XNOR2 Y = !(A ^ B) (A, B) ; area=10 ; cap=2\n"
      "INV Y = !A (A) ; area=2 ; cap=2\n"
      "AOI32 Y = !(A1 & A2 & A3 | B1 & B2) (A1, A2, A3, B1, B2) ; area=10 ; cap=2\n"
      "OAI32 Y = !((A1 | A2 | A3) & (B1 | B2)) (A1, A2, A3, B1, B2) ; area=10 ; cap=2\n"
      "DFF Q = D (D, CK) ; area=24 ; cap=2 ; clock=CK\n";
  return parse_library(kText);
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

double parse_number(const std::string& s, int line, int col) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("expected a number, got '" + s + "'", line, col);
  return v;
}

CellFunction parse_cell_line(std::string_view raw, int line) {
  std::vector<std::string> fields;
  {
    std::string cur;
    for (char c : raw) {
      if (c == ';') {
        fields.push_back(trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(trim(cur));
  }
  const std::string& head = fields[0];

  CellFunction cell;
  std::size_t pos = 0;
  auto next_word = [&]() {
    while (pos < head.size() && std::isspace(static_cast<unsigned char>(head[pos]))) ++pos;
    std::size_t start = pos;
    while (pos < head.size() && (std::isalnum(static_cast<unsigned char>(head[pos])) || head[pos] == '_'))
      ++pos;
    return head.substr(start, pos - start);
  };
  cell.name = next_word();
  if (!is_identifier(cell.name)) throw ParseError("expected cell name", line, 1);
  cell.output = next_word();
  if (!is_identifier(cell.output))
    throw ParseError("expected output pin after '" + cell.name + "'", line, static_cast<int>(pos) + 1);
  while (pos < head.size() && std::isspace(static_cast<unsigned char>(head[pos]))) ++pos;
  if (pos >= head.size() || head[pos] != '=')
    throw ParseError("expected '='", line, static_cast<int>(pos) + 1);
  const std::string rhs = trim(std::string_view(head).substr(pos + 1));
  if (rhs.empty() || rhs.back() != ')')
    throw ParseError("expected input pin list '( ... )' at end of cell definition", line,
                     static_cast<int>(head.size()));

  int depth = 0;
  std::size_t open = std::string::npos;
  for (std::size_t i = rhs.size(); i-- > 0;) {
    if (rhs[i] == ')') ++depth;
    if (rhs[i] == '(' && --depth == 0) {
      open = i;
      break;
    }
  }
  if (open == std::string::npos) throw ParseError("unbalanced parentheses", line, 1);

  std::vector<std::string> pins;
  {
    std::stringstream ss(rhs.substr(open + 1, rhs.size() - open - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!is_identifier(item)) throw ParseError("bad pin name '" + item + "'", line, 1);
      pins.push_back(item);
    }
  }
  const std::string expr_text = rhs.substr(0, open);

  for (std::size_t i = 1; i < fields.size(); ++i) {
    const std::string& f = fields[i];
    if (f.empty()) continue;
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + f + "'", line, 1);
    const std::string key = trim(std::string_view(f).substr(0, eq));
    const std::string val = trim(std::string_view(f).substr(eq + 1));
    if (key == "area") {
      cell.area = parse_number(val, line, 1);
    } else if (key == "cap") {
      cell.input_cap = parse_number(val, line, 1);
    } else if (key == "clock") {
      if (!is_identifier(val)) throw ParseError("bad clock pin '" + val + "'", line, 1);
      cell.clock = val;
    } else {
      throw ParseError("unknown cell attribute '" + key + "'", line, 1);
    }
  }

  for (const auto& p : pins)
    if (!cell.clock || p != *cell.clock) cell.inputs.push_back(p);
  if (cell.clock && std::find(pins.begin(), pins.end(), *cell.clock) == pins.end())
    throw ParseError("clock pin '" + *cell.clock + "' missing from pin list", line, 1);
  try {
    cell.logic = parse_expr(expr_text, cell.inputs);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line, e.column());
  }
  return cell;
}

}  // namespace

Library parse_library(std::string_view text) {
  Library lib;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!trim(line).empty()) {
      CellFunction cell = parse_cell_line(line, line_no);
      try {
        lib.add(std::move(cell));
      } catch (const ConfigError& e) {
        throw ParseError(e.what(), line_no, 1);
      }
    }
    start = end + 1;
  }
  return lib;
}

std::string emit_library(const Library& lib) {
  std::string out;
  for (const auto& c : lib.cells()) {
    std::vector<std::string> pins = c.inputs;
    if (c.clock) pins.push_back(*c.clock);
    std::string list;
    for (std::size_t i = 0; i < pins.size(); ++i) list += (i ? ", " : "") + pins[i];
    out += fmt::format("{} {} = {} ({}) ; area={} ; cap={}", c.name, c.output,
                       c.logic.to_string(c.inputs), list, c.area, c.input_cap);
    if (c.clock) out += " ; clock=" + *c.clock;
    out += '\n';
  }
  return out;
}

}  // namespace wddl
