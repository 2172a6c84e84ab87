// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <map>
#include <set>

#include "structural.hpp"
#include "wddl/error.hpp"
#include "wddl/netlist.hpp"

namespace wddl {
namespace detail {
namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&]() {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token t;
    t.pos = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t.text += src[i];
        advance();
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Number;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        t.text += src[i];
        advance();
      }
    } else if (std::string_view("();,.[]:=").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance();
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  RawModule parse() {
    RawModule m;
    expect_word("module");
    m.name = ident("module name");
    expect("(");
    std::vector<std::string> header;
    if (!accept(")")) {
      do {
        header.push_back(ident("port name"));
      } while (accept(","));
      expect(")");
    }
    expect(";");

    std::map<std::string, Port> port_decls;
    std::set<std::string> header_set(header.begin(), header.end());
    if (header_set.size() != header.size()) fail("duplicate port in module header");

    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::End) fail("missing endmodule");
      if (t.kind != Tok::Ident) fail("expected a statement");
      if (t.text == "endmodule") {
        next();
        break;
      }
      if (t.text == "input" || t.text == "output" || t.text == "wire") {
        const std::string kw = next().text;
        auto [width, bus] = range();
        do {
          const Token& nt = peek();
          std::string name = ident("declared name");
          if (kw == "wire") {
            m.wires.push_back({name, width, bus});
          } else {
            if (!header_set.count(name))
              throw ParseError("'" + name + "' is not in the module port list", nt.pos.line, nt.pos.column);
            if (port_decls.count(name))
              throw ParseError("port '" + name + "' declared twice", nt.pos.line, nt.pos.column);
            port_decls[name] = Port{name, kw == "input" ? PortDir::Input : PortDir::Output, width, bus};
          }
        } while (accept(","));
        expect(";");
      } else if (t.text == "assign") {
        next();
        Assign a;
        a.lhs = net_ref();
        expect("=");
        a.rhs = net_ref();
        expect(";");
        m.assigns.push_back(std::move(a));
      } else {
        RawInstance ri;
        ri.pos = t.pos;
        ri.inst.cell = next().text;
        ri.inst.name = ident("instance name");
        expect("(");
        if (!accept(")")) {
          do {
            expect(".");
            PinBinding b;
            b.pin = ident("pin name");
            expect("(");
            b.net = net_ref();
            expect(")");
            ri.inst.pins.push_back(std::move(b));
          } while (accept(","));
          expect(")");
        }
        expect(";");
        m.instances.push_back(std::move(ri));
      }
    }
    if (peek().kind != Tok::End) fail("text after endmodule");
    for (const auto& name : header) {
      auto it = port_decls.find(name);
      if (it == port_decls.end()) fail("port '" + name + "' has no direction declaration");
      m.ports.push_back(it->second);
    }
    return m;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().pos.line, peek().pos.column);
  }

  bool accept(std::string_view p) {
    if (peek().kind == Tok::Punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }

  void expect(std::string_view p) {
    if (!accept(p)) {
      const std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
      fail("expected '" + std::string(p) + "', got " + got);
    }
  }

  void expect_word(std::string_view w) {
    if (peek().kind != Tok::Ident || peek().text != w) fail("expected '" + std::string(w) + "'");
    next();
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return next().text;
  }

  int number() {
    if (peek().kind != Tok::Number) fail("expected a number");
    return std::stoi(next().text);
  }

  std::pair<int, bool> range() {
    if (!accept("[")) return {1, false};
    const int msb = number();
    expect(":");
    const int lsb = number();
    expect("]");
    if (lsb != 0) fail("bus ranges must be [W-1:0]");
    return {msb + 1, true};
  }

  std::string net_ref() {
    std::string name = ident("net name");
    if (accept("[")) {
      name += "[" + std::to_string(number()) + "]";
      expect("]");
    }
    return name;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string decl_range(int width, bool bus) {
  return bus ? "[" + std::to_string(width - 1) + ":0] " : "";
}

}  // namespace

RawModule parse_structural(std::string_view text) { return Parser(tokenize(text)).parse(); }

std::string emit_structural(const std::string& name, const std::vector<Port>& ports,
                            const std::vector<Wire>& wires,
                            const std::vector<Instance>& instances,
                            const std::vector<Assign>& assigns) {
  std::string out = "module " + name + " (";
  for (std::size_t i = 0; i < ports.size(); ++i) out += (i ? ", " : "") + ports[i].name;
  out += ");\n";
  for (const auto& p : ports)
    out += (p.dir == PortDir::Input ? "input " : "output ") + decl_range(p.width, p.bus) + p.name + ";\n";
  for (const auto& w : wires) out += "wire " + decl_range(w.width, w.bus) + w.name + ";\n";
  for (const auto& inst : instances) {
    out += inst.cell + " " + inst.name + " (";
    for (std::size_t i = 0; i < inst.pins.size(); ++i)
      out += (i ? ", ." : ".") + inst.pins[i].pin + "(" + inst.pins[i].net + ")";
    out += ");\n";
  }
  for (const auto& a : assigns) out += "assign " + a.lhs + " = " + a.rhs + ";\n";
  out += "endmodule\n";
  return out;
}

}  // namespace detail

Netlist parse_netlist(std::string_view text, const Library& lib) {
  detail::RawModule raw = detail::parse_structural(text);
  Netlist n;
  n.name = raw.name;
  n.ports = std::move(raw.ports);
  n.wires = std::move(raw.wires);
  n.assigns = std::move(raw.assigns);

  std::set<std::string> declared;
  std::set<std::string> bus_names;
  for (const auto& p : n.ports)
    if (p.bus) bus_names.insert(p.name);
  for (const auto& w : n.wires)
    if (w.bus) bus_names.insert(w.name);
  for (auto& b : n.nets()) declared.insert(std::move(b));

  // Undeclared scalar nets are implicit wires, declared in first-use order.
  auto implicit = [&](const std::string& net, const detail::SourcePos& pos) {
    if (declared.count(net)) return;
    auto [base, bit] = split_bit(net);
    if (bit) {
      if (bus_names.count(base))
        throw ParseError("bit select " + net + " is out of range", pos.line, pos.column);
      throw ParseError("bit select of undeclared bus '" + base + "'", pos.line, pos.column);
    }
    n.wires.push_back({net, 1, false});
    declared.insert(net);
  };

  for (auto& ri : raw.instances) {
    const CellFunction* cell = lib.find(ri.inst.cell);
    if (!cell)
      throw NetlistError("line " + std::to_string(ri.pos.line) + ": unknown cell function '" +
                         ri.inst.cell + "'");
    for (const auto& b : ri.inst.pins) implicit(b.net, ri.pos);
    if (cell->sequential() && !n.clock)
      if (const auto* ck = ri.inst.net_of(*cell->clock)) n.clock = *ck;
    n.instances.push_back(std::move(ri.inst));
  }
  for (const auto& a : n.assigns) {
    implicit(a.lhs, {0, 0});
    implicit(a.rhs, {0, 0});
  }

  auto diags = validate_netlist(n, lib);
  if (!diags.empty()) {
    std::string msg = std::string(to_string(diags.front().kind)) + ": " + diags.front().message;
    if (diags.size() > 1) msg += " (+" + std::to_string(diags.size() - 1) + " more)";
    throw NetlistError(msg);
  }
  return n;
}

std::string emit_netlist(const Netlist& n) {
  return detail::emit_structural(n.name, n.ports, n.wires, n.instances, n.assigns);
}

}  // namespace wddl
