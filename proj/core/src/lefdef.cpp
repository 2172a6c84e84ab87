// Copyright 2026 The wddlflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <charconv>

#include <fmt/format.h>

#include "wddl/error.hpp"
#include "wddl/geometry.hpp"

namespace wddl {
namespace {

struct Tok {
  std::string text;
  int line = 0;
  int column = 0;
};

// Whitespace-separated words; `(`, `)` and `;` are tokens of their own.
std::vector<Tok> lex(std::string_view src) {
  std::vector<Tok> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    Tok t{{}, line, col};
    if (c == '(' || c == ')' || c == ';') {
      t.text = std::string(1, c);
      ++i;
      ++col;
    } else {
      while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) && src[i] != '(' &&
             src[i] != ')' && src[i] != ';') {
        t.text += src[i];
        ++i;
        ++col;
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::string_view src) : toks_(lex(src)) {}

  bool done() const { return pos_ >= toks_.size(); }
  const std::string& peek() const {
    static const std::string kEnd;
    return done() ? kEnd : toks_[pos_].text;
  }
  bool accept(std::string_view w) {
    if (!done() && toks_[pos_].text == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view w) {
    if (!accept(w)) fail("expected '" + std::string(w) + "', got '" + peek() + "'");
  }
  std::string word(const char* what) {
    if (done() || peek() == "(" || peek() == ")" || peek() == ";") fail(std::string("expected ") + what);
    return toks_[pos_++].text;
  }
  int integer(const char* what) {
    const std::string w = word(what);
    int v = 0;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || p != w.data() + w.size()) fail(std::string("expected integer ") + what + ", got '" + w + "'");
    return v;
  }
  Point point() {
    expect("(");
    Point p;
    p.x = integer("x");
    p.y = integer("y");
    expect(")");
    return p;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Tok& t = done() ? (toks_.empty() ? kEndTok : toks_.back()) : toks_[pos_];
    throw ParseError(msg, t.line, t.column);
  }

 private:
  static inline const Tok kEndTok{{}, 1, 1};
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

std::string pt(Point p) { return fmt::format("( {} {} )", p.x, p.y); }

}  // namespace

std::string emit_lef(const LibraryGeometry& lib) {
  std::string out = fmt::format("VARIANT {} ;\n", to_string(lib.variant));
  for (const auto& l : lib.layers)
    out += fmt::format("LAYER {} ;\n  DIRECTION {} ;\n  WIDTH {} ;\n  PITCH {} ;\nEND\n", l.name,
                       l.direction == Direction::Horizontal ? "H" : "V", l.width, l.pitch);
  for (const auto& m : lib.macros) {
    out += fmt::format("MACRO {} ;\n  SIZE {} BY {} ;\n", m.name, m.width, m.height);
    for (const auto& p : m.pins)
      out += fmt::format("  PIN {} {} {} ;\n", p.name, pt(p.at), p.use == PinUse::Input ? "INPUT" : "OUTPUT");
    out += "END\n";
  }
  return out;
}

LibraryGeometry parse_lef(std::string_view text) {
  Reader r(text);
  LibraryGeometry lib;
  bool have_variant = false;
  while (!r.done()) {
    if (r.accept("VARIANT")) {
      try {
        lib.variant = parse_variant(r.word("variant"));
      } catch (const ConfigError& e) {
        r.fail(e.what());
      }
      have_variant = true;
      r.expect(";");
    } else if (r.accept("LAYER")) {
      Layer l;
      l.name = r.word("layer name");
      r.expect(";");
      while (!r.accept("END")) {
        if (r.accept("DIRECTION")) {
          const std::string d = r.word("direction");
          if (d != "H" && d != "V") r.fail("direction must be H or V");
          l.direction = d == "H" ? Direction::Horizontal : Direction::Vertical;
        } else if (r.accept("WIDTH")) {
          l.width = r.integer("width");
        } else if (r.accept("PITCH")) {
          l.pitch = r.integer("pitch");
        } else {
          r.fail("unknown layer statement '" + r.peek() + "'");
        }
        r.expect(";");
      }
      lib.layers.push_back(std::move(l));
    } else if (r.accept("MACRO")) {
      Macro m;
      m.name = r.word("macro name");
      r.expect(";");
      while (!r.accept("END")) {
        if (r.accept("SIZE")) {
          m.width = r.integer("width");
          r.expect("BY");
          m.height = r.integer("height");
        } else if (r.accept("PIN")) {
          MacroPin p;
          p.name = r.word("pin name");
          p.at = r.point();
          if (r.accept("OUTPUT")) p.use = PinUse::Output;
          else r.accept("INPUT");
          m.pins.push_back(std::move(p));
        } else {
          r.fail("unknown macro statement '" + r.peek() + "'");
        }
        r.expect(";");
      }
      lib.macros.push_back(std::move(m));
    } else {
      r.fail("expected VARIANT, LAYER or MACRO, got '" + r.peek() + "'");
    }
  }
  if (!have_variant) {
    // Infer: fat wires are two tracks wide; differential pins come in _t/_f pairs.
    const bool wide = !lib.layers.empty() && lib.layers.front().width == 2;
    lib.variant = wide ? Variant::Fat : Variant::Single;
    for (const auto& m : lib.macros)
      for (const auto& p : m.pins)
        if (!wide && p.name.ends_with("_f")) lib.variant = Variant::Differential;
  }
  return lib;
}

std::string emit_def(const Design& d) {
  std::string out = fmt::format("DESIGN {} ;\nDIEAREA {} {} ;\n", d.name, pt(d.die_lo), pt(d.die_hi));
  out += fmt::format("COMPONENTS {} ;\n", d.components.size());
  for (const auto& c : d.components)
    out += fmt::format("- {} {} + PLACED {} {} ;\n", c.name, c.macro, pt(c.at), c.orient);
  out += "END COMPONENTS\n";
  out += fmt::format("NETS {} ;\n", d.nets.size());
  for (const auto& n : d.nets) {
    out += "- " + n.name;
    for (const auto& p : n.pins) out += fmt::format(" ( {} {} )", p.inst, p.pin);
    if (!n.segments.empty() || !n.vias.empty()) {
      out += "\n  + ROUTED";
      for (const auto& s : n.segments)
        out += fmt::format("\n    {} {} {} {}", s.layer, s.width, pt(s.a), pt(s.b));
      for (const auto& v : n.vias) out += fmt::format("\n    VIA {} {} {}", pt(v.at), v.lower, v.upper);
    }
    out += " ;\n";
  }
  out += "END NETS\nEND DESIGN\n";
  return out;
}

Design parse_def(std::string_view text, const LibraryGeometry& lib) {
  Reader r(text);
  Design d;
  d.variant = lib.variant;
  r.expect("DESIGN");
  d.name = r.word("design name");
  r.expect(";");
  r.expect("DIEAREA");
  d.die_lo = r.point();
  d.die_hi = r.point();
  r.expect(";");

  r.expect("COMPONENTS");
  const int nc = r.integer("component count");
  r.expect(";");
  while (!r.accept("END")) {
    r.expect("-");
    Component c;
    c.name = r.word("component name");
    c.macro = r.word("macro name");
    if (!lib.find(c.macro)) r.fail("component " + c.name + " uses unknown macro '" + c.macro + "'");
    r.expect("+");
    r.expect("PLACED");
    c.at = r.point();
    c.orient = r.word("orientation");
    if (c.orient != "N") r.fail("only orientation N is supported");
    r.expect(";");
    if (d.find_component(c.name)) r.fail("component '" + c.name + "' placed twice");
    d.components.push_back(std::move(c));
  }
  r.expect("COMPONENTS");
  if (nc != static_cast<int>(d.components.size())) r.fail("component count does not match the header");

  r.expect("NETS");
  const int nn = r.integer("net count");
  r.expect(";");
  while (!r.accept("END")) {
    r.expect("-");
    DesignNet n;
    n.name = r.word("net name");
    while (r.accept("(")) {
      NetPin p;
      p.inst = r.word("instance");
      p.pin = r.word("pin");
      r.expect(")");
      const Component* c = d.find_component(p.inst);
      if (!c) r.fail("net " + n.name + " references unknown component '" + p.inst + "'");
      if (!lib.at(c->macro).find_pin(p.pin)) r.fail("macro " + c->macro + " has no pin '" + p.pin + "'");
      n.pins.push_back(std::move(p));
    }
    if (r.accept("+")) {
      r.expect("ROUTED");
      while (!r.accept(";")) {
        if (r.accept("VIA")) {
          Via v;
          v.at = r.point();
          v.lower = r.word("lower layer");
          v.upper = r.word("upper layer");
          if (!lib.layer(v.lower) || !lib.layer(v.upper)) r.fail("via references an unknown layer");
          n.vias.push_back(std::move(v));
        } else {
          Segment s;
          s.layer = r.word("layer");
          if (!lib.layer(s.layer)) r.fail("unknown layer '" + s.layer + "'");
          s.width = r.integer("wire width");
          s.a = r.point();
          s.b = r.point();
          n.segments.push_back(std::move(s));
        }
      }
    } else {
      r.expect(";");
    }
    d.nets.push_back(std::move(n));
  }
  r.expect("NETS");
  if (nn != static_cast<int>(d.nets.size())) r.fail("net count does not match the header");
  r.expect("END");
  r.expect("DESIGN");
  if (!r.done()) r.fail("text after END DESIGN");
  return d;
}

}  // namespace wddl
