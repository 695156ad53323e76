#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "crn/error.hpp"
#include "crn/model.hpp"

// Text format for reaction networks (extension ".crn"):
//
//   file     := (stmt NEWLINE)*
//   stmt     := reaction | comment
//   reaction := complex arrow complex rates?
//   arrow    := "->" | "<->"
//   rates    := "[" real ("," real)? "]"
//   complex  := "0" | term ("+" term)*
//   term     := [integer] identifier
//
// "<->" expands to two reactions; omitted rates default to 1. "0" denotes
// the empty complex. "#" starts a comment. "2B" is coefficient 2 of B;
// zero coefficients are forbidden. Species order is first appearance.

namespace crn {

namespace detail {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;

  SourceSpan span(std::size_t begin, std::size_t end) const {
    return SourceSpan{line, begin - line_start + 1, begin, end};
  }
  [[noreturn]] void fail(const std::string& msg, std::size_t begin,
                         std::size_t end) const {
    throw Error("syntax", msg, span(begin, end));
  }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool at_line_end() const {
    return pos >= text.size() || text[pos] == '\n' || text[pos] == '#';
  }
  void skip_blanks() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                 text[pos] == '\r'))
      ++pos;
  }
};

inline double parse_real(Cursor& c) {
  c.skip_blanks();
  std::size_t begin = c.pos;
  double value = 0.0;
  auto res = std::from_chars(c.text.data() + c.pos,
                             c.text.data() + c.text.size(), value);
  if (res.ec != std::errc())
    c.fail("expected a number", begin, begin + 1);
  c.pos = static_cast<std::size_t>(res.ptr - c.text.data());
  return value;
}

inline Complex parse_complex(Cursor& c,
                             std::vector<std::string>& species,
                             std::map<std::string, std::size_t>& index) {
  c.skip_blanks();
  std::size_t begin = c.pos;
  // Coefficients keyed by species index; dimension fixed after the file
  // is fully read.
  std::map<std::size_t, std::int64_t> terms;

  // Lone "0" is the empty complex.
  if (c.peek() == '0') {
    std::size_t save = c.pos;
    ++c.pos;
    c.skip_blanks();
    char nxt = c.peek();
    if (nxt != '+' && !std::isalnum(static_cast<unsigned char>(nxt)) &&
        nxt != '_') {
      Complex out;
      out.coeffs.assign(1, 0);  // resized later
      out.coeffs.clear();
      return out;
    }
    c.pos = save;
  }

  bool first = true;
  while (true) {
    c.skip_blanks();
    if (!first) {
      if (c.peek() != '+') break;
      ++c.pos;
      c.skip_blanks();
    }
    std::size_t term_begin = c.pos;
    std::int64_t coeff = 1;
    if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      std::int64_t v = 0;
      auto res = std::from_chars(c.text.data() + c.pos,
                                 c.text.data() + c.text.size(), v);
      c.pos = static_cast<std::size_t>(res.ptr - c.text.data());
      coeff = v;
      if (coeff == 0)
        c.fail("zero coefficient (write \"0\" alone for the empty complex)",
               term_begin, c.pos);
    }
    if (!(std::isalpha(static_cast<unsigned char>(c.peek())) ||
          c.peek() == '_'))
      c.fail("expected species identifier", term_begin, c.pos + 1);
    std::size_t id_begin = c.pos;
    while (std::isalnum(static_cast<unsigned char>(c.peek())) ||
           c.peek() == '_')
      ++c.pos;
    std::string name(c.text.substr(id_begin, c.pos - id_begin));
    auto it = index.find(name);
    std::size_t si;
    if (it == index.end()) {
      si = species.size();
      index[name] = si;
      species.push_back(name);
    } else {
      si = it->second;
    }
    terms[si] += coeff;
    first = false;
    c.skip_blanks();
    if (c.peek() != '+') break;
  }
  if (first) c.fail("expected a complex", begin, begin + 1);

  Complex out;
  out.coeffs.clear();
  for (const auto& [si, coeff] : terms) {
    if (out.coeffs.size() <= si) out.coeffs.resize(si + 1, 0);
    out.coeffs[si] = coeff;
  }
  return out;
}

}  // namespace detail

inline ReactionSystem parse_network(std::string_view text) {
  detail::Cursor c{text};
  std::vector<std::string> species;
  std::map<std::string, std::size_t> index;

  struct RawReaction {
    Complex src, prod;
    double rate;
    SourceSpan span;
  };
  std::vector<RawReaction> raw;

  while (c.pos < text.size()) {
    c.skip_blanks();
    if (c.at_line_end()) {
      // comment or blank remainder
      while (c.pos < text.size() && text[c.pos] != '\n') ++c.pos;
      if (c.pos < text.size()) {
        ++c.pos;
        ++c.line;
        c.line_start = c.pos;
      }
      continue;
    }
    std::size_t stmt_begin = c.pos;
    Complex lhs = detail::parse_complex(c, species, index);
    c.skip_blanks();

    bool reversible = false;
    std::size_t arrow_begin = c.pos;
    if (text.substr(c.pos, 3) == "<->") {
      reversible = true;
      c.pos += 3;
    } else if (text.substr(c.pos, 2) == "->") {
      c.pos += 2;
    } else {
      c.fail("expected \"->\" or \"<->\"", arrow_begin, arrow_begin + 1);
    }

    Complex rhs = detail::parse_complex(c, species, index);
    c.skip_blanks();

    double fwd = 1.0, bwd = 1.0;
    bool two_rates = false;
    if (c.peek() == '[') {
      std::size_t rates_begin = c.pos;
      ++c.pos;
      fwd = detail::parse_real(c);
      bwd = fwd;
      c.skip_blanks();
      if (c.peek() == ',') {
        ++c.pos;
        bwd = detail::parse_real(c);
        two_rates = true;
        c.skip_blanks();
      }
      if (c.peek() != ']')
        c.fail("expected \"]\"", rates_begin, c.pos + 1);
      ++c.pos;
      if (two_rates && !reversible)
        c.fail("two rates given for an irreversible reaction", rates_begin,
               c.pos);
    }
    c.skip_blanks();
    if (!c.at_line_end())
      c.fail("unexpected trailing input", c.pos, c.pos + 1);
    SourceSpan stmt_span = c.span(stmt_begin, c.pos);

    raw.push_back({lhs, rhs, fwd, stmt_span});
    if (reversible) raw.push_back({rhs, lhs, bwd, stmt_span});
  }

  // Fix dimensions now that the species set is known, then check
  // self-loops with full vectors.
  const std::size_t d = species.size();
  ReactionSystem sys;
  sys.species = species;
  for (auto& rr : raw) {
    rr.src.coeffs.resize(d, 0);
    rr.prod.coeffs.resize(d, 0);
    if (rr.src == rr.prod)
      throw Error("self-loop", "reaction has equal source and product",
                  rr.span);
    sys.reactions.push_back({rr.src, rr.prod, rr.rate});
  }
  return sys;
}

namespace detail {

inline std::string format_rate(double v) {
  if (v == static_cast<double>(static_cast<std::int64_t>(v)) &&
      std::abs(v) < 1e15) {
    return std::to_string(static_cast<std::int64_t>(v));
  }
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Term order inside a complex is alphabetical by species name.
inline std::string format_complex(const Complex& y,
                                  const std::vector<std::string>& species,
                                  const std::vector<std::size_t>& alpha) {
  if (y.is_empty()) return "0";
  std::string out;
  for (std::size_t k : alpha) {
    if (y.coeffs[k] == 0) continue;
    if (!out.empty()) out += "+";
    if (y.coeffs[k] != 1) out += std::to_string(y.coeffs[k]);
    out += species[k];
  }
  return out;
}

}  // namespace detail

// Canonical text: one reaction per line in first-appearance order,
// reverse pairs merged into "<->" oriented by the lexicographically
// smaller source vector. parse(serialize(s)) == s up to reaction order.
inline std::string serialize_network(const ReactionSystem& sys) {
  std::vector<std::size_t> alpha(sys.dim());
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = i;
  std::sort(alpha.begin(), alpha.end(), [&](std::size_t a, std::size_t b) {
    return sys.species[a] < sys.species[b];
  });

  std::vector<bool> done(sys.reactions.size(), false);
  std::string out;
  for (std::size_t i = 0; i < sys.reactions.size(); ++i) {
    if (done[i]) continue;
    const Reaction& r = sys.reactions[i];
    std::optional<std::size_t> reverse;
    for (std::size_t j = 0; j < sys.reactions.size(); ++j)
      if (j != i && !done[j] && sys.reactions[j].source == r.product &&
          sys.reactions[j].product == r.source) {
        reverse = j;
        break;
      }
    done[i] = true;
    if (reverse) {
      done[*reverse] = true;
      const Reaction* fwd = &r;
      const Reaction* bwd = &sys.reactions[*reverse];
      if (bwd->source.coeffs < fwd->source.coeffs) std::swap(fwd, bwd);
      out += detail::format_complex(fwd->source, sys.species, alpha);
      out += " <-> ";
      out += detail::format_complex(fwd->product, sys.species, alpha);
      out += " [" + detail::format_rate(fwd->rate) + ", " +
             detail::format_rate(bwd->rate) + "]\n";
    } else {
      out += detail::format_complex(r.source, sys.species, alpha);
      out += " -> ";
      out += detail::format_complex(r.product, sys.species, alpha);
      out += " [" + detail::format_rate(r.rate) + "]\n";
    }
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

}  // namespace crn
