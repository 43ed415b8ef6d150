#pragma once

// Text formats.
//
// Complex:
//   complex <name>
//   cells <d>: <label> <label> ...        (one line per degree, 0 upward)
//   boundary <d>: <label> = <c>*<label> + <c>*<label> - ...   or  = 0
// Blank lines and '#' comments are ignored. A cell without a boundary line
// has zero boundary. Coefficients default to 1 when written without '*'.
//
// Chain:   label:coeff,label:coeff    ("0" is the zero chain)
//
// Action (one block per group element):
//   element <name>
//   source: (a b c)(d e)     or  [x y z]   (cycle or image notation)
//   target: ()

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "homfill/builders.hpp"
#include "homfill/chain.hpp"
#include "homfill/equivariance.hpp"
#include "homfill/error.hpp"

namespace homfill {

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline bool parse_integer(std::string_view s, Coeff& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == ' ' || c == '\t' || c == ':' || c == ',' || c == '=' || c == '*' || c == '#') return false;
  return true;
}

inline std::size_t parse_degree(const Token& tok, std::size_t line) {
  auto t = tok.text;
  if (t.empty() || t.back() != ':') throw ParseError(line, tok.column + t.size(), "expected ':' after degree");
  t.remove_suffix(1);
  Coeff d = 0;
  if (!parse_integer(t, d) || d < 0 || t.front() == '+' || t.front() == '-')
    throw ParseError(line, tok.column, "malformed degree '" + std::string(t) + "'");
  return static_cast<std::size_t>(d);
}

}  // namespace detail

/// Parses the complex format. With `validate`, ∂∘∂ ≠ 0 raises ValidationError.
inline ChainComplex parse_complex(std::string_view text, bool validate = true) {
  std::optional<ComplexBuilder> builder;
  std::size_t next_degree = 0;
  std::vector<std::vector<char>> has_boundary;
  bool seen_boundary = false;
  std::size_t line_no = 0;
  std::size_t last_line = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto toks = detail::tokenize(detail::strip_comment(raw));
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    last_line = line_no;
    const auto& head = toks[0];
    if (head.text == "complex") {
      if (builder) throw ParseError(line_no, head.column, "duplicate 'complex' header");
      if (toks.size() != 2) throw ParseError(line_no, head.column, "expected 'complex <name>'");
      if (!detail::valid_label(toks[1].text)) throw ParseError(line_no, toks[1].column, "invalid complex name");
      builder.emplace(std::string(toks[1].text));
      continue;
    }
    if (!builder) throw ParseError(line_no, head.column, "expected 'complex <name>' header first");
    if (head.text == "cells") {
      if (seen_boundary) throw ParseError(line_no, head.column, "'cells' line after boundary lines");
      if (toks.size() < 2) throw ParseError(line_no, head.column + 5, "expected degree");
      std::size_t d = detail::parse_degree(toks[1], line_no);
      if (d != next_degree)
        throw ParseError(line_no, toks[1].column, "expected cells of degree " + std::to_string(next_degree));
      ++next_degree;
      builder->ensure_degree(d);
      for (std::size_t i = 2; i < toks.size(); ++i) {
        if (!detail::valid_label(toks[i].text))
          throw ParseError(line_no, toks[i].column, "invalid label '" + std::string(toks[i].text) + "'");
        if (builder->find(d, std::string(toks[i].text)))
          throw ParseError(line_no, toks[i].column, "duplicate cell '" + std::string(toks[i].text) + "'");
        builder->add_cell(d, std::string(toks[i].text));
      }
      has_boundary.emplace_back(toks.size() - 2, 0);
      continue;
    }
    if (head.text == "boundary") {
      seen_boundary = true;
      if (toks.size() < 2) throw ParseError(line_no, head.column + 8, "expected degree");
      std::size_t d = detail::parse_degree(toks[1], line_no);
      if (d == 0 || d >= next_degree) throw ParseError(line_no, toks[1].column, "no cells of degree " + std::to_string(d) + " to bound");
      if (toks.size() < 5 || toks[3].text != "=")
        throw ParseError(line_no, toks.size() > 3 ? toks[3].column : raw.size() + 1, "expected '<label> = <terms>'");
      auto cell = builder->find(d, std::string(toks[2].text));
      if (!cell) throw ParseError(line_no, toks[2].column, "unknown cell '" + std::string(toks[2].text) + "'");
      if (has_boundary[d][*cell]) throw ParseError(line_no, toks[2].column, "duplicate boundary for '" + std::string(toks[2].text) + "'");
      has_boundary[d][*cell] = 1;
      std::vector<std::pair<std::uint32_t, Coeff>> terms;
      if (toks.size() == 5 && toks[4].text == "0") {
        builder->set_boundary(d, *cell, {});
        continue;
      }
      int pending_sign = 1;
      bool expect_term = true;
      bool first = true;
      for (std::size_t i = 4; i < toks.size(); ++i) {
        const auto& tk = toks[i];
        if (!expect_term) {
          if (tk.text == "+") pending_sign = 1;
          else if (tk.text == "-") pending_sign = -1;
          else throw ParseError(line_no, tk.column, "expected '+' or '-'");
          expect_term = true;
          continue;
        }
        std::string_view term = tk.text;
        std::size_t col = tk.column;
        Coeff c = 1;
        auto star = term.find('*');
        std::string_view label = term;
        if (star != std::string_view::npos) {
          std::string_view num = term.substr(0, star);
          if (!first && (num.starts_with('-') || num.starts_with('+')))
            throw ParseError(line_no, col, "signed coefficient after an operator");
          if (!detail::parse_integer(num, c)) throw ParseError(line_no, col, "malformed coefficient '" + std::string(num) + "'");
          label = term.substr(star + 1);
          col += star + 1;
        } else if (first && term.starts_with('-')) {
          c = -1;
          label = term.substr(1);
          col += 1;
        }
        auto target = builder->find(d - 1, std::string(label));
        if (!target) throw ParseError(line_no, col, "unknown cell '" + std::string(label) + "' in degree " + std::to_string(d - 1));
        if (c == 0) throw ParseError(line_no, tk.column, "zero coefficient");
        terms.emplace_back(*target, detail::checked_mul(pending_sign, c));
        expect_term = false;
        first = false;
      }
      if (expect_term) throw ParseError(line_no, raw.size() + 1, "expected a term after the operator");
      builder->set_boundary(d, *cell, std::move(terms));
      continue;
    }
    throw ParseError(line_no, head.column, "unknown directive '" + std::string(head.text) + "'");
  }
  if (!builder) throw ParseError(line_no, 1, "missing 'complex <name>' header");
  if (next_degree == 0) throw ParseError(last_line + 1, 1, "missing 'cells 0:' line");
  ChainComplex X = builder->build();
  if (validate) {
    auto report = validate_complex(X);
    if (!report)
      throw ValidationError("boundary of boundary is nonzero at cell '" + report.cell + "' in degree " +
                            std::to_string(report.degree));
  }
  return X;
}

namespace detail {

inline void write_terms(std::ostream& os, const Chain& c) {
  if (c.is_zero()) {
    os << "0";
    return;
  }
  bool first = true;
  for (auto [id, k] : c.entries()) {
    if (first)
      os << k;
    else
      os << (k < 0 ? " - " : " + ") << (k < 0 ? -k : k);
    os << "*" << c.basis()->label(id);
    first = false;
  }
}

}  // namespace detail

inline std::string serialize_complex(const ChainComplex& X) {
  std::ostringstream os;
  os << "complex " << X.name() << "\n";
  for (std::size_t d = 0; d <= X.top_degree(); ++d) {
    os << "cells " << d << ":";
    for (const auto& l : X.basis(d)->labels()) os << " " << l;
    os << "\n";
  }
  for (std::size_t d = 1; d <= X.top_degree(); ++d) {
    const auto& b = X.boundary(d);
    for (std::uint32_t s = 0; s < b.source()->size(); ++s) {
      os << "boundary " << d << ": " << b.source()->label(BasisId(s)) << " = ";
      detail::write_terms(os, b.column(BasisId(s)));
      os << "\n";
    }
  }
  return os.str();
}

/// Structural equality: names, labels in order, and boundary matrices.
inline bool same_complex(const ChainComplex& a, const ChainComplex& b) {
  if (a.name() != b.name() || a.top_degree() != b.top_degree()) return false;
  for (std::size_t d = 0; d <= a.top_degree(); ++d)
    if (a.basis(d)->labels() != b.basis(d)->labels()) return false;
  for (std::size_t d = 1; d <= a.top_degree(); ++d)
    if (a.boundary(d).columns() != b.boundary(d).columns()) return false;
  return true;
}

/// "label:coeff,label:coeff" or "0".
inline Chain parse_chain(std::string_view text, const BasisPtr& basis) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\n' || text.back() == '\r'))
    text.remove_suffix(1);
  if (text == "0") return Chain(basis);
  if (text.empty()) throw InputError("empty chain (write 0 for the zero chain)");
  std::vector<Chain::Entry> entries;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    auto colon = item.rfind(':');
    if (colon == std::string_view::npos) throw InputError("chain term '" + std::string(item) + "' lacks ':coeff'");
    std::string label(item.substr(0, colon));
    Coeff c = 0;
    if (!detail::parse_integer(item.substr(colon + 1), c))
      throw InputError("malformed coefficient in chain term '" + std::string(item) + "'");
    auto id = basis->find(label);
    if (!id) throw InputError("unknown cell '" + label + "' in '" + basis->name() + "'");
    entries.emplace_back(*id, c);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return Chain(basis, std::move(entries));
}

inline std::string format_chain(const Chain& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (auto [id, c] : x.entries()) {
    if (!out.empty()) out += ",";
    out += x.basis()->label(id) + ":" + std::to_string(c);
  }
  return out;
}

namespace detail {

inline Permutation parse_permutation(std::string_view text, const Basis& basis, std::size_t line) {
  auto lookup = [&](std::string_view l, std::size_t col) {
    auto id = basis.find(std::string(l));
    if (!id) throw ParseError(line, col, "unknown cell '" + std::string(l) + "' in '" + basis.name() + "'");
    return id->index;
  };
  std::size_t i = 0;
  while (i < text.size() && text[i] == ' ') ++i;
  if (i < text.size() && text[i] == '[') {
    auto close = text.find(']', i);
    if (close == std::string_view::npos) throw ParseError(line, i + 1, "unterminated '['");
    Permutation p;
    for (const auto& tok : tokenize(text.substr(i + 1, close - i - 1))) p.push_back(lookup(tok.text, tok.column + i + 1));
    if (!is_permutation_of(p, basis.size())) throw ParseError(line, i + 1, "image list is not a permutation of '" + basis.name() + "'");
    return p;
  }
  Permutation p = identity_permutation(basis.size());
  std::vector<char> used(basis.size(), 0);
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    if (text[i] != '(') throw ParseError(line, i + 1, "expected '(' or '['");
    auto close = text.find(')', i);
    if (close == std::string_view::npos) throw ParseError(line, i + 1, "unterminated '('");
    std::vector<std::uint32_t> cyc;
    for (const auto& tok : tokenize(text.substr(i + 1, close - i - 1))) {
      auto v = lookup(tok.text, tok.column + i + 1);
      if (used[v]) throw ParseError(line, tok.column + i + 1, "cell '" + std::string(tok.text) + "' appears twice");
      used[v] = 1;
      cyc.push_back(v);
    }
    for (std::size_t k = 0; k < cyc.size(); ++k) p[cyc[k]] = cyc[(k + 1) % cyc.size()];
    i = close + 1;
  }
  return p;
}

}  // namespace detail

inline PermutationAction parse_action(std::string_view text, const BasisPtr& source, const BasisPtr& target) {
  std::vector<GroupElement> elems;
  std::optional<GroupElement> cur;
  bool have_source = false;
  bool have_target = false;
  std::size_t line_no = 0;
  auto finish = [&](std::size_t line) {
    if (!cur) return;
    if (!have_source || !have_target)
      throw ParseError(line, 1, "element '" + cur->name + "' needs both 'source:' and 'target:' lines");
    elems.push_back(std::move(*cur));
    cur.reset();
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = detail::strip_comment(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    auto toks = detail::tokenize(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (toks[0].text == "element") {
      finish(line_no);
      if (toks.size() != 2) throw ParseError(line_no, toks[0].column, "expected 'element <name>'");
      cur = GroupElement{std::string(toks[1].text), {}, {}};
      have_source = have_target = false;
      continue;
    }
    if (toks[0].text == "source:" || toks[0].text == "target:") {
      if (!cur) throw ParseError(line_no, toks[0].column, "permutation outside an 'element' block");
      bool is_source = toks[0].text == "source:";
      auto rest = line.substr(toks[0].column - 1 + toks[0].text.size());
      std::size_t offset = toks[0].column - 1 + toks[0].text.size();
      Permutation p;
      try {
        p = detail::parse_permutation(rest, is_source ? *source : *target, line_no);
      } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column() + offset, std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
      }
      if (is_source) {
        if (have_source) throw ParseError(line_no, toks[0].column, "duplicate 'source:' line");
        cur->source = std::move(p);
        have_source = true;
      } else {
        if (have_target) throw ParseError(line_no, toks[0].column, "duplicate 'target:' line");
        cur->target = std::move(p);
        have_target = true;
      }
      continue;
    }
    throw ParseError(line_no, toks[0].column, "unknown directive '" + std::string(toks[0].text) + "'");
  }
  finish(line_no);
  if (elems.empty()) throw ParseError(line_no, 1, "action file lists no elements");
  return PermutationAction(source, target, std::move(elems));
}

inline std::string serialize_action(const PermutationAction& A) {
  std::ostringstream os;
  auto write = [&](const Permutation& p, const Basis& b) {
    os << "[";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << b.label(BasisId(p[i]));
    os << "]";
  };
  for (const auto& g : A.elements()) {
    os << "element " << g.name << "\nsource: ";
    write(g.source, *A.source());
    os << "\ntarget: ";
    write(g.target, *A.target());
    os << "\n";
  }
  return os.str();
}

}  // namespace homfill
