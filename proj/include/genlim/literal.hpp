#pragma once

// Text syntax for SymbolicSet values.
//
//   expr    := term (('+' | '\') term)*          union, difference (left assoc)
//   term    := unary ('&' unary)*                intersection
//   unary   := '~' unary | postfix               complement
//   postfix := atom (('<' | '<=' | '>' | '>=') int)*
//   atom    := 'Z' | 'empty' | '{' ints '}' | 'finite' '{' ints '}'
//            | 'tail' '(' int ')' | 'evens' | 'odds' | 'mod' '(' int ',' int ')'
//            | 'eps' '{' 'period' '=' int ';' 'window' '=' '[' int ',' int ']' ';'
//                    'explicit' '=' '{' ints '}' ';' 'left' '=' '{' ints '}' ';'
//                    'right' '=' '{' ints '}' '}'
//            | '(' expr ')'
//
// `evens<0 + {1,2}` is the negative even integers together with 1 and 2.
// print() picks the shortest of Z, {..}, Z \ {..}, tail(n), and falls back
// to the eps{..} form, so parse(print(s)) == s for every s.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

#include "genlim/langset.hpp"

namespace genlim {

namespace detail {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view text) : s_(text) {}

  SymbolicSet parse() {
    SymbolicSet out = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("set literal: " + what + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  bool keyword(std::string_view word) {
    skip();
    if (s_.substr(pos_, word.size()) != word) return false;
    const std::size_t end = pos_ + word.size();
    if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) return false;
    pos_ = end;
    return true;
  }

  Int integer() {
    skip();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer");
    }
    try {
      return std::stoll(std::string(s_.substr(start, pos_ - start)));
    } catch (const std::out_of_range&) {
      pos_ = start;
      fail("integer out of range");
    }
  }

  std::vector<Int> int_list() {
    expect("{");
    std::vector<Int> xs;
    if (eat("}")) return xs;
    do {
      xs.push_back(integer());
    } while (eat(","));
    expect("}");
    return xs;
  }

  SymbolicSet expr() {
    SymbolicSet acc = term();
    for (;;) {
      if (eat("+")) {
        acc = unite(acc, term());
      } else if (eat("\\")) {
        acc = difference(acc, term());
      } else {
        return acc;
      }
    }
  }

  SymbolicSet term() {
    SymbolicSet acc = unary();
    while (eat("&")) acc = intersect(acc, unary());
    return acc;
  }

  SymbolicSet unary() {
    if (eat("~")) return complement(unary());
    return postfix();
  }

  SymbolicSet postfix() {
    SymbolicSet acc = atom();
    for (;;) {
      if (eat("<=")) {
        acc = intersect(acc, SymbolicSet::at_most(integer()));
      } else if (eat(">=")) {
        acc = intersect(acc, SymbolicSet::at_least(integer()));
      } else if (eat("<")) {
        acc = intersect(acc, SymbolicSet::at_most(integer() - 1));
      } else if (eat(">")) {
        acc = intersect(acc, SymbolicSet::at_least(integer() + 1));
      } else {
        return acc;
      }
    }
  }

  SymbolicSet atom() {
    if (eat("(")) {
      SymbolicSet inner = expr();
      expect(")");
      return inner;
    }
    skip();
    if (pos_ < s_.size() && s_[pos_] == '{') return SymbolicSet::finite(int_list());
    if (keyword("Z")) return SymbolicSet::all();
    if (keyword("empty")) return SymbolicSet::empty();
    if (keyword("finite")) return SymbolicSet::finite(int_list());
    if (keyword("evens")) return SymbolicSet::residue_class(2, 0);
    if (keyword("odds")) return SymbolicSet::residue_class(2, 1);
    if (keyword("tail")) {
      expect("(");
      const Int n = integer();
      expect(")");
      return SymbolicSet::at_least(n);
    }
    if (keyword("mod")) {
      expect("(");
      const Int p = integer();
      expect(",");
      const Int r = integer();
      expect(")");
      return SymbolicSet::residue_class(p, r);
    }
    if (keyword("eps")) return structural();
    fail("expected a set");
  }

  SymbolicSet structural() {
    expect("{");
    RawSet raw;
    expect("period");
    expect("=");
    raw.period = integer();
    expect(";");
    expect("window");
    expect("=");
    expect("[");
    raw.lo = integer();
    expect(",");
    raw.hi = integer();
    expect("]");
    expect(";");
    expect("explicit");
    expect("=");
    raw.members = int_list();
    expect(";");
    expect("left");
    expect("=");
    raw.left_residues = int_list();
    expect(";");
    expect("right");
    expect("=");
    raw.right_residues = int_list();
    expect("}");
    return SymbolicSet::normalize(raw);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::string join(const std::vector<Int>& xs) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  os << '}';
  return os.str();
}

}  // namespace detail

inline SymbolicSet parse_set(std::string_view text) {
  return detail::LiteralParser(text).parse();
}

inline std::string print_set(const SymbolicSet& s) {
  if (s.is_all()) return "Z";
  if (s.is_empty()) return "empty";
  if (s.is_finite()) return detail::join(s.members());
  const SymbolicSet co = complement(s);
  if (co.is_finite()) return "Z \\ " + detail::join(co.members());
  if (s.period() == 1 && s.right_has(0) && !s.left_has(0)) {
    const Int m = s.members().empty() ? s.hi() + 1 : s.members().front();
    if (s == SymbolicSet::at_least(m)) return "tail(" + std::to_string(m) + ")";
  }
  std::ostringstream os;
  os << "eps{period=" << s.period() << "; window=[" << s.lo() << "," << s.hi()
     << "]; explicit=" << detail::join(s.members()) << "; left=" << detail::join(s.left_residues())
     << "; right=" << detail::join(s.right_residues()) << "}";
  return os.str();
}

}  // namespace genlim
