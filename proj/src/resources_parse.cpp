// Copyright 2026 The qredist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <limits>

#include "qredist/resources.hpp"

namespace qredist::resources {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Inequality inequality() {
    Inequality out;
    out.lhs = expr();
    skip();
    if (eat(">=") || eat("\xE2\x89\xA5"))  // ≥
      out.relation = Relation::finite;
    else if (eat(">~") || eat("\xE2\xAA\xB0"))  // ⪰
      out.relation = Relation::asymptotic;
    else
      fail("expected '>=', '\xE2\x89\xA5', '>~' or '\xE2\xAA\xB0'");
    out.rhs = expr();
    end();
    return out;
  }

  Expr expr() {
    skip();
    Expr e;
    if (peek() == '0' && zero_literal()) return e;
    bool negate = false;
    if (peek() == '-') {
      ++pos_;
      negate = true;
    }
    term(e, negate);
    for (;;) {
      skip();
      if (peek() == '+')
        negate = false;
      else if (peek() == '-' && !starts_with("->"))
        negate = true;
      else
        break;
      ++pos_;
      term(e, negate);
    }
    return e;
  }

  void end() {
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool starts_with(const char* t) const { return s_.compare(pos_, std::char_traits<char>::length(t), t) == 0; }
  bool eat(const char* t) {
    if (!starts_with(t)) return false;
    pos_ += std::char_traits<char>::length(t);
    return true;
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // "0" standing alone as the whole side.
  bool zero_literal() {
    std::size_t p = pos_ + 1;
    while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
    if (p < s_.size() && s_[p] != '>' && s_[p] != '\xE2') return false;
    pos_ = p;
    return true;
  }

  void term(Expr& e, bool negate) {
    skip();
    if (peek() == 'o') {
      std::size_t p = pos_ + 1;
      while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
      if (p == s_.size() || s_[p] != '[') fail("expected a term");
      if (negate) fail("sublinear terms cannot be negated");
      pos_ = p + 1;
      e.add_sublinear(symbol());
      expect(']');
      return;
    }
    Rate r(1);
    if (std::isdigit(static_cast<unsigned char>(peek())))
      r = Rate(rational());
    else if (peek() == '(')
      r = affine();
    else if (peek() != '[' && !starts_with("state:"))
      fail("expected a term");
    skip();
    Symbol sym;
    if (starts_with("state:")) {
      sym = symbol();
    } else {
      expect('[');
      sym = symbol();
      expect(']');
    }
    e.add(sym, negate ? -r : r);
  }

  Symbol symbol() {
    skip();
    if (eat("state:")) {
      const std::size_t begin = pos_;
      while (pos_ < s_.size()) {
        const char c = s_[pos_];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '|' || c == '.' || c == '\'')
          ++pos_;
        else
          break;
      }
      if (pos_ == begin) fail("state resource needs a name");
      return Symbol::state(s_.substr(begin, pos_ - begin));
    }
    // Longest match first.
    if (eat("q->qq") || eat("q\xE2\x86\x92qq")) return Symbol::cobit();
    if (eat("q->q") || eat("q\xE2\x86\x92q")) return Symbol::qubit();
    if (eat("c->c") || eat("c\xE2\x86\x92" "c")) return Symbol::cbit();
    if (eat("qq")) return Symbol::ebit();
    std::size_t p = pos_;
    while (p < s_.size() && s_[p] != ']' && !std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
    fail("unknown resource symbol '" + s_.substr(pos_, p - pos_) + "'");
  }

  std::int64_t integer() {
    const std::size_t begin = pos_;
    std::int64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      const int d = peek() - '0';
      if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10) {
        pos_ = begin;
        fail("number too large");
      }
      v = v * 10 + d;
      ++pos_;
    }
    if (pos_ == begin) fail("expected a number");
    return v;
  }

  Rational rational() {
    const std::int64_t whole = integer();
    if (peek() == '/') {
      ++pos_;
      const std::size_t at = pos_;
      const std::int64_t den = integer();
      if (den == 0) {
        pos_ = at;
        fail("zero denominator");
      }
      return Rational(whole, den);
    }
    if (peek() == '.' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      Rational frac(0);
      std::int64_t scale = 1;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        if (scale > std::numeric_limits<std::int64_t>::max() / 10) fail("too many decimals");
        scale *= 10;
        frac += Rational(peek() - '0', scale);
        ++pos_;
      }
      return Rational(whole) + frac;
    }
    return Rational(whole);
  }

  std::string atom_name() {
    const std::size_t begin = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) fail("expected an entropic atom");
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    if (peek() == '(') {
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != ')') {
        if (s_[pos_] == '(') fail("nested parentheses in atom");
        ++pos_;
      }
      if (peek() != ')') fail("unterminated atom");
      ++pos_;
    }
    return s_.substr(begin, pos_ - begin);
  }

  // '(' item (('+'|'-') item)* ')' with item = rational ['*' atom] | atom.
  Rate affine() {
    expect('(');
    Rate r;
    bool negate = false;
    skip();
    if (peek() == '-') {
      ++pos_;
      negate = true;
    }
    for (;;) {
      skip();
      Rate item;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        const Rational c = rational();
        skip();
        if (peek() == '*') {
          ++pos_;
          skip();
          item = Rate::atom(atom_name(), c);
        } else {
          item = Rate(c);
        }
      } else {
        item = Rate::atom(atom_name());
      }
      r += negate ? -item : item;
      skip();
      if (peek() == ')') {
        ++pos_;
        return r;
      }
      if (peek() == '+')
        negate = false;
      else if (peek() == '-')
        negate = true;
      else
        fail("expected '+', '-' or ')'");
      ++pos_;
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text) {
  Parser p(text);
  Expr e = p.expr();
  p.end();
  return e;
}

Inequality parse_ri(const std::string& text) { return Parser(text).inequality(); }

}  // namespace qredist::resources
