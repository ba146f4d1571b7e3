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

#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qredist/common.hpp"

namespace qredist::resources {

using Rational = boost::rational<std::int64_t>;

/// Sign of a rational. Comparing rationals with plain integers recurses in
/// boost's operators under C++20's rewritten comparisons; use this or compare
/// with Rational values.
inline int sgn(const Rational& r) { return r.numerator() > 0 ? 1 : r.numerator() < 0 ? -1 : 0; }

/// Syntax error in an inequality; `position` is a 0-based byte offset.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t position, const std::string& what);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

enum class Kind { qubit_channel, ebit, cbit_channel, coherent_channel, state };

struct Symbol {
  Kind kind = Kind::ebit;
  std::string label;  ///< only for Kind::state

  static Symbol qubit() { return {Kind::qubit_channel, {}}; }
  static Symbol ebit() { return {Kind::ebit, {}}; }
  static Symbol cbit() { return {Kind::cbit_channel, {}}; }
  static Symbol cobit() { return {Kind::coherent_channel, {}}; }
  static Symbol state(std::string name);

  std::string str() const;  ///< "q->q", "qq", "c->c", "q->qq", "state:<name>"
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Affine form c + sum_k a_k x_k over named atoms x_k, which stand for
/// nonnegative entropic quantities such as "I(C;B)".
class Rate {
 public:
  Rate() = default;
  Rate(Rational c) : constant_(c) {}  // NOLINT: rationals are rates
  Rate(std::int64_t c) : constant_(c) {}  // NOLINT
  static Rate atom(const std::string& name, Rational coef = 1);

  const Rational& constant() const { return constant_; }
  const std::map<std::string, Rational>& coefficients() const { return coef_; }
  bool is_constant() const { return coef_.empty(); }
  bool is_zero() const { return coef_.empty() && sgn(constant_) == 0; }

  /// Known sign from the form alone (atoms are nonnegative): +1 if provably
  /// > 0, 0 if identically zero, -1 if provably < 0, nullopt otherwise.
  std::optional<int> sign() const;
  bool provably_nonnegative() const;

  Rational evaluate(const std::map<std::string, Rational>& values) const;
  Rate substitute(const std::map<std::string, Rational>& values) const;

  Rate operator-() const;
  Rate& operator+=(const Rate& o);
  Rate& operator-=(const Rate& o) { return *this += -o; }
  Rate& operator*=(const Rational& k);
  friend Rate operator+(Rate a, const Rate& b) { return a += b; }
  friend Rate operator-(Rate a, const Rate& b) { return a -= b; }
  friend Rate operator*(Rate a, const Rational& k) { return a *= k; }
  friend Rate operator*(const Rational& k, Rate a) { return a *= k; }
  /// Product; one factor must be constant.
  friend Rate operator*(const Rate& a, const Rate& b);

  std::string str() const;
  friend bool operator==(const Rate&, const Rate&) = default;

 private:
  Rational constant_{0};
  std::map<std::string, Rational> coef_;  ///< no zero entries
};

/// Atom values used to settle comparisons the form alone cannot decide.
struct Valuation {
  std::map<std::string, Rational> exact;
  std::map<std::string, double> raw;

  void set(const std::string& atom, double value);  ///< snaps to 1e-9
  void set_exact(const std::string& atom, Rational value);
};

/// Nearest multiple of 1e-9, reduced.
Rational snap(double x);
double to_double(const Rational& r);

/// Canonical linear combination of resources.
class Expr {
 public:
  Expr() = default;

  Expr& add(const Symbol& s, const Rate& r);
  Expr& add_sublinear(const Symbol& s);
  Expr& remove(const Symbol& s);

  const std::map<Symbol, Rate>& terms() const { return terms_; }
  const std::set<Symbol>& sublinear() const { return sublinear_; }
  Rate rate(const Symbol& s) const;
  bool has(const Symbol& s) const { return terms_.count(s) > 0; }
  bool has_sublinear(const Symbol& s) const { return sublinear_.count(s) > 0; }
  bool empty() const { return terms_.empty() && sublinear_.empty(); }

  Expr operator+(const Expr& o) const;
  Expr scaled(const Rate& k) const;
  Expr substitute(const std::map<std::string, Rational>& values) const;
  Expr without_sublinear() const;

  std::string str() const;
  friend bool operator==(const Expr&, const Expr&) = default;

 private:
  void absorb(const Symbol& s);

  std::map<Symbol, Rate> terms_;
  std::set<Symbol> sublinear_;
};

/// Symbol-by-symbol differences between two expressions, empty when equal.
std::vector<std::string> diff(const Expr& a, const Expr& b);

enum class Relation { finite, asymptotic };

struct Inequality {
  Expr lhs;
  Expr rhs;
  Relation relation = Relation::asymptotic;

  /// Negative left-hand rates become positive right-hand ones.
  Inequality normalized() const;
  std::string str() const;
  friend bool operator==(const Inequality&, const Inequality&) = default;
};

Expr parse_expr(const std::string& text);
Inequality parse_ri(const std::string& text);

// Rules. Each one validates its own preconditions and throws ValidationError.

Inequality compose(const Inequality& first, const Inequality& second);

enum class CancelBranch { first, second };

struct CancelResult {
  Inequality result;
  CancelBranch branch;
  Rate r_in;
  Rate r_out;
  bool used_valuation = false;
};

/// Lemma: R_in a + beta >~ R_out a + gamma. The first branch applies iff
/// R_in > R_out >= 0; otherwise o a + beta >~ (R_out - R_in) a + gamma.
CancelResult cancel(const Inequality& ineq, const Symbol& a, const Valuation* values = nullptr);

/// Rates multiplied by a nonnegative factor; finite inequalities only take
/// positive integers (concatenation).
Inequality scale(const Inequality& ineq, const Rate& factor);
/// alpha >= beta  =>  alpha + gamma >= beta + gamma.
Inequality add(const Inequality& ineq, const Expr& gamma);
/// Every finite inequality holds asymptotically.
Inequality asymptotic(const Inequality& ineq);

struct Axiom {
  std::string name;
  Inequality ineq;
};

/// Fixed list: qubit >= cbit, qubit >= ebit, teleportation, superdense coding,
/// coherent teleportation (finite) and the coherent-channel identity
/// (asymptotic).
const std::vector<Axiom>& axioms();
std::optional<std::string> axiom_name(const Inequality& ineq);

enum class Rule { axiom, premise, compose, cancel, scale, add, asymptotic, substitute };
std::string rule_name(Rule r);

struct Step {
  Rule rule = Rule::premise;
  std::string note;            ///< axiom/premise name or human-readable parameter
  std::vector<std::size_t> inputs;  ///< indices of earlier steps
  std::optional<Symbol> symbol;     ///< cancel
  std::optional<Rate> factor;       ///< scale
  std::optional<Expr> addend;       ///< add
  std::optional<CancelBranch> branch;
  Inequality result;
};

/// Ordered proof. Every step references only earlier steps.
class Derivation {
 public:
  explicit Derivation(Valuation values = {}) : values_(std::move(values)) {}

  std::size_t axiom(const std::string& name);
  std::size_t premise(const std::string& name, const Inequality& ineq);
  std::size_t compose(std::size_t first, std::size_t second);
  std::size_t cancel(std::size_t in, const Symbol& a);
  std::size_t scale(std::size_t in, const Rate& factor);
  std::size_t add(std::size_t in, const Expr& gamma);
  std::size_t asymptotic(std::size_t in);
  std::size_t substitute(std::size_t in);

  const std::vector<Step>& steps() const { return steps_; }
  const Step& step(std::size_t i) const { return steps_.at(i); }
  const Inequality& result() const;
  const Valuation& values() const { return values_; }

  /// Re-runs every rule from its recorded inputs. Returns the index of the
  /// first step whose recorded result differs, or nullopt.
  std::optional<std::size_t> verify() const;
  std::string trace() const;

 private:
  std::size_t push(Step s);
  const Inequality& at(std::size_t i) const;

  Valuation values_;
  std::vector<Step> steps_;
};

}  // namespace qredist::resources
