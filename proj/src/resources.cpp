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

#include "qredist/resources.hpp"

#include <cmath>
#include <sstream>

namespace qredist::resources {

ParseError::ParseError(std::size_t position, const std::string& what)
    : ValidationError("parse error at offset " + std::to_string(position) + ": " + what), position_(position) {}

Symbol Symbol::state(std::string name) {
  if (name.empty()) throw ValidationError("state resource needs a name");
  return {Kind::state, std::move(name)};
}

std::string Symbol::str() const {
  switch (kind) {
    case Kind::qubit_channel: return "q->q";
    case Kind::ebit: return "qq";
    case Kind::cbit_channel: return "c->c";
    case Kind::coherent_channel: return "q->qq";
    case Kind::state: return "state:" + label;
  }
  return {};
}

namespace {

std::string rational_str(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

}  // namespace

Rate Rate::atom(const std::string& name, Rational coef) {
  Rate r;
  if (sgn(coef) != 0) r.coef_[name] = coef;
  return r;
}

std::optional<int> Rate::sign() const {
  const int c = sgn(constant_);
  bool all_pos = c >= 0, all_neg = c <= 0;
  for (const auto& [_, a] : coef_) {
    all_pos = all_pos && sgn(a) > 0;
    all_neg = all_neg && sgn(a) < 0;
  }
  if (coef_.empty()) return c;
  // With atoms present the value can still be zero unless the constant is
  // strictly signed.
  if (all_pos && c > 0) return 1;
  if (all_neg && c < 0) return -1;
  return std::nullopt;
}

bool Rate::provably_nonnegative() const {
  if (sgn(constant_) < 0) return false;
  for (const auto& [_, a] : coef_)
    if (sgn(a) < 0) return false;
  return true;
}

Rational Rate::evaluate(const std::map<std::string, Rational>& values) const {
  Rational v = constant_;
  for (const auto& [name, a] : coef_) {
    const auto it = values.find(name);
    if (it == values.end()) throw ValidationError("no value for atom " + name);
    v += a * it->second;
  }
  return v;
}

Rate Rate::substitute(const std::map<std::string, Rational>& values) const {
  Rate r(constant_);
  for (const auto& [name, a] : coef_) {
    const auto it = values.find(name);
    r += it == values.end() ? atom(name, a) : Rate(a * it->second);
  }
  return r;
}

Rate Rate::operator-() const {
  Rate r = *this;
  r *= Rational(-1);
  return r;
}

Rate& Rate::operator+=(const Rate& o) {
  constant_ += o.constant_;
  for (const auto& [name, a] : o.coef_) {
    const Rational v = coef_[name] + a;
    if (sgn(v) == 0)
      coef_.erase(name);
    else
      coef_[name] = v;
  }
  return *this;
}

Rate& Rate::operator*=(const Rational& k) {
  constant_ *= k;
  if (sgn(k) == 0) {
    coef_.clear();
    return *this;
  }
  for (auto& [_, a] : coef_) a *= k;
  return *this;
}

Rate operator*(const Rate& a, const Rate& b) {
  if (a.is_constant()) return b * a.constant();
  if (b.is_constant()) return a * b.constant();
  throw ValidationError("product of two entropic rates is not affine: (" + a.str() + ") * (" + b.str() + ")");
}

std::string Rate::str() const {
  std::vector<std::string> items;
  for (const auto& [name, a] : coef_) {
    if (a == Rational(1))
      items.push_back(name);
    else if (a == Rational(-1))
      items.push_back("-" + name);
    else
      items.push_back(rational_str(a) + "*" + name);
  }
  if (sgn(constant_) != 0 || items.empty()) items.push_back(rational_str(constant_));
  std::string s = items.front();
  for (std::size_t i = 1; i < items.size(); ++i)
    s += items[i][0] == '-' ? " - " + items[i].substr(1) : " + " + items[i];
  return s;
}

Rational snap(double x) {
  if (!std::isfinite(x) || std::abs(x) > 9e9) throw ValidationError("rate out of range for snapping");
  constexpr std::int64_t den = 1000000000;
  return Rational(std::llround(x * double(den)), den);
}

double to_double(const Rational& r) { return double(r.numerator()) / double(r.denominator()); }

void Valuation::set(const std::string& atom, double value) {
  raw[atom] = value;
  exact[atom] = snap(value);
}

void Valuation::set_exact(const std::string& atom, Rational value) {
  raw[atom] = to_double(value);
  exact[atom] = value;
}

// ---- Expr

Expr& Expr::add(const Symbol& s, const Rate& r) {
  Rate v = rate(s) + r;
  if (v.is_zero())
    terms_.erase(s);
  else
    terms_[s] = v;
  absorb(s);
  return *this;
}

Expr& Expr::add_sublinear(const Symbol& s) {
  sublinear_.insert(s);
  absorb(s);
  return *this;
}

Expr& Expr::remove(const Symbol& s) {
  terms_.erase(s);
  return *this;
}

void Expr::absorb(const Symbol& s) {
  const auto it = terms_.find(s);
  if (it != terms_.end() && it->second.sign() == 1) sublinear_.erase(s);
}

Rate Expr::rate(const Symbol& s) const {
  const auto it = terms_.find(s);
  return it == terms_.end() ? Rate() : it->second;
}

Expr Expr::operator+(const Expr& o) const {
  Expr e = *this;
  for (const auto& [s, r] : o.terms_) e.add(s, r);
  for (const auto& s : o.sublinear_) e.add_sublinear(s);
  return e;
}

Expr Expr::scaled(const Rate& k) const {
  Expr e;
  for (const auto& [s, r] : terms_) e.add(s, r * k);
  for (const auto& s : sublinear_) e.add_sublinear(s);
  return e;
}

Expr Expr::substitute(const std::map<std::string, Rational>& values) const {
  Expr e;
  for (const auto& [s, r] : terms_) e.add(s, r.substitute(values));
  for (const auto& s : sublinear_) e.add_sublinear(s);
  return e;
}

Expr Expr::without_sublinear() const {
  Expr e = *this;
  e.sublinear_.clear();
  return e;
}

std::string Expr::str() const {
  std::set<Symbol> all = sublinear_;
  for (const auto& [s, _] : terms_) all.insert(s);
  if (all.empty()) return "0";
  std::vector<std::pair<bool, std::string>> parts;  // (negated, text)
  for (const auto& s : all) {
    if (sublinear_.count(s)) parts.emplace_back(false, "o[" + s.str() + "]");
    const auto it = terms_.find(s);
    if (it == terms_.end()) continue;
    const Rate& r = it->second;
    if (s.kind == Kind::state && r == Rate(1))
      parts.emplace_back(false, s.str());
    else if (r.is_constant())
      parts.emplace_back(sgn(r.constant()) < 0, rational_str(abs(r.constant())) + "[" + s.str() + "]");
    else
      parts.emplace_back(false, "(" + r.str() + ")[" + s.str() + "]");
  }
  std::string out = (parts.front().first ? "-" : "") + parts.front().second;
  for (std::size_t i = 1; i < parts.size(); ++i) out += (parts[i].first ? " - " : " + ") + parts[i].second;
  return out;
}

std::vector<std::string> diff(const Expr& a, const Expr& b) {
  std::set<Symbol> all = a.sublinear();
  all.insert(b.sublinear().begin(), b.sublinear().end());
  for (const auto& [s, _] : a.terms()) all.insert(s);
  for (const auto& [s, _] : b.terms()) all.insert(s);
  std::vector<std::string> out;
  for (const auto& s : all) {
    if (a.rate(s) != b.rate(s))
      out.push_back("[" + s.str() + "]: " + a.rate(s).str() + " vs " + b.rate(s).str());
    if (a.has_sublinear(s) != b.has_sublinear(s))
      out.push_back("o[" + s.str() + "]: " + (a.has_sublinear(s) ? "present" : "absent") + " vs " +
                    (b.has_sublinear(s) ? "present" : "absent"));
  }
  return out;
}

// ---- Inequality

Inequality Inequality::normalized() const {
  Inequality out = *this;
  for (const auto& [s, r] : lhs.terms()) {
    if (r.sign() != -1) continue;
    out.lhs.remove(s);
    out.rhs.add(s, -r);
  }
  return out;
}

std::string Inequality::str() const {
  return lhs.str() + (relation == Relation::finite ? " >= " : " >~ ") + rhs.str();
}

// ---- rules

Inequality compose(const Inequality& first, const Inequality& second) {
  const Inequality a = first.normalized(), b = second.normalized();
  const auto d = diff(a.rhs, b.lhs);
  if (!d.empty()) {
    std::string msg = "middle expressions differ:";
    for (const auto& line : d) msg += " " + line + ";";
    throw ValidationError(msg);
  }
  const Relation rel =
      a.relation == Relation::finite && b.relation == Relation::finite ? Relation::finite : Relation::asymptotic;
  return {a.lhs, b.rhs, rel};
}

namespace {

// Sign of r, using atom values only when the form does not settle it.
int decide_sign(const Rate& r, const Valuation* values, bool& used) {
  if (const auto s = r.sign()) return *s;
  if (!values) throw ValidationError("sign of " + r.str() + " depends on entropic values; supply them");
  used = true;
  const Rational v = r.evaluate(values->exact);
  return sgn(v);
}

}  // namespace

CancelResult cancel(const Inequality& ineq, const Symbol& a, const Valuation* values) {
  const Inequality n = ineq.normalized();
  if (n.relation != Relation::asymptotic)
    throw ValidationError("cancellation needs an asymptotic inequality");
  if (!n.lhs.has(a)) throw ValidationError("[" + a.str() + "] is absent from the left-hand side");
  if (!n.rhs.has(a)) throw ValidationError("[" + a.str() + "] is absent from the right-hand side");
  CancelResult out;
  out.r_in = n.lhs.rate(a);
  out.r_out = n.rhs.rate(a);
  if (decide_sign(out.r_in, values, out.used_valuation) < 0 || decide_sign(out.r_out, values, out.used_valuation) < 0)
    throw ValidationError("cancellation needs nonnegative rates on [" + a.str() + "]");
  const Rate gap = out.r_in - out.r_out;
  out.result = n;
  out.result.lhs.remove(a);
  out.result.rhs.remove(a);
  if (decide_sign(gap, values, out.used_valuation) > 0) {
    out.branch = CancelBranch::first;
    out.result.lhs.add(a, gap);
  } else {
    out.branch = CancelBranch::second;
    out.result.lhs.add_sublinear(a);
    out.result.rhs.add(a, -gap);
  }
  return out;
}

Inequality scale(const Inequality& ineq, const Rate& factor) {
  if (!factor.provably_nonnegative()) throw ValidationError("scale factor must be nonnegative: " + factor.str());
  if (ineq.relation == Relation::finite) {
    if (!factor.is_constant() || factor.constant().denominator() != 1 || sgn(factor.constant()) == 0)
      throw ValidationError("finite inequalities scale only by positive integers");
  }
  const Inequality n = ineq.normalized();
  return {n.lhs.scaled(factor), n.rhs.scaled(factor), n.relation};
}

Inequality add(const Inequality& ineq, const Expr& gamma) {
  const Inequality n = ineq.normalized();
  return Inequality{n.lhs + gamma, n.rhs + gamma, n.relation}.normalized();
}

Inequality asymptotic(const Inequality& ineq) {
  Inequality n = ineq.normalized();
  n.relation = Relation::asymptotic;
  return n;
}

const std::vector<Axiom>& axioms() {
  static const std::vector<Axiom> list = {
      {"qubit_ge_cbit", parse_ri("1[q->q] >= 1[c->c]")},
      {"qubit_ge_ebit", parse_ri("1[q->q] >= 1[qq]")},
      {"teleportation", parse_ri("1[qq] + 2[c->c] >= 1[q->q]")},
      {"superdense_coding", parse_ri("1[qq] + 1[q->q] >= 2[c->c]")},
      {"coherent_teleportation", parse_ri("1[qq] + 2[q->qq] >= 2[qq] + 1[q->q]")},
      {"coherent_channel_identity", parse_ri("2[q->qq] >~ 1[q->q] + 1[qq]")},
  };
  return list;
}

std::optional<std::string> axiom_name(const Inequality& ineq) {
  for (const auto& a : axioms())
    if (a.ineq == ineq) return a.name;
  return std::nullopt;
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::axiom: return "axiom";
    case Rule::premise: return "premise";
    case Rule::compose: return "compose";
    case Rule::cancel: return "cancel";
    case Rule::scale: return "scale";
    case Rule::add: return "add";
    case Rule::asymptotic: return "asymptotic";
    case Rule::substitute: return "substitute";
  }
  return {};
}

// ---- Derivation

const Inequality& Derivation::at(std::size_t i) const {
  if (i >= steps_.size()) throw ValidationError("derivation step " + std::to_string(i) + " does not exist");
  return steps_[i].result;
}

const Inequality& Derivation::result() const {
  if (steps_.empty()) throw ValidationError("empty derivation");
  return steps_.back().result;
}

std::size_t Derivation::push(Step s) {
  steps_.push_back(std::move(s));
  return steps_.size() - 1;
}

std::size_t Derivation::axiom(const std::string& name) {
  for (const auto& a : axioms())
    if (a.name == name) return push({Rule::axiom, name, {}, {}, {}, {}, {}, a.ineq});
  throw ValidationError("unknown axiom " + name);
}

std::size_t Derivation::premise(const std::string& name, const Inequality& ineq) {
  return push({Rule::premise, name, {}, {}, {}, {}, {}, ineq});
}

std::size_t Derivation::compose(std::size_t first, std::size_t second) {
  return push({Rule::compose, {}, {first, second}, {}, {}, {}, {}, resources::compose(at(first), at(second))});
}

std::size_t Derivation::cancel(std::size_t in, const Symbol& a) {
  const CancelResult c = resources::cancel(at(in), a, &values_);
  std::string note = "[" + a.str() + "] R_in = " + c.r_in.str() + ", R_out = " + c.r_out.str();
  note += c.branch == CancelBranch::first ? ", R_in > R_out" : ", R_out >= R_in";
  if (c.used_valuation) note += " (by value)";
  return push({Rule::cancel, note, {in}, a, {}, {}, c.branch, c.result});
}

std::size_t Derivation::scale(std::size_t in, const Rate& factor) {
  return push({Rule::scale, factor.str(), {in}, {}, factor, {}, {}, resources::scale(at(in), factor)});
}

std::size_t Derivation::add(std::size_t in, const Expr& gamma) {
  return push({Rule::add, gamma.str(), {in}, {}, {}, gamma, {}, resources::add(at(in), gamma)});
}

std::size_t Derivation::asymptotic(std::size_t in) {
  return push({Rule::asymptotic, {}, {in}, {}, {}, {}, {}, resources::asymptotic(at(in))});
}

std::size_t Derivation::substitute(std::size_t in) {
  const Inequality& x = at(in);
  Inequality out{x.lhs.substitute(values_.exact), x.rhs.substitute(values_.exact), x.relation};
  return push({Rule::substitute, {}, {in}, {}, {}, {}, {}, out});
}

std::optional<std::size_t> Derivation::verify() const {
  Derivation replay(values_);
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const Step& s = steps_[i];
    for (std::size_t j : s.inputs)
      if (j >= i) return i;
    try {
      switch (s.rule) {
        case Rule::axiom: replay.axiom(s.note); break;
        case Rule::premise: replay.premise(s.note, s.result); break;
        case Rule::compose: replay.compose(s.inputs.at(0), s.inputs.at(1)); break;
        case Rule::cancel: replay.cancel(s.inputs.at(0), s.symbol.value()); break;
        case Rule::scale: replay.scale(s.inputs.at(0), s.factor.value()); break;
        case Rule::add: replay.add(s.inputs.at(0), s.addend.value()); break;
        case Rule::asymptotic: replay.asymptotic(s.inputs.at(0)); break;
        case Rule::substitute: replay.substitute(s.inputs.at(0)); break;
      }
    } catch (const std::exception&) {
      return i;
    }
    const Step& r = replay.steps_.back();
    if (!(r.result == s.result) || r.branch != s.branch) return i;
  }
  return std::nullopt;
}

std::string Derivation::trace() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const Step& s = steps_[i];
    os << "(" << i << ") " << rule_name(s.rule);
    if (!s.inputs.empty()) {
      os << " of";
      for (std::size_t j : s.inputs) os << " (" << j << ")";
    }
    if (!s.note.empty()) os << " [" << s.note << "]";
    os << "\n    " << s.result.str() << "\n";
  }
  return os.str();
}

}  // namespace qredist::resources
