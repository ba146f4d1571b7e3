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

#include "qredist/assemble.hpp"

namespace qredist::resources {

namespace {

Labels join(Labels a, const Labels& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const Symbol kBefore = Symbol::state("AC|B");
const Symbol kAfter = Symbol::state("A|CB");

}  // namespace

Valuation corner_atoms(const PureState& psi, const Partition& p) {
  p.validate(psi.space());
  Valuation v;
  v.set(kICRB, mutual_info(psi, p.C, join(p.R, p.B)));
  v.set(kICA, mutual_info(psi, p.C, p.A));
  v.set(kICB, mutual_info(psi, p.C, p.B));
  return v;
}

Inequality piggyback_premise(const Rate& i_c_rb, const Rate& i_c_a, const Rate& i_c_b) {
  const Rational half(1, 2);
  Inequality out;
  out.lhs.add(kBefore, 1).add(Symbol::qubit(), i_c_rb * half).add(Symbol::ebit(), i_c_a * half);
  out.rhs.add(kAfter, 1).add(Symbol::cobit(), i_c_b);
  return out;
}

CornerAssembly assemble_corner(const Valuation& values, bool symbolic) {
  auto rate = [&](const std::string& name) {
    if (symbolic) return Rate::atom(name);
    const auto it = values.exact.find(name);
    if (it == values.exact.end()) throw ValidationError("no value for " + name);
    return Rate(it->second);
  };
  const Rate a = rate(kICRB), b = rate(kICA), c = rate(kICB);
  const Rational half(1, 2);

  CornerAssembly out;
  out.derivation = Derivation(values);
  Derivation& d = out.derivation;
  const std::size_t premise = d.premise("piggyback", piggyback_premise(a, b, c));
  const std::size_t identity = d.axiom("coherent_channel_identity");
  const std::size_t scaled = d.scale(identity, c * half);
  Expr pad;
  pad.add(kAfter, 1);
  const std::size_t padded = d.add(scaled, pad);
  out.aux_step = d.compose(premise, padded);
  const std::size_t no_q = d.cancel(out.aux_step, Symbol::qubit());
  const std::size_t done = d.cancel(no_q, Symbol::ebit());

  const Inequality& r = d.step(done).result;
  out.q = r.lhs.rate(Symbol::qubit()) - r.rhs.rate(Symbol::qubit());
  out.e = r.lhs.rate(Symbol::ebit()) - r.rhs.rate(Symbol::ebit());
  out.q_expected = (a - c) * half;
  out.e_expected = (b - c) * half;
  out.sublinear_communication = r.lhs.has_sublinear(Symbol::qubit());
  out.sublinear_entanglement = r.lhs.has_sublinear(Symbol::ebit());
  out.q_value = out.q.evaluate(values.exact);
  out.e_value = out.e.evaluate(values.exact);
  return out;
}

}  // namespace qredist::resources
